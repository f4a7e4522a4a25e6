"""
Sum over paths.

Amplitudes are propagated frame by frame with the transfer recurrence

    K_{t+1}(s') = sum over transitions s -> s' of w(step_action(s, s')) * K_t(s)

where each frame step is a sparse matrix built once from the reachable
states (TransferChain) and re-weighted for every weight function. Brute
force enumeration of label sequences is kept alongside as the oracle.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from sources.action import ActionFunctional, ActionKind, step_action, trajectory_action
from sources.errors import (PathCapExceeded, StateBudgetExceeded, ZeroField,
                            NonFiniteAmplitude, SlitBlocked, LinearityViolated)
from sources.logger import Logger
from sources.simworld import Trajectory
from sources.transitions import TransitionSystem, lattice_system, slit_walls

logger = Logger("propagator.log")

DEFAULT_PATH_CAP = 100_000
DEFAULT_STATE_BUDGET = 200_000
LINEARITY_TOLERANCE = 1e-9

class WeightFunction:
    """
    f(S): feynman exp(iS/hbar), boltzmann exp(-S/hbar), or custom, a table of
    (action, complex value) points interpolated linearly.
    """
    kinds = ("feynman", "boltzmann", "custom")

    def __init__(self, kind: str = "feynman", hbar: float = 1.0, table=None):
        if kind not in self.kinds:
            raise ValueError(f"Unknown weight kind: {kind}")
        if not hbar > 0:
            raise ValueError(f"hbar must be > 0, got {hbar}")
        self.kind = kind
        self.hbar = float(hbar)
        self.table = None
        if kind == "custom":
            if table is None:
                raise ValueError("custom weight needs a table of (action, value) points")
            points = sorted(table, key=lambda p: p[0])
            self.table = (np.array([p[0] for p in points], dtype=float),
                          np.array([complex(p[1]) for p in points], dtype=complex))

    def with_hbar(self, hbar: float) -> "WeightFunction":
        clone = WeightFunction.__new__(WeightFunction)
        clone.__dict__.update(self.__dict__)
        if not hbar > 0:
            raise ValueError(f"hbar must be > 0, got {hbar}")
        clone.hbar = float(hbar)
        return clone

    def __call__(self, actions) -> np.ndarray:
        s = np.asarray(actions, dtype=float)
        with np.errstate(over='ignore'):
            if self.kind == "feynman":
                return np.exp(1j * s / self.hbar)
            if self.kind == "boltzmann":
                return np.exp(-s / self.hbar).astype(complex)
        xs, values = self.table
        return np.interp(s, xs, values.real) + 1j * np.interp(s, xs, values.imag)

    def scalar(self, action: float) -> complex:
        return complex(self(np.array([action]))[0])

    def __repr__(self) -> str:
        return f"WeightFunction({self.kind}, hbar={self.hbar})"

@dataclass
class AmplitudeField:
    frame: int
    entries: dict = field(default_factory=dict)
    states: dict = field(default_factory=dict)

    def total_weight(self) -> float:
        return float(sum(abs(k) ** 2 for k in self.entries.values()))

def born_distribution(amplitudes: AmplitudeField) -> dict:
    """
    Born rule: P(s) = |K(s)|^2 / sum |K|^2.
    Raises ZeroField when every amplitude is exactly zero.
    """
    ids = sorted(amplitudes.entries)
    weights = np.array([abs(amplitudes.entries[sid]) ** 2 for sid in ids], dtype=float)
    total = weights.sum()
    if not total > 0:
        raise ZeroField(amplitudes.frame)
    return {sid: float(p) for sid, p in zip(ids, weights / total)}

def _penalty_factor(ts: TransitionSystem, f: ActionFunctional, w: WeightFunction, state) -> complex:
    """Weight of the composite penalty for a path ending in state (1 when none applies)."""
    if f.kind is not ActionKind.COMPOSITE or f.penalty_weight == 0 or ts.is_goal(state):
        return 1.0
    return w.scalar(f.penalty_weight)

class TransferChain:
    """
    Reachable states per frame and the labelled edges between consecutive
    frames, with the step action of every edge. Built once; weights are
    applied later so one chain serves a whole hbar sweep.
    """
    def __init__(self, ts: TransitionSystem, f: ActionFunctional, frames: int,
                 start=None, state_budget: int = DEFAULT_STATE_BUDGET):
        if frames < 0:
            raise ValueError(f"frames must be >= 0, got {frames}")
        self.ts = ts
        self.functional = f
        self.frames = frames
        start = ts.initial() if start is None else start
        self.ids = [np.array([ts.encode(start)], dtype=np.int64)]
        self.states = [[start]]
        self.steps = []
        for t in range(frames):
            self._extend(t, state_budget)
        self.goal_masks = [np.array([ts.is_goal(s) for s in layer], dtype=bool) for layer in self.states]
        logger.info(f"Transfer chain over {frames} frames, "
                    f"{sum(len(layer) for layer in self.states)} states, "
                    f"{sum(len(a) for _, _, a in self.steps)} edges")

    def _extend(self, t: int, state_budget: int) -> None:
        ts, f = self.ts, self.functional
        src_pos, dst_ids, actions = [], [], []
        reached = {}
        for i, state in enumerate(self.states[t]):
            for _, succ in ts.transitions(state):
                sid = ts.encode(succ)
                if sid not in reached:
                    reached[sid] = succ
                src_pos.append(i)
                dst_ids.append(sid)
                actions.append(step_action(state, succ, f))
        if len(reached) > state_budget:
            logger.error(f"State budget exceeded at frame {t + 1}: {len(reached)} states")
            raise StateBudgetExceeded(t + 1, len(reached))
        ids = sorted(reached)
        index = {sid: k for k, sid in enumerate(ids)}
        self.ids.append(np.array(ids, dtype=np.int64))
        self.states.append([reached[sid] for sid in ids])
        self.steps.append((np.array(src_pos, dtype=np.int64),
                           np.array([index[sid] for sid in dst_ids], dtype=np.int64),
                           np.array(actions, dtype=float)))

    def matrix(self, t: int, w: WeightFunction) -> sparse.csr_matrix:
        """Transfer matrix from frame t to t+1; parallel edges are summed."""
        src, dst, actions = self.steps[t]
        shape = (len(self.ids[t + 1]), len(self.ids[t]))
        matrix = sparse.csr_matrix((w(actions), (dst, src)), shape=shape, dtype=complex)
        matrix.sort_indices()
        return matrix

    def vectors(self, w: WeightFunction) -> list:
        """Amplitude vector of every frame, aligned with self.ids."""
        amplitude = np.ones(1, dtype=complex)
        vectors = [amplitude]
        for t in range(self.frames):
            amplitude = self.matrix(t, w) @ amplitude
            if not np.all(np.isfinite(amplitude)):
                raise NonFiniteAmplitude(t + 1)
            vectors.append(amplitude)
        return vectors

    def field(self, t: int, vector: np.ndarray, w: WeightFunction) -> AmplitudeField:
        entries, states = {}, {}
        for sid, state, k in zip(self.ids[t].tolist(), self.states[t], vector.tolist()):
            entries[sid] = complex(k) * _penalty_factor(self.ts, self.functional, w, state)
            states[sid] = state
        return AmplitudeField(frame=t, entries=entries, states=states)

    def fields(self, w: WeightFunction) -> list:
        return [self.field(t, v, w) for t, v in enumerate(self.vectors(w))]

    def final_field(self, w: WeightFunction) -> AmplitudeField:
        return self.field(self.frames, self.vectors(w)[-1], w)

    def completion(self, w: WeightFunction) -> dict:
        """Amplitude absorbed by goal states at each frame 1..frames."""
        absorbed = {}
        for t, vector in enumerate(self.vectors(w)):
            if t == 0:
                continue
            absorbed[t] = complex(vector[self.goal_masks[t]].sum())
        return absorbed

def propagate(ts: TransitionSystem, w: WeightFunction, f: ActionFunctional, frames: int,
              start=None, state_budget: int = DEFAULT_STATE_BUDGET) -> list:
    """
    Propagate the unit amplitude at the initial state over frames steps.
    Returns:
        list[AmplitudeField]: one field per frame 0..frames.
    """
    return TransferChain(ts, f, frames, start=start, state_budget=state_budget).fields(w)

def completion_amplitude(ts: TransitionSystem, w: WeightFunction, f: ActionFunctional,
                         frame_cap: int, state_budget: int = DEFAULT_STATE_BUDGET) -> dict:
    """
    Amplitude of first arrival at a goal, per frame 1..frame_cap. Goal states
    are absorbing so every completed run is counted once, at its completion frame.
    """
    if frame_cap < 1:
        raise ValueError(f"frame_cap must be >= 1, got {frame_cap}")
    return TransferChain(ts, f, frame_cap, state_budget=state_budget).completion(w)

def completion_distribution(absorbed: dict) -> dict:
    """Born-normalised completion-time distribution from completion_amplitude output."""
    frames = sorted(absorbed)
    weights = np.array([abs(absorbed[t]) ** 2 for t in frames], dtype=float)
    total = weights.sum()
    if not total > 0:
        raise ZeroField(frames[-1] if frames else 0)
    return {t: float(p) for t, p in zip(frames, weights / total)}

# brute force

def _walk(ts: TransitionSystem, start, depth: int, absorbed: bool = False):
    """
    Depth-first walk over label sequences in transition order. Yields
    (labels, states) for every path of exactly depth steps and, with
    absorbed=True, for shorter paths that end in an absorbing state.
    """
    stack = [(start, (), (start,))]
    while stack:
        state, labels, states = stack.pop()
        if len(labels) == depth:
            yield labels, states
            continue
        moves = ts.transitions(state)
        if not moves:
            if absorbed and ts.is_absorbing(state):
                yield labels, states
            continue
        for label, succ in reversed(moves):
            stack.append((succ, labels + (label,), states + (succ,)))

def _trajectory(ts: TransitionSystem, labels: tuple, states: tuple) -> Trajectory:
    completed = ts.is_goal(states[-1])
    return Trajectory(inputs=labels, states=states, completed=completed,
                      completion_frame=states[-1].frame if completed else None)

def enumerate_paths(ts: TransitionSystem, t_f: int, final_predicate=None,
                    cap: int = DEFAULT_PATH_CAP, start=None) -> list:
    """
    All label sequences of exactly t_f steps whose endpoint satisfies
    final_predicate, in depth-first transition order.
    Raises PathCapExceeded when there are more than cap of them.
    """
    if t_f < 0:
        raise ValueError(f"t_f must be >= 0, got {t_f}")
    start = ts.initial() if start is None else start
    paths = []
    for labels, states in _walk(ts, start, t_f):
        if final_predicate is not None and not final_predicate(states[-1]):
            continue
        if len(paths) == cap:
            raise PathCapExceeded(cap)
        paths.append(labels)
    return paths

def amplitude_bruteforce(ts: TransitionSystem, x_i, x_f, t_f: int, w: WeightFunction,
                         f: ActionFunctional, cap: int = DEFAULT_PATH_CAP) -> complex:
    """
    K(x_f, t_f; x_i, 0) as the sum of w(S) over every path between them,
    accumulated in enumeration order.
    """
    target = ts.encode(x_f)
    total = 0j
    count = 0
    for labels, states in _walk(ts, x_i, t_f):
        end = states[-1]
        if ts.encode(end) != target or end.frame != x_f.frame:
            continue
        count += 1
        if count > cap:
            raise PathCapExceeded(cap)
        total += w.scalar(trajectory_action(_trajectory(ts, labels, states), f))
    return total

def endpoint_amplitudes_bruteforce(ts: TransitionSystem, t_f: int, w: WeightFunction,
                                   f: ActionFunctional, cap: int = DEFAULT_PATH_CAP,
                                   start=None) -> dict:
    """amplitude_bruteforce for every endpoint at once, from a single enumeration."""
    start = ts.initial() if start is None else start
    totals = {}
    count = 0
    for labels, states in _walk(ts, start, t_f):
        count += 1
        if count > cap:
            raise PathCapExceeded(cap)
        sid = ts.encode(states[-1])
        totals[sid] = totals.get(sid, 0j) + w.scalar(trajectory_action(_trajectory(ts, labels, states), f))
    return totals

def first_arrival_bruteforce(ts: TransitionSystem, w: WeightFunction, f: ActionFunctional,
                             frame_cap: int, cap: int = DEFAULT_PATH_CAP) -> dict:
    """Oracle for completion_amplitude: enumerate every path reaching a goal within frame_cap."""
    totals = {t: 0j for t in range(1, frame_cap + 1)}
    count = 0
    for labels, states in _walk(ts, ts.initial(), frame_cap, absorbed=True):
        if not labels or not ts.is_goal(states[-1]):
            continue
        count += 1
        if count > cap:
            raise PathCapExceeded(cap)
        totals[len(labels)] += w.scalar(trajectory_action(_trajectory(ts, labels, states), f))
    return totals

# experiments

@dataclass
class SweepRow:
    hbar: float
    in_tube: float
    path_tube: float | None = None

def _chebyshev(a: tuple, b: tuple) -> int:
    return max(abs(p - q) for p, q in zip(a, b))

def _restrict(amplitudes: AmplitudeField, predicate) -> AmplitudeField:
    keep = [sid for sid, state in amplitudes.states.items() if predicate(state)]
    return AmplitudeField(frame=amplitudes.frame,
                          entries={sid: amplitudes.entries[sid] for sid in keep},
                          states={sid: amplitudes.states[sid] for sid in keep})

def hbar_sweep(ts: TransitionSystem, f: ActionFunctional, hbars, reference: Trajectory,
               radius: int, kind: str = "feynman", path_cap: int = DEFAULT_PATH_CAP,
               state_budget: int = DEFAULT_STATE_BUDGET, endpoint=None) -> list:
    """
    Born mass near the reference path for each hbar, in input order.

    endpoint, a predicate on final states, fixes the admissible endpoints:
    the final field is restricted to them before normalisation and only
    paths ending in them are counted. None leaves the endpoint free.

    in_tube is the probability of ending within Chebyshev radius of the
    reference endpoint. path_tube, filled when the instance is small enough
    to enumerate, is the share of squared amplitude carried by paths that
    stay within radius of the reference at every frame.
    """
    hbars = [float(h) for h in hbars]
    if not hbars:
        raise ValueError("hbar list is empty")
    if any(a <= b for a, b in zip(hbars, hbars[1:])):
        raise ValueError("hbar list must be strictly decreasing")
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    frames = reference.frames
    chain = TransferChain(ts, f, frames, state_budget=state_budget)
    ref_end = ts.position(reference.final)
    if endpoint is not None and not endpoint(reference.final):
        raise ValueError("reference path does not end in an admissible endpoint")

    tube_paths = None
    try:
        tube_paths = []
        for count, (labels, states) in enumerate(_walk(ts, ts.initial(), frames)):
            if count == path_cap:
                raise PathCapExceeded(path_cap)
            if endpoint is not None and not endpoint(states[-1]):
                continue
            inside = all(_chebyshev(ts.position(s), ts.position(r)) <= radius
                         for s, r in zip(states, reference.states))
            if inside:
                action = trajectory_action(_trajectory(ts, labels, states), f)
                tube_paths.append((ts.encode(states[-1]), action))
    except PathCapExceeded:
        logger.warning(f"Path tube skipped: more than {path_cap} paths")
        tube_paths = None

    rows = []
    base = WeightFunction(kind, hbars[0])
    for hbar in hbars:
        w = base.with_hbar(hbar)
        final = chain.final_field(w)
        if endpoint is not None:
            final = _restrict(final, endpoint)
        probabilities = born_distribution(final)
        in_tube = sum(p for sid, p in probabilities.items()
                      if _chebyshev(ts.position(final.states[sid]), ref_end) <= radius)
        path_tube = None
        if tube_paths is not None:
            restricted = {}
            for sid, action in tube_paths:
                restricted[sid] = restricted.get(sid, 0j) + w.scalar(action)
            path_tube = sum(abs(k) ** 2 for k in restricted.values()) / final.total_weight()
        logger.info(f"hbar={hbar}: in_tube={in_tube:.6f} path_tube={path_tube}")
        rows.append(SweepRow(hbar=hbar, in_tube=float(in_tube), path_tube=path_tube))
    return rows

@dataclass
class DoubleSlitResult:
    cells: list
    both: np.ndarray
    left: np.ndarray
    right: np.ndarray
    p_both: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    p_classical: np.ndarray
    linearity_max_err: float

    @property
    def interference_max(self) -> float:
        return float(np.max(np.abs(self.p_both - self.p_classical)))

def _screen(width: int, final: AmplitudeField) -> np.ndarray:
    screen = np.zeros(width, dtype=complex)
    for sid, k in final.entries.items():
        screen[final.states[sid].x] += k
    return screen

def _normalised(weights: np.ndarray) -> np.ndarray:
    total = weights.sum()
    if not total > 0:
        raise ZeroField(-1)
    return weights / total

def double_slit(width: int, frames: int, slit_frame: int, slits, w: WeightFunction,
                f: ActionFunctional, start: int | None = None, walls=(),
                tolerance: float = LINEARITY_TOLERANCE) -> DoubleSlitResult:
    """
    Screen amplitudes at the last frame with both slits open, the left one
    only and the right one only. Paths through the wall row partition by
    slit, so K_both equals K_left + K_right up to rounding; a larger
    difference raises LinearityViolated.
    """
    left, right = sorted(int(s) for s in slits)
    extra = {(int(t), int(x)) for t, x in walls}
    if left == right:
        raise SlitBlocked((left, right), "slits must be distinct")
    if not (0 <= left < width and 0 <= right < width):
        raise SlitBlocked((left, right), f"slits must lie within 0..{width - 1}")
    if (slit_frame, left) in extra or (slit_frame, right) in extra:
        raise SlitBlocked((left, right), "a slit cell is also a wall cell")
    if not 0 < slit_frame < frames:
        raise ValueError(f"slit_frame must be in (0, {frames}), got {slit_frame}")

    screens = {}
    for name, open_cells in (("both", (left, right)), ("left", (left,)), ("right", (right,))):
        system = lattice_system(width, frames, walls=slit_walls(width, slit_frame, open_cells) | extra,
                                start=start)
        screens[name] = _screen(width, TransferChain(system, f, frames).final_field(w))

    err = float(np.max(np.abs(screens["both"] - (screens["left"] + screens["right"]))))
    if err > tolerance:
        logger.error(f"Slit linearity error {err} above tolerance {tolerance}")
        raise LinearityViolated(err, tolerance)
    p_left = np.abs(screens["left"]) ** 2
    p_right = np.abs(screens["right"]) ** 2
    result = DoubleSlitResult(
        cells=list(range(width)),
        both=screens["both"], left=screens["left"], right=screens["right"],
        p_both=_normalised(np.abs(screens["both"]) ** 2),
        p_left=_normalised(p_left), p_right=_normalised(p_right),
        p_classical=_normalised(p_left + p_right),
        linearity_max_err=err,
    )
    logger.info(f"Double slit {width}x{frames} slits=({left},{right}) at frame {slit_frame}: "
                f"linearity_max_err={err:.3e} interference={result.interference_max:.4f}")
    return result
