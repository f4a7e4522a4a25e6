"""
Minimum-time and least-action searches over the time-layered state graph.

Every state carries its frame, so the graph is a DAG ordered by frame and a
single forward pass per frame settles the best action of each state, even
with negative step costs. A second pass counts the optimal paths.
"""

from dataclasses import dataclass, field

from sources.action import (ActionFunctional, ActionKind, CategoryConstraint,
                            step_action, trajectory_action)
from sources.config import PhysicsConfig
from sources.errors import Unreachable, StateBudgetExceeded
from sources.logger import Logger
from sources.schemas import RunRecord
from sources.simworld import Level, Trajectory, InputSymbol, DEFAULT_PHYSICS
from sources.transitions import TransitionSystem, PlatformerSystem
from sources.propagator import DEFAULT_STATE_BUDGET

logger = Logger("pathsearch.log")

TOLERANCE = 1e-9
COUNT_CAP = 2 ** 64 - 1

@dataclass
class SearchResult:
    optimal_value: float
    witness: Trajectory
    optimal_count: int = 1
    co_optimal: list = field(default_factory=list)

    def to_record(self, f: ActionFunctional | None = None) -> list:
        """Witness first, then the co-optimal paths, as run records."""
        paths = [self.witness] + [t for t in self.co_optimal if t.inputs != self.witness.inputs]
        records = []
        for index, traj in enumerate(paths):
            action = self.optimal_value if f is None else trajectory_action(traj, f)
            records.append(RunRecord(run_index=index, seed=0, inputs=_encode_labels(traj.inputs),
                                     completed=traj.completed, frames=traj.frames, action=action))
        return records

def _encode_labels(labels) -> str:
    return " ".join(u.code if isinstance(u, InputSymbol) else f"{u:+d}" for u in labels)

class LayeredSearch:
    """
    Forward dynamic program over frames 0..frames.

    Every layer keeps, per state id, the state, its best accumulated action
    and the incoming edges as (label rank, label, source id, cost).
    Endpoints are states at the last frame plus absorbed states at earlier
    frames, filtered by the endpoint predicate.
    """
    def __init__(self, ts: TransitionSystem, f: ActionFunctional, frames: int,
                 endpoint=None, first_hit: bool = False,
                 state_budget: int = DEFAULT_STATE_BUDGET):
        self.ts = ts
        self.functional = f
        self.frames = frames
        self.endpoint = endpoint if endpoint is not None else (lambda s: True)
        start = ts.initial()
        self.states = [{ts.encode(start): start}]
        self.best = [{ts.encode(start): 0.0}]
        self.incoming = [{}]
        self.endpoints = []
        if frames == 0 and self.endpoint(start):
            self.endpoints.append((self._end_cost(start, 0.0), 0, ts.encode(start)))
        for t in range(frames):
            if not self.states[t]:
                break
            self._relax(t, state_budget)
            if first_hit and self.endpoints:
                break

    def _end_cost(self, state, cost: float) -> float:
        f = self.functional
        if f.kind is ActionKind.COMPOSITE and not self.ts.is_goal(state):
            return cost + f.penalty_weight
        return cost

    def _relax(self, t: int, state_budget: int) -> None:
        ts, f = self.ts, self.functional
        states, best, incoming = {}, {}, {}
        for sid in sorted(self.states[t]):
            s = self.states[t][sid]
            base = self.best[t][sid]
            for rank, (label, succ) in enumerate(ts.transitions(s)):
                dst = ts.encode(succ)
                cost = base + step_action(s, succ, f)
                incoming.setdefault(dst, []).append((rank, label, sid, cost))
                if dst not in best or cost < best[dst]:
                    best[dst] = cost
                    states[dst] = succ
        if len(states) > state_budget:
            raise StateBudgetExceeded(t + 1, len(states))
        self.states.append(states)
        self.best.append(best)
        self.incoming.append(incoming)
        last = t + 1 == self.frames
        for sid in sorted(states):
            s = states[sid]
            if (last or ts.is_absorbing(s)) and self.endpoint(s):
                self.endpoints.append((self._end_cost(s, best[sid]), t + 1, sid))

    def optimal_endpoints(self) -> list:
        """(cost, frame, id) of every endpoint within tolerance of the optimum, best first."""
        if not self.endpoints:
            return []
        value = min(cost for cost, _, _ in self.endpoints)
        tied = [e for e in self.endpoints if e[0] <= value + TOLERANCE]
        return sorted(tied, key=lambda e: (e[1], e[2]))

    def optimal_edges(self, frame: int, sid: int) -> list:
        """Incoming edges of (frame, sid) that lie on an optimal path to it."""
        target = self.best[frame][sid]
        return [e for e in self.incoming[frame].get(sid, []) if e[3] <= target + TOLERANCE]

    def optimal_subgraph(self) -> dict:
        """
        Outgoing edges on optimal paths to an optimal endpoint, keyed by
        (frame, id) and sorted by label rank, then successor id.
        """
        marked = {(frame, sid) for _, frame, sid in self.optimal_endpoints()}
        stack = list(marked)
        outgoing = {}
        while stack:
            t, sid = stack.pop()
            if t == 0:
                continue
            for rank, label, src, _ in self.optimal_edges(t, sid):
                outgoing.setdefault((t - 1, src), []).append((rank, label, sid))
                if (t - 1, src) not in marked:
                    marked.add((t - 1, src))
                    stack.append((t - 1, src))
        for edges in outgoing.values():
            edges.sort(key=lambda e: (e[0], e[2]))
        return outgoing

    def optimal_labels(self, cap: int) -> list:
        """Up to cap optimal label sequences in lexicographic label order."""
        outgoing = self.optimal_subgraph()
        start = (0, next(iter(self.states[0])))
        found = []
        stack = [(start, ())]
        while stack and len(found) < cap:
            (t, sid), labels = stack.pop()
            edges = outgoing.get((t, sid))
            if not edges:
                found.append(labels)
                continue
            for _, label, dst in reversed(edges):
                stack.append(((t + 1, dst), labels + (label,)))
        return found

    def count(self) -> int:
        """Number of optimal paths, saturating at 2**64 - 1."""
        counts = [{sid: 1 for sid in self.states[0]}]
        last = max(frame for _, frame, _ in self.optimal_endpoints())
        for t in range(1, last + 1):
            layer = {}
            for sid in self.states[t]:
                total = 0
                for _, _, src, _ in self.optimal_edges(t, sid):
                    total = min(COUNT_CAP, total + counts[t - 1].get(src, 0))
                layer[sid] = total
            counts.append(layer)
        total = 0
        for _, frame, sid in self.optimal_endpoints():
            total = min(COUNT_CAP, total + counts[frame][sid])
        return total

def _result(search: LayeredSearch, cap: int | None) -> SearchResult:
    ends = search.optimal_endpoints()
    if not ends:
        raise Unreachable(search.frames)
    labels = search.optimal_labels(cap if cap is not None else 1)
    co_optimal = [search.ts.replay(path) for path in labels] if cap is not None else []
    return SearchResult(optimal_value=ends[0][0], witness=search.ts.replay(labels[0]),
                        optimal_count=search.count(), co_optimal=co_optimal)

def min_time_path(level: Level, category: CategoryConstraint | None = None,
                  frame_cap: int | None = None, physics: PhysicsConfig = DEFAULT_PHYSICS,
                  cap: int | None = None) -> SearchResult:
    """
    Earliest frame at which the category is satisfied.
    Args:
        level (Level): the level to search.
        category (CategoryConstraint): any% by default.
        frame_cap (int): search horizon, the physics frame cap by default.
        cap (int): also materialize up to cap co-optimal runs.
    Returns:
        SearchResult: optimal_value is the frame count.
    """
    frame_cap = physics.frame_cap if frame_cap is None else frame_cap
    if frame_cap < 1:
        raise ValueError(f"frame_cap must be >= 1, got {frame_cap}")
    ts = PlatformerSystem(level, physics, category)
    search = LayeredSearch(ts, ActionFunctional.completion_time(), frame_cap,
                           endpoint=ts.is_goal, first_hit=True)
    try:
        result = _result(search, cap)
    except Unreachable:
        logger.warning(f"Level {level.name} unreachable within {frame_cap} frames ({ts.category})")
        raise Unreachable(frame_cap)
    result.optimal_value = int(round(result.optimal_value))
    logger.info(f"Level {level.name} {ts.category}: {result.optimal_value} frames, "
                f"{result.optimal_count} optimal runs")
    return result

def least_action_path(ts: TransitionSystem, f: ActionFunctional, frames: int,
                      endpoint=None) -> SearchResult:
    """
    Path of least accumulated step action over frames 0..frames.
    Ties go to the label sequence that is lowest in transition order.
    """
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    result = _result(LayeredSearch(ts, f, frames, endpoint=endpoint), None)
    logger.info(f"Least action {result.optimal_value:g} over {result.witness.frames} frames")
    return result

def enumerate_optimal(ts: TransitionSystem, f: ActionFunctional, frames: int,
                      endpoint=None, cap: int = 100) -> SearchResult:
    """least_action_path with every optimal path counted and up to cap of them materialized."""
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    result = _result(LayeredSearch(ts, f, frames, endpoint=endpoint), cap)
    logger.info(f"{result.optimal_count} optimal paths of action {result.optimal_value:g}")
    return result
