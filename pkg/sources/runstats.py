"""
Statistics over run logs.

Frequencies are kept as exact fractions: counts are integers and the single
division per bin happens at the end, so every histogram sums to exactly 1.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import entropy

from sources.action import ActionFunctional, CategoryConstraint
from sources.config import PhysicsConfig, StatsConfig
from sources.errors import EmptyInput, NoCompletedRuns
from sources.logger import Logger
from sources.propagator import TransferChain, WeightFunction, DEFAULT_STATE_BUDGET
from sources.schemas import RunRecord, HbarFit
from sources.simworld import Level, Trajectory, DEFAULT_PHYSICS, decode_inputs, run
from sources.transitions import TransitionSystem, PlatformerSystem

logger = Logger("runstats.log")

DNF = "DNF"

def _require_runs(runs: list) -> None:
    if not runs:
        raise EmptyInput("runs")

def completion_histogram(runs: list) -> dict:
    """
    Relative frequency of each completion frame; incomplete runs go under "DNF".
    Returns:
        dict: frame (or "DNF") -> Fraction, keys sorted with DNF last.
    """
    _require_runs(runs)
    counts = Counter(r.frames if r.completed else DNF for r in runs)
    total = len(runs)
    frames = sorted(k for k in counts if k != DNF)
    histogram = {k: Fraction(counts[k], total) for k in frames}
    if DNF in counts:
        histogram[DNF] = Fraction(counts[DNF], total)
    return histogram

def trajectory_frequencies(runs: list) -> dict:
    """Relative frequency of each distinct input string, most frequent first."""
    _require_runs(runs)
    counts = Counter(r.inputs for r in runs)
    total = len(runs)
    return {inputs: Fraction(c, total) for inputs, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))}

@dataclass(frozen=True)
class TubeSpec:
    reference: Trajectory
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"Tube radius must be >= 0, got {self.radius}")
        if not self.reference.states:
            raise ValueError("Tube reference trajectory is empty")

    def contains(self, traj: Trajectory) -> bool:
        """
        Completed, and within Chebyshev radius of the reference at every frame
        up to completion. Frames past the reference's last state are outside.
        """
        if not traj.completed or len(traj.states) > len(self.reference.states):
            return False
        for s, r in zip(traj.states, self.reference.states):
            if max(abs(s.x - r.x), abs(s.y - r.y)) > self.radius:
                return False
        return True

def _replay(record: RunRecord, level: Level, physics: PhysicsConfig) -> Trajectory:
    return run(level, decode_inputs(record.inputs), physics)

def mark_tube(runs: list, tube: TubeSpec, level: Level,
              physics: PhysicsConfig = DEFAULT_PHYSICS) -> list:
    """Copies of the records with in_tube filled."""
    _require_runs(runs)
    return [r.model_copy(update={"in_tube": tube.contains(_replay(r, level, physics))}) for r in runs]

def tube_fraction(runs: list, tube: TubeSpec, level: Level,
                  physics: PhysicsConfig = DEFAULT_PHYSICS) -> float:
    """
    Share of runs inside the tube. Back-fills in_tube on the given records.
    """
    _require_runs(runs)
    inside = 0
    for record in runs:
        record.in_tube = tube.contains(_replay(record, level, physics))
        inside += record.in_tube
    return float(Fraction(inside, len(runs)))

@dataclass(frozen=True)
class CompletionStats:
    runs: int
    completed: int
    dnf_fraction: float
    mean: float | None
    variance: float | None

def completion_stats(runs: list) -> CompletionStats:
    """Mean and population variance of completion frames over completed runs."""
    _require_runs(runs)
    frames = np.array([r.frames for r in runs if r.completed], dtype=float)
    mean = float(frames.mean()) if frames.size else None
    variance = float(frames.var()) if frames.size else None
    return CompletionStats(runs=len(runs), completed=int(frames.size),
                           dnf_fraction=1.0 - frames.size / len(runs),
                           mean=mean, variance=variance)

def default_grid(stats: StatsConfig = StatsConfig()) -> list:
    """Log-spaced hbar grid, 41 points over [1e-2, 1e2] by default."""
    return [float(h) for h in np.logspace(np.log10(stats.grid_min), np.log10(stats.grid_max), stats.grid_points)]

def model_completion(chain: TransferChain, w: WeightFunction, epsilon: float) -> np.ndarray:
    """
    Born-normalised completion-time distribution over frames 1..chain.frames,
    floored at epsilon per bin and renormalised.
    """
    absorbed = chain.completion(w)
    weights = np.array([abs(absorbed[t]) ** 2 for t in range(1, chain.frames + 1)], dtype=float)
    total = weights.sum()
    model = weights / total if total > 0 else weights
    model = model + epsilon
    return model / model.sum()

def fit_completion_hbar(ts: TransitionSystem, runs: list, f: ActionFunctional, grid,
                        frame_cap: int | None = None, kind: str = "feynman",
                        epsilon: float = 1e-9,
                        state_budget: int = DEFAULT_STATE_BUDGET) -> HbarFit:
    """
    Grid search for the hbar whose completion-time model is closest to the runs.

    KL(empirical || model) is computed over completion frames; DNF runs are
    excluded and their share reported. Ties go to the smallest hbar.
    """
    _require_runs(runs)
    grid = [float(h) for h in grid]
    if not grid:
        raise ValueError("hbar grid is empty")
    if any(not h > 0 for h in grid):
        raise ValueError("hbar grid values must be > 0")
    frames = [r.frames for r in runs if r.completed]
    if not frames:
        raise NoCompletedRuns(len(runs))
    frame_cap = max(frames) if frame_cap is None else frame_cap
    if max(frames) > frame_cap or min(frames) < 1:
        raise ValueError(f"completion frames must lie in 1..{frame_cap}")

    counts = np.bincount(np.array(frames) - 1, minlength=frame_cap).astype(float)
    empirical = counts / counts.sum()
    chain = TransferChain(ts, f, frame_cap, state_budget=state_budget)
    base = WeightFunction(kind, grid[0])
    divergence = [float(entropy(empirical, model_completion(chain, base.with_hbar(h), epsilon)))
                  for h in grid]

    best = min(range(len(grid)), key=lambda k: (divergence[k], grid[k]))
    fit = HbarFit(grid=grid, divergence=divergence, hbar_eff=grid[best],
                  dnf_fraction=1.0 - len(frames) / len(runs))
    logger.info(f"Fitted {fit}")
    return fit

def fit_hbar(runs: list, level: Level, f: ActionFunctional, grid=None,
             frame_cap: int | None = None, category: CategoryConstraint | None = None,
             physics: PhysicsConfig = DEFAULT_PHYSICS, kind: str = "feynman",
             epsilon: float = 1e-9, state_budget: int = DEFAULT_STATE_BUDGET) -> HbarFit:
    """
    Effective hbar of a run log on a level.
    Args:
        runs (list[RunRecord]): the log, at least one completed run.
        level (Level): the level played.
        f (ActionFunctional): functional of the completion model.
        grid (list[float]): hbar values, default_grid() when None.
        frame_cap (int): model horizon, the longest completion in the log by default.
    Returns:
        HbarFit: divergence per grid point and the argmin.
    """
    grid = default_grid() if grid is None else grid
    ts = PlatformerSystem(level, physics, category)
    return fit_completion_hbar(ts, runs, f, grid, frame_cap=frame_cap, kind=kind,
                               epsilon=epsilon, state_budget=state_budget)
