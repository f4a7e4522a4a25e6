"""
Batches of runs ("sessions"): every run starts from the level's start state at
frame 0 and is keyed by its own seed derived from the session seed and the
run index.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator
from tqdm import tqdm

from sources.action import ActionFunctional, trajectory_action, parse_category
from sources.agents.agent import Agent
from sources.agents.noisy_agent import NoisyAgent
from sources.agents.optimal_agent import OptimalAgent
from sources.agents.random_agent import RandomAgent
from sources.agents.replay_agent import ReplayAgent
from sources.config import PhysicsConfig
from sources.logger import Logger
from sources.pathsearch import min_time_path
from sources.rng import run_seed
from sources.schemas import RunRecord
from sources.simworld import Level, DEFAULT_PHYSICS, decode_inputs

logger = Logger("agents.log")

class AgentSpec(BaseModel):
    kind: Literal["optimal", "noisy", "random", "replay"] = "optimal"
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    category: str = "any%"
    inputs: Optional[str] = None

    @model_validator(mode="after")
    def check_inputs(self):
        if self.kind == "replay" and self.inputs is None:
            raise ValueError("a replay agent needs recorded inputs")
        return self

def make_agent(spec: AgentSpec, level: Level, physics: PhysicsConfig = DEFAULT_PHYSICS) -> Agent:
    """
    Build the agent described by spec.
    Optimal and noisy agents follow the min-time witness for the agent's category,
    so Unreachable propagates from the search.
    """
    if spec.kind == "random":
        return RandomAgent("random", level, physics, spec.seed)
    if spec.kind == "replay":
        return ReplayAgent("replay", level, decode_inputs(spec.inputs), physics, spec.seed)
    category = parse_category(spec.category, level)
    witness = min_time_path(level, category, physics=physics).witness.inputs
    if spec.kind == "noisy":
        return NoisyAgent(f"noisy p={spec.p}", level, witness, spec.p, physics, spec.seed)
    return OptimalAgent("optimal", level, witness, physics, spec.seed)

def play_record(agent: Agent, run_index: int, seed: int, functional: ActionFunctional) -> RunRecord:
    traj = agent.with_seed(seed).play()
    return RunRecord(run_index=run_index, seed=seed, inputs=traj.encoded_inputs(),
                     completed=traj.completed, frames=traj.frames,
                     action=trajectory_action(traj, functional))

def generate_runs(spec: AgentSpec, level: Level, n: int, base_seed: int,
                  functional: ActionFunctional | None = None,
                  physics: PhysicsConfig = DEFAULT_PHYSICS,
                  workers: int = 1, progress: bool = False) -> list:
    """
    Play n runs and record them in run-index order.
    Args:
        spec (AgentSpec): the player model.
        level (Level): the level.
        n (int): number of runs, >= 1.
        base_seed (int): session seed; run i plays with run_seed(base_seed, i).
        functional (ActionFunctional): action recorded per run, the level-bound Lagrangian by default.
        workers (int): thread count; output does not depend on it.
        progress (bool): show a tqdm progress bar.
    Returns:
        list[RunRecord]: one record per run, DNF runs recorded at the frame cap.
    """
    if n < 1:
        raise ValueError(f"Run count must be >= 1, got {n}")
    functional = functional if functional is not None else ActionFunctional().bind(level, physics)
    agent = make_agent(spec, level, physics)
    seeds = [run_seed(base_seed, i) for i in range(n)]

    def one(i: int) -> RunRecord:
        return play_record(agent, i, seeds[i], functional)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = executor.map(one, range(n))
        if progress:
            results = tqdm(results, total=n, desc=f"{agent.get_agent_name} runs")
        records = list(results)
    completed = sum(r.completed for r in records)
    logger.info(f"Generated {n} runs with {agent.get_agent_name} on {level.name}: {completed} completed")
    return records

def replay_runs(records: list, level: Level, functional: ActionFunctional | None = None,
                physics: PhysicsConfig = DEFAULT_PHYSICS) -> list:
    """Reproduce logged runs by replaying their inputs; seeds and indices are carried over."""
    functional = functional if functional is not None else ActionFunctional().bind(level, physics)
    replayed = []
    for record in records:
        agent = ReplayAgent("replay", level, decode_inputs(record.inputs), physics, record.seed)
        replayed.append(play_record(agent, record.run_index, record.seed, functional))
    return replayed
