from .agent import Agent
from .optimal_agent import OptimalAgent
from .noisy_agent import NoisyAgent
from .random_agent import RandomAgent
from .replay_agent import ReplayAgent
from .sessions import AgentSpec, make_agent, generate_runs, replay_runs

__all__ = ["Agent", "OptimalAgent", "NoisyAgent", "RandomAgent", "ReplayAgent",
           "AgentSpec", "make_agent", "generate_runs", "replay_runs"]
