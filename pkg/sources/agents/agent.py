from abc import abstractmethod
import copy

from sources.config import PhysicsConfig
from sources.logger import Logger
from sources.simworld import (Level, SimState, InputSymbol, Trajectory, DEFAULT_PHYSICS,
                              start_state, step, touches_goal)

class Agent():
    """
    An abstract class for all agents.
    An agent is the layer between a player and the game: a policy mapping the
    current SimState to the input of the next frame.
    """
    def __init__(self, name: str,
                       level: Level,
                       physics: PhysicsConfig = DEFAULT_PHYSICS,
                       seed: int = 0) -> None:
        """
        Args:
            name (str): Name of the agent.
            level (Level): The level the agent plays.
            physics (PhysicsConfig): Physics constants and frame cap.
            seed (int): 64-bit seed of the current run.
        """
        self.agent_name = name
        self.type = None
        self.level = level
        self.physics = physics
        self.seed = seed
        self.logger = Logger("agents.log")

    @property
    def get_agent_name(self) -> str:
        return self.agent_name

    @property
    def get_agent_type(self) -> str:
        return self.type

    def with_seed(self, seed: int) -> "Agent":
        """A copy of this agent playing the run keyed by seed."""
        clone = copy.copy(self)
        clone.seed = seed
        return clone

    @abstractmethod
    def act(self, state: SimState) -> InputSymbol:
        """
        abstract method, implementation in child class.
        Input to apply at frame state.frame.
        """
        pass

    def play(self) -> Trajectory:
        """
        Play one run from the start state until goal contact or the frame cap.
        """
        state = start_state(self.level, self.physics)
        inputs, states = [], [state]
        completed = False
        while state.frame < self.physics.frame_cap:
            u = self.act(state)
            state = step(state, u, self.level, self.physics)
            inputs.append(u)
            states.append(state)
            if touches_goal(state, self.level, self.physics):
                completed = True
                break
        return Trajectory(inputs=tuple(inputs), states=tuple(states), completed=completed,
                          completion_frame=state.frame if completed else None)
