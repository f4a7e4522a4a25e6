from sources.agents.agent import Agent
from sources.rng import frame_symbol
from sources.simworld import InputSymbol, SimState, DEFAULT_PHYSICS

class RandomAgent(Agent):
    def __init__(self, name, level, physics=DEFAULT_PHYSICS, seed=0):
        """
        Uniform random inputs, one counter-based draw per frame.
        """
        super().__init__(name, level, physics, seed)
        self.type = "random_agent"

    def act(self, state: SimState) -> InputSymbol:
        return frame_symbol(self.seed, state.frame)
