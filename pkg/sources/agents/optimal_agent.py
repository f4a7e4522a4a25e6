from sources.agents.agent import Agent
from sources.simworld import InputSymbol, SimState, NEUTRAL, DEFAULT_PHYSICS

class OptimalAgent(Agent):
    def __init__(self, name, level, witness: tuple, physics=DEFAULT_PHYSICS, seed=0):
        """
        The optimal agent replays the inputs of a min-time witness, then stands still.
        """
        super().__init__(name, level, physics, seed)
        self.witness = tuple(witness)
        self.type = "optimal_agent"

    def planned(self, frame: int) -> InputSymbol:
        return self.witness[frame] if frame < len(self.witness) else NEUTRAL

    def act(self, state: SimState) -> InputSymbol:
        return self.planned(state.frame)
