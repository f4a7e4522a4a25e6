from sources.agents.optimal_agent import OptimalAgent
from sources.simworld import DEFAULT_PHYSICS

class ReplayAgent(OptimalAgent):
    def __init__(self, name, level, inputs: tuple, physics=DEFAULT_PHYSICS, seed=0):
        """
        Plays pre-recorded inputs, then neutral. Used to reproduce logged attempts.
        """
        if len(inputs) > physics.frame_cap:
            raise ValueError(f"{len(inputs)} recorded inputs exceed the frame cap of {physics.frame_cap}")
        super().__init__(name, level, inputs, physics, seed)
        self.type = "replay_agent"
