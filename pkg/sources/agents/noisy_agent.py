from sources.agents.optimal_agent import OptimalAgent
from sources.rng import frame_draws
from sources.simworld import ALPHABET, InputSymbol, SimState, DEFAULT_PHYSICS

class NoisyAgent(OptimalAgent):
    def __init__(self, name, level, witness: tuple, p: float, physics=DEFAULT_PHYSICS, seed=0):
        """
        The noisy agent follows the optimal plan but, with probability p on
        each frame, presses a uniformly drawn symbol instead.
        """
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Error probability must be in [0, 1], got {p}")
        super().__init__(name, level, witness, physics, seed)
        self.p = p
        self.type = "noisy_agent"

    def act(self, state: SimState) -> InputSymbol:
        u, index = frame_draws(self.seed, state.frame)
        if u < self.p:
            return ALPHABET[index]
        return self.planned(state.frame)
