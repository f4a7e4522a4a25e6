"""
Counter-based randomness.

Each frame's draws come from a Philox block keyed by the run seed with the
frame as counter, so any frame of any run can be regenerated on its own and
parallel generation agrees with serial generation.
"""

import numpy as np

from sources.simworld import ALPHABET, InputSymbol

SEED_MASK = 2 ** 64 - 1

def run_seed(base_seed: int, run_index: int) -> int:
    """64-bit seed of run run_index, derived from base_seed with a SeedSequence spawn key."""
    if base_seed < 0 or run_index < 0:
        raise ValueError("base_seed and run_index must be >= 0")
    sequence = np.random.SeedSequence(base_seed, spawn_key=(run_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])

def frame_draws(seed: int, frame: int) -> tuple:
    """
    Draws for one frame of one run.
    Returns:
        tuple: (u, index), u uniform in [0, 1) and index uniform in 0..len(ALPHABET)-1.
    """
    bitgen = np.random.Philox(key=seed & SEED_MASK, counter=[frame, 0, 0, 0])
    raw = bitgen.random_raw(2)
    u = int(raw[0] >> np.uint64(11)) * 2.0 ** -53
    return u, int(raw[1] % np.uint64(len(ALPHABET)))

def frame_symbol(seed: int, frame: int) -> InputSymbol:
    return ALPHABET[frame_draws(seed, frame)[1]]
