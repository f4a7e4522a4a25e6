import unittest
import os
import sys
import cmath
from unittest import mock

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.action import ActionFunctional, trajectory_action
from sources.errors import (PathCapExceeded, ZeroField, SlitBlocked, NonFiniteAmplitude,
                            StateBudgetExceeded, LinearityViolated)
from sources.pathsearch import least_action_path
from sources.propagator import (WeightFunction, AmplitudeField, TransferChain, enumerate_paths,
                                amplitude_bruteforce, endpoint_amplitudes_bruteforce, propagate,
                                born_distribution, completion_amplitude, first_arrival_bruteforce,
                                hbar_sweep, double_slit)
from sources.simworld import read_level
from sources.transitions import PlatformerSystem, LatticeState, lattice_system, slit_walls

LEVELS = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'levels'))

KINETIC = ActionFunctional.kinetic()

def recursive_count(width, frames, walls, x, t=0):
    """Number of walks of frames - t more steps from cell x avoiding walls."""
    if t == frames:
        return 1
    total = 0
    for dx in (-1, 0, 1):
        y = x + dx
        if 0 <= y < width and (t + 1, y) not in walls:
            total += recursive_count(width, frames, walls, y, t + 1)
    return total

def forced_corridor():
    """Lattice with a single admissible walk 0 -> 1 -> 2."""
    return lattice_system(3, 2, walls={(1, 0), (2, 0), (2, 1)}, start=0, goals={2})

class TestWeightFunction(unittest.TestCase):
    def test_kinds(self):
        self.assertAlmostEqual(WeightFunction("feynman", 2.0).scalar(1.0), cmath.exp(0.5j))
        self.assertAlmostEqual(WeightFunction("boltzmann", 2.0).scalar(1.0), complex(np.exp(-0.5)))
        custom = WeightFunction("custom", table=[(0.0, 1.0), (2.0, 1j)])
        self.assertAlmostEqual(custom.scalar(1.0), 0.5 + 0.5j)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            WeightFunction("feynman", 0.0)
        with self.assertRaises(ValueError):
            WeightFunction("feynman", 1.0).with_hbar(-1.0)
        with self.assertRaises(ValueError):
            WeightFunction("quantum")

class TestEnumeration(unittest.TestCase):
    def test_small_counts(self):
        ts = lattice_system(3, 4)
        self.assertEqual(enumerate_paths(ts, 0), [()])
        self.assertEqual(len(enumerate_paths(ts, 1)), 3)

    def test_two_slit_count(self):
        walls = slit_walls(15, 4, (5, 9))
        ts = lattice_system(15, 8, walls=walls, start=7)
        self.assertEqual(len(enumerate_paths(ts, 8)), recursive_count(15, 8, walls, 7))

    def test_order_is_label_order(self):
        paths = enumerate_paths(lattice_system(3, 2), 2)
        self.assertEqual(paths, sorted(paths))

    def test_wall_row_blocks_every_path(self):
        ts = lattice_system(5, 4, walls={(2, x) for x in range(5)})
        self.assertEqual(enumerate_paths(ts, 4), [])
        self.assertEqual(enumerate_paths(ts, 1), [(-1,), (0,), (1,)])

    def test_cap(self):
        with self.assertRaises(PathCapExceeded):
            enumerate_paths(lattice_system(9, 6), 6, cap=100)

class TestAmplitudes(unittest.TestCase):
    def test_empty_path(self):
        ts = lattice_system(3, 2)
        w = WeightFunction("feynman", 1.0)
        self.assertEqual(amplitude_bruteforce(ts, ts.initial(), ts.initial(), 0, w, KINETIC), 1 + 0j)

    def test_single_path(self):
        ts = forced_corridor()
        w = WeightFunction("feynman", 1.0)
        k = amplitude_bruteforce(ts, ts.initial(), LatticeState(2, 2), 2, w, KINETIC)
        self.assertAlmostEqual(k, cmath.exp(1j), places=12)

    def test_unit_field(self):
        ts = lattice_system(5, 3)
        fields = propagate(ts, WeightFunction(), KINETIC, 0)
        self.assertEqual(len(fields), 1)
        self.assertEqual(fields[0].entries, {2: 1 + 0j})

    def test_free_walk_matches_enumeration(self):
        ts = lattice_system(3, 2)
        w = WeightFunction("feynman", 1.0)
        final = propagate(ts, w, KINETIC, 2)[-1]
        for x in range(3):
            with self.subTest(x=x):
                k = amplitude_bruteforce(ts, ts.initial(), LatticeState(x, 2), 2, w, KINETIC)
                self.assertLess(abs(final.entries[x] - k), 1e-12)

    def test_two_slit_matches_enumeration(self):
        ts = lattice_system(15, 8, walls=slit_walls(15, 4, (5, 9)), start=7)
        w = WeightFunction("feynman", 1.0)
        final = propagate(ts, w, KINETIC, 8)[-1]
        oracle = endpoint_amplitudes_bruteforce(ts, 8, w, KINETIC)
        self.assertEqual(set(final.entries), set(oracle))
        for sid, k in oracle.items():
            self.assertLess(abs(final.entries[sid] - k), 1e-9)

    def test_platformer_matches_enumeration(self):
        level = read_level(os.path.join(LEVELS, "short.txt"))
        ts = PlatformerSystem(level)
        f = ActionFunctional().bind(level)
        w = WeightFunction("feynman", 1.0)
        final = propagate(ts, w, f, 4)[-1]
        oracle = endpoint_amplitudes_bruteforce(ts, 4, w, f)
        self.assertEqual(set(final.entries), set(oracle))
        for sid, k in oracle.items():
            self.assertLess(abs(final.entries[sid] - k), 1e-9)

    def test_deterministic(self):
        ts = lattice_system(9, 6, walls={(3, 4)})
        w = WeightFunction("feynman", 0.7)
        self.assertEqual(propagate(ts, w, KINETIC, 6)[-1].entries, propagate(ts, w, KINETIC, 6)[-1].entries)

    def test_state_budget(self):
        with self.assertRaises(StateBudgetExceeded):
            propagate(lattice_system(15, 8), WeightFunction(), KINETIC, 8, state_budget=2)

    def test_non_finite(self):
        level = read_level(os.path.join(LEVELS, "short.txt"))
        f = ActionFunctional().bind(level)
        with self.assertRaises(NonFiniteAmplitude):
            propagate(PlatformerSystem(level), WeightFunction("boltzmann", 1e-3), f, 1)

class TestBorn(unittest.TestCase):
    def test_single_entry(self):
        self.assertEqual(born_distribution(AmplitudeField(3, {7: 0.2 - 0.1j})), {7: 1.0})

    def test_equal_magnitudes(self):
        p = born_distribution(AmplitudeField(1, {0: 1j, 1: -1.0}))
        self.assertEqual(p, {0: 0.5, 1: 0.5})

    def test_zero_field(self):
        with self.assertRaises(ZeroField):
            born_distribution(AmplitudeField(2, {0: 0j, 1: 0j}))

    def test_blocked_universe_is_zero_field(self):
        ts = lattice_system(5, 4, walls={(2, x) for x in range(5)})
        fields = propagate(ts, WeightFunction("feynman", 1.0), KINETIC, 4)
        self.assertEqual(len(fields[1].entries), 3)
        for t in (2, 3, 4):
            self.assertEqual(fields[t].entries, {})
        with self.assertRaises(ZeroField):
            born_distribution(fields[-1])

    def test_normalized(self):
        ts = lattice_system(15, 8, walls=slit_walls(15, 4, (5, 9)), start=7)
        for hbar in (10.0, 1.0, 0.1):
            with self.subTest(hbar=hbar):
                final = propagate(ts, WeightFunction("feynman", hbar), KINETIC, 8)[-1]
                self.assertLess(abs(sum(born_distribution(final).values()) - 1.0), 1e-9)

class TestCompletion(unittest.TestCase):
    def test_unreachable(self):
        level = read_level(os.path.join(LEVELS, "walled.txt"))
        absorbed = completion_amplitude(PlatformerSystem(level), WeightFunction(),
                                        ActionFunctional.completion_time(), 8)
        self.assertEqual(sorted(absorbed), list(range(1, 9)))
        self.assertTrue(all(k == 0 for k in absorbed.values()))

    def test_single_sequence(self):
        absorbed = completion_amplitude(forced_corridor(), WeightFunction(), KINETIC, 2)
        self.assertEqual(absorbed[1], 0)
        self.assertAlmostEqual(abs(absorbed[2]), 1.0)

    def test_matches_first_arrival(self):
        level = read_level(os.path.join(LEVELS, "adjacent.txt"))
        ts = PlatformerSystem(level)
        f = ActionFunctional().bind(level)
        w = WeightFunction("feynman", 1.0)
        absorbed = completion_amplitude(ts, w, f, 3)
        oracle = first_arrival_bruteforce(ts, w, f, 3)
        for t in range(1, 4):
            with self.subTest(frame=t):
                self.assertLess(abs(absorbed[t] - oracle[t]), 1e-9)
        self.assertGreater(abs(absorbed[1]), 0)

    def test_lattice_first_arrival(self):
        ts = lattice_system(7, 8, start=3, goals={0, 6})
        w = WeightFunction("feynman", 0.5)
        absorbed = completion_amplitude(ts, w, KINETIC, 8)
        oracle = first_arrival_bruteforce(ts, w, KINETIC, 8)
        for t in range(1, 9):
            self.assertLess(abs(absorbed[t] - oracle[t]), 1e-9)

    def test_short_level_weight(self):
        level = read_level(os.path.join(LEVELS, "short.txt"))
        absorbed = completion_amplitude(PlatformerSystem(level), WeightFunction(),
                                        ActionFunctional.completion_time(), 30)
        self.assertEqual(min(t for t, k in absorbed.items() if k != 0), 6)
        self.assertGreater(sum(abs(k) ** 2 for k in absorbed.values()), 0)

class TestHbarSweep(unittest.TestCase):
    def setUp(self):
        self.ts = lattice_system(17, 8, start=8)
        self.reference = least_action_path(self.ts, KINETIC, 8).witness

    def test_reference_is_straight(self):
        self.assertEqual(self.reference.inputs, (0,) * 8)

    def test_single_row(self):
        rows = hbar_sweep(self.ts, KINETIC, [1.0], self.reference, 0)
        self.assertEqual(len(rows), 1)

    def test_requires_decreasing(self):
        with self.assertRaises(ValueError):
            hbar_sweep(self.ts, KINETIC, [1.0, 10.0], self.reference, 0)

    def test_classical_concentration(self):
        rows = hbar_sweep(self.ts, KINETIC, [10.0, 1.0, 0.1, 0.01], self.reference, 0, kind="boltzmann")
        masses = [r.in_tube for r in rows]
        for a, b in zip(masses, masses[1:]):
            self.assertLessEqual(a, b + 1e-12)
        self.assertGreater(masses[-1], 0.99)

    def test_path_tube(self):
        rows = hbar_sweep(lattice_system(7, 5, start=3), KINETIC, [1.0, 0.01],
                          least_action_path(lattice_system(7, 5, start=3), KINETIC, 5).witness,
                          1, kind="boltzmann")
        for row in rows:
            self.assertIsNotNone(row.path_tube)
            self.assertLessEqual(row.path_tube, row.in_tube + 1e-12)

    def test_fixed_endpoint_concentration(self):
        same_end = lambda s: s.x == 8
        rows = hbar_sweep(self.ts, KINETIC, [10.0, 1.0, 0.1, 0.01], self.reference, 0,
                          kind="boltzmann", endpoint=same_end)
        tube = [r.path_tube for r in rows]
        for row in rows:
            self.assertAlmostEqual(row.in_tube, 1.0, places=12)
        for a, b in zip(tube, tube[1:]):
            self.assertLess(a, b)
        self.assertGreater(tube[-1], 0.99)

    def test_fixed_endpoint_normalisation(self):
        w = WeightFunction("boltzmann", 1.0)
        rows = hbar_sweep(self.ts, KINETIC, [1.0], self.reference, 0, kind="boltzmann",
                          endpoint=lambda s: s.x == 8)
        k = amplitude_bruteforce(self.ts, self.ts.initial(), LatticeState(8, 8), 8, w, KINETIC)
        self.assertAlmostEqual(rows[0].path_tube, 1.0 / abs(k) ** 2, places=12)

    def test_endpoint_must_admit_reference(self):
        with self.assertRaises(ValueError):
            hbar_sweep(self.ts, KINETIC, [1.0], self.reference, 0, endpoint=lambda s: s.x == 0)

    def test_large_hbar_counts_paths(self):
        rows = hbar_sweep(self.ts, KINETIC, [1e6], self.reference, 0)
        counts = {}
        for labels in enumerate_paths(self.ts, 8):
            end = 8 + sum(labels)
            counts[end] = counts.get(end, 0) + 1
        total = sum(c * c for c in counts.values())
        self.assertAlmostEqual(rows[0].in_tube, counts[8] ** 2 / total, places=5)

class TestDoubleSlit(unittest.TestCase):
    def setUp(self):
        self.w = WeightFunction("feynman", 1.0)

    def test_same_cell(self):
        with self.assertRaises(SlitBlocked):
            double_slit(15, 8, 4, (5, 5), self.w, KINETIC, start=7)

    def test_slit_on_wall(self):
        with self.assertRaises(SlitBlocked):
            double_slit(15, 8, 4, (5, 9), self.w, KINETIC, start=7, walls={(4, 9)})

    def test_slit_frame_bounds(self):
        with self.assertRaises(ValueError):
            double_slit(15, 8, 8, (5, 9), self.w, KINETIC, start=7)

    def test_linearity_and_interference(self):
        result = double_slit(15, 8, 4, (5, 9), self.w, KINETIC, start=7)
        self.assertLess(result.linearity_max_err, 1e-10)
        self.assertGreater(result.interference_max, 0.01)
        for p in (result.p_both, result.p_left, result.p_right, result.p_classical):
            self.assertLess(abs(p.sum() - 1.0), 1e-9)

    def test_linearity_violation_raises(self):
        screens = [np.ones(15, dtype=complex), np.zeros(15, dtype=complex), np.zeros(15, dtype=complex)]
        with mock.patch("sources.propagator._screen", side_effect=screens):
            with self.assertRaises(LinearityViolated) as caught:
                double_slit(15, 8, 4, (5, 9), self.w, KINETIC, start=7)
        self.assertEqual(caught.exception.error, 1.0)

    def test_screen_matches_enumeration(self):
        result = double_slit(15, 8, 4, (5, 9), self.w, KINETIC, start=7)
        ts = lattice_system(15, 8, walls=slit_walls(15, 4, (5, 9)), start=7)
        oracle = endpoint_amplitudes_bruteforce(ts, 8, self.w, KINETIC)
        weights = {x: abs(k) ** 2 for x, k in oracle.items()}
        total = sum(weights.values())
        for x in range(15):
            self.assertLess(abs(result.p_both[x] - weights.get(x, 0.0) / total), 1e-9)

class TestTransferChain(unittest.TestCase):
    def test_reweighting_matches_fresh_propagation(self):
        ts = lattice_system(9, 6)
        chain = TransferChain(ts, KINETIC, 6)
        for hbar in (2.0, 0.3):
            w = WeightFunction("feynman", hbar)
            self.assertEqual(chain.final_field(w).entries, propagate(ts, w, KINETIC, 6)[-1].entries)

    def test_bruteforce_action_consistency(self):
        ts = lattice_system(5, 3)
        w = WeightFunction("feynman", 1.0)
        total = 0j
        for labels in enumerate_paths(ts, 3):
            total += w.scalar(trajectory_action(ts.replay(labels), KINETIC))
        final = propagate(ts, w, KINETIC, 3)[-1]
        self.assertLess(abs(sum(final.entries.values()) - total), 1e-12)

if __name__ == "__main__":
    unittest.main()
