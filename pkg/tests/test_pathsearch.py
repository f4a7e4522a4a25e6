import unittest
import os
import sys
import itertools

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.action import ActionFunctional, CategoryConstraint, trajectory_action
from sources.errors import Unreachable
from sources.pathsearch import min_time_path, least_action_path, enumerate_optimal
from sources.propagator import enumerate_paths
from sources.simworld import ALPHABET, InputSymbol, read_level, run, decode_inputs
from sources.transitions import PlatformerSystem, lattice_system

LEVELS = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'levels'))

KINETIC = ActionFunctional.kinetic()

def two_route_lattice():
    """Start in the middle, the middle cell walled at frame 1: left and right detours tie."""
    return lattice_system(5, 2, walls={(1, 2)}, start=2)

class TestMinTime(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.short = read_level(os.path.join(LEVELS, "short.txt"))
        cls.short_result = min_time_path(cls.short)

    def test_adjacent(self):
        level = read_level(os.path.join(LEVELS, "adjacent.txt"))
        result = min_time_path(level)
        self.assertEqual(result.optimal_value, 1)
        self.assertEqual(result.optimal_count, 2)
        self.assertEqual(result.witness.inputs, (InputSymbol(1, False),))

    def test_short_dash(self):
        self.assertEqual(self.short_result.optimal_value, 6)
        self.assertEqual(self.short_result.optimal_count, 576)

    def test_short_matches_exhaustive_enumeration(self):
        best, count = None, 0
        for length in range(1, 7):
            for inputs in itertools.product(ALPHABET, repeat=length):
                traj = run(self.short, inputs)
                if traj.completed and traj.frames == length:
                    if best is None:
                        best = length
                    if length == best:
                        count += 1
            if best is not None:
                break
        self.assertEqual(best, self.short_result.optimal_value)
        self.assertEqual(count, self.short_result.optimal_count)

    def test_witness_replays(self):
        traj = run(self.short, decode_inputs(self.short_result.witness.encoded_inputs()))
        self.assertTrue(traj.completed)
        self.assertEqual(traj.frames, self.short_result.optimal_value)

    def test_fixture_level(self):
        level = read_level(os.path.join(LEVELS, "l1.txt"))
        result = min_time_path(level)
        self.assertEqual(result.optimal_value, 18)
        self.assertTrue(run(level, result.witness.inputs).completed)

    def test_unreachable(self):
        level = read_level(os.path.join(LEVELS, "walled.txt"))
        with self.assertRaises(Unreachable) as ctx:
            min_time_path(level, frame_cap=30)
        self.assertEqual(ctx.exception.frame_cap, 30)

    def test_hundred_percent_needs_items(self):
        level = read_level(os.path.join(LEVELS, "l1.txt"))
        result = min_time_path(level, CategoryConstraint.hundred_percent(level), frame_cap=40)
        self.assertEqual(result.witness.final.items, level.all_items)
        self.assertGreaterEqual(result.optimal_value, 18)

    def test_agreement_with_least_action(self):
        ts = PlatformerSystem(self.short)
        result = least_action_path(ts, ActionFunctional.completion_time(), 10, endpoint=ts.is_goal)
        self.assertEqual(result.optimal_value, self.short_result.optimal_value)
        self.assertEqual(result.witness.frames, self.short_result.optimal_value)

    def test_invalid_cap(self):
        with self.assertRaises(ValueError):
            min_time_path(self.short, frame_cap=0)

class TestLeastAction(unittest.TestCase):
    def test_single_path_corridor(self):
        ts = lattice_system(3, 2, walls={(1, 0), (2, 0), (2, 1)}, start=0)
        result = enumerate_optimal(ts, KINETIC, 2)
        self.assertEqual(result.witness.inputs, (1, 1))
        self.assertEqual(result.optimal_count, 1)

    def test_straightest_path(self):
        ts = lattice_system(7, 4, start=3)
        endpoint = lambda s: s.x == 5
        result = enumerate_optimal(ts, KINETIC, 4, endpoint=endpoint, cap=100)
        actions = [trajectory_action(ts.replay(p), KINETIC) for p in enumerate_paths(ts, 4, endpoint)]
        best = min(actions)
        self.assertEqual(result.optimal_value, best)
        self.assertEqual(result.optimal_value, 1.0)
        self.assertEqual(result.optimal_count, sum(1 for a in actions if a == best))
        self.assertEqual(result.optimal_count, 6)
        self.assertEqual(len(result.co_optimal), 6)
        self.assertEqual(len({t.inputs for t in result.co_optimal}), 6)
        self.assertEqual(result.witness.inputs, (0, 0, 1, 1))

    def test_negative_costs(self):
        level = read_level(os.path.join(LEVELS, "short.txt"))
        ts = PlatformerSystem(level)
        f = ActionFunctional().bind(level)
        result = least_action_path(ts, f, 3)
        brute = min(trajectory_action(ts.replay(p), f) for p in enumerate_paths(ts, 3))
        self.assertLess(abs(result.optimal_value - brute), 1e-9)
        self.assertLess(result.optimal_value, 0)
        self.assertLess(abs(trajectory_action(result.witness, f) - result.optimal_value), 1e-9)

    def test_two_routes(self):
        result = enumerate_optimal(two_route_lattice(), KINETIC, 2, endpoint=lambda s: s.x == 2, cap=10)
        self.assertEqual(result.optimal_count, 2)
        self.assertEqual(sorted(t.inputs for t in result.co_optimal), [(-1, 1), (1, -1)])
        self.assertEqual(result.witness.inputs, (-1, 1))

    def test_mirror_symmetric_count_is_even(self):
        ts = lattice_system(5, 2, start=2)
        result = enumerate_optimal(ts, KINETIC, 2, endpoint=lambda s: s.x in (0, 4))
        self.assertEqual(result.optimal_count % 2, 0)

    def test_cap_limits_witnesses(self):
        result = enumerate_optimal(two_route_lattice(), KINETIC, 2, endpoint=lambda s: s.x == 2, cap=1)
        self.assertEqual(result.optimal_count, 2)
        self.assertEqual(len(result.co_optimal), 1)

    def test_unreachable_endpoint(self):
        with self.assertRaises(Unreachable):
            least_action_path(lattice_system(9, 2, start=4), KINETIC, 2, endpoint=lambda s: s.x == 0)

    def test_records(self):
        records = enumerate_optimal(two_route_lattice(), KINETIC, 2,
                                    endpoint=lambda s: s.x == 2, cap=10).to_record(KINETIC)
        self.assertEqual([r.inputs for r in records], ["-1 +1", "+1 -1"])
        self.assertEqual([r.run_index for r in records], [0, 1])
        self.assertTrue(all(r.action == 1.0 for r in records))

if __name__ == "__main__":
    unittest.main()
