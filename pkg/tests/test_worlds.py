import unittest
import os
import sys
from collections import Counter

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.agents import AgentSpec, generate_runs
from sources.errors import EmptyInput
from sources.schemas import RunRecord
from sources.simworld import read_level
from sources.worlds import WorldsTree, worlds_tree

LEVELS = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'levels'))

def record(index, inputs):
    return RunRecord(run_index=index, seed=0, inputs=inputs, completed=False,
                     frames=len(inputs.split()), action=0.0)

def first_divergence_nodes(sequences: list) -> Counter:
    """Depth -> number of distinct prefixes after which at least two sequences part."""
    branching = {}
    for seq in sequences:
        for depth in range(len(seq)):
            branching.setdefault(seq[:depth], set()).add(seq[depth])
    return Counter(len(prefix) for prefix, nexts in branching.items() if len(nexts) >= 2)

class TestWorldsTree(unittest.TestCase):
    def test_identical_runs_never_branch(self):
        tree = worlds_tree([record(i, "R- R- RJ") for i in range(5)])
        self.assertEqual(tree.branch_events(), {})
        self.assertEqual(tree.leaf_count(), 1)
        self.assertEqual(tree.run_count, 5)

    def test_single_branch(self):
        tree = worlds_tree([record(0, "R-,R-"), record(1, "R-,RJ")])
        self.assertEqual(tree.branch_events(), {1: 1})
        self.assertEqual(tree.total_branch_events(), 1)
        self.assertEqual(tree.leaf_count(), 2)
        self.assertTrue(tree.check())

    def test_prefix_run(self):
        tree = worlds_tree([record(0, "R- R-"), record(1, "R- R- R-")])
        self.assertEqual(tree.branch_events(), {})
        self.assertEqual(tree.leaf_count(), 2)
        self.assertTrue(tree.check())

    def test_check_detects_corruption(self):
        tree = WorldsTree()
        tree.add("R- L-")
        tree.root.count += 1
        self.assertFalse(tree.check())

    def test_empty(self):
        with self.assertRaises(EmptyInput):
            worlds_tree([])

    def test_renderings(self):
        tree = worlds_tree([record(0, "R- R-"), record(1, "R- L-")])
        text = tree.render_text().split("\n")
        self.assertEqual(text[0], "* 2")
        self.assertEqual(text[1], "  R- 2")
        self.assertEqual(text[2], "    L- 1 [1 end]")
        dot = tree.to_dot()
        self.assertTrue(dot.startswith("digraph worlds {"))
        self.assertIn('[label="R- (2)"]', dot)
        self.assertEqual(dot.count("->"), 3)

    def test_matches_pairwise_divergence(self):
        level = read_level(os.path.join(LEVELS, "short.txt"))
        runs = generate_runs(AgentSpec(kind="noisy", p=0.3), level, 1000, base_seed=21)
        tree = worlds_tree(runs)
        self.assertTrue(tree.check())
        self.assertEqual(tree.run_count, 1000)
        expected = first_divergence_nodes([tuple(r.inputs.split()) for r in runs])
        self.assertEqual(tree.branch_events(), dict(sorted(expected.items())))
        self.assertEqual(tree.leaf_count(), len({r.inputs for r in runs}))

if __name__ == "__main__":
    unittest.main()
