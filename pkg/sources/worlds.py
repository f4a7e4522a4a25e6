"""
Prefix tree of input sequences.

Two runs share a branch for as long as their inputs agree; the node where
they part is a branch event, the frame at which their worlds separate.
"""

from sources.errors import EmptyInput
from sources.logger import Logger

logger = Logger("runstats.log")

class WorldNode:
    __slots__ = ("label", "depth", "count", "terminal", "children")

    def __init__(self, label: str | None, depth: int):
        self.label = label
        self.depth = depth
        self.count = 0
        self.terminal = 0
        self.children = {}

class WorldsTree:
    """
    Trie over run input strings. Every node counts the runs passing through
    it; terminal counts the runs ending there.
    """
    def __init__(self):
        self.root = WorldNode(None, 0)

    def add(self, inputs: str) -> None:
        node = self.root
        node.count += 1
        for depth, code in enumerate(inputs.replace(',', ' ').split(), start=1):
            child = node.children.get(code)
            if child is None:
                child = WorldNode(code, depth)
                node.children[code] = child
            child.count += 1
            node = child
        node.terminal += 1

    def nodes(self):
        """Depth-first traversal, children in sorted label order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children[k] for k in sorted(node.children, reverse=True))

    @property
    def run_count(self) -> int:
        return self.root.count

    def leaf_count(self) -> int:
        """Number of distinct complete input sequences."""
        return sum(1 for node in self.nodes() if node.terminal > 0)

    def branch_events(self) -> dict:
        """Depth -> number of nodes at that depth with two or more children."""
        events = {}
        for node in self.nodes():
            if len(node.children) >= 2:
                events[node.depth] = events.get(node.depth, 0) + 1
        return dict(sorted(events.items()))

    def total_branch_events(self) -> int:
        return sum(self.branch_events().values())

    def check(self) -> bool:
        """Every node's count equals its children's counts plus the runs ending there."""
        for node in self.nodes():
            if node.count != node.terminal + sum(c.count for c in node.children.values()):
                logger.error(f"Inconsistent node at depth {node.depth} ({node.label})")
                return False
        return True

    def render_text(self) -> str:
        lines = [f"* {self.root.count}"]
        for node in self.nodes():
            if node is self.root:
                continue
            end = f" [{node.terminal} end]" if node.terminal else ""
            lines.append(f"{'  ' * node.depth}{node.label} {node.count}{end}")
        return "\n".join(lines)

    def to_dot(self) -> str:
        ids = {}
        lines = ["digraph worlds {", '  node [shape=circle, label=""];']
        for node in self.nodes():
            ids[id(node)] = f"n{len(ids)}"
            if node is not self.root:
                shape = "doublecircle" if node.terminal else "circle"
                lines.append(f"  {ids[id(node)]} [shape={shape}, tooltip=\"{node.count}\"];")
        for node in self.nodes():
            for code in sorted(node.children):
                child = node.children[code]
                lines.append(f"  {ids[id(node)]} -> {ids[id(child)]} [label=\"{code} ({child.count})\"];")
        lines.append("}")
        return "\n".join(lines)

def worlds_tree(runs: list) -> WorldsTree:
    """Build the prefix tree of a run log."""
    if not runs:
        raise EmptyInput("runs")
    tree = WorldsTree()
    for record in runs:
        tree.add(record.inputs)
    logger.info(f"Worlds tree: {tree.run_count} runs, {tree.leaf_count()} leaves, "
                f"{tree.total_branch_events()} branch events")
    return tree
