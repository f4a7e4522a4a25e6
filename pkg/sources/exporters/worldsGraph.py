from sources.exporters.exporter import Exporter
from sources.worlds import WorldsTree

class WorldsGraph(Exporter):
    """
    The worlds tree as DOT graph text, or as indented text with fmt="txt".
    """
    def __init__(self, out_dir: str = "out", fmt: str = "dot"):
        super().__init__(out_dir)
        if fmt not in ("dot", "txt"):
            raise ValueError(f"Unknown worlds graph format: {fmt}")
        self.tag = "worlds"
        self.name = "Worlds Graph"
        self.description = "Prefix tree of run inputs with visit counts."
        self.extension = fmt

    def render(self, tree: WorldsTree) -> str:
        text = tree.to_dot() if self.extension == "dot" else tree.render_text()
        return text + "\n"
