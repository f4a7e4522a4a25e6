"""
define a generic exporter class, any artifact written by the cli goes through one.

An exporter renders domain data to text (CSV, SVG, JSON lines, DOT) and
saves it under the output directory. Rendering is pure and deterministic:
the same data gives byte-identical files.
"""

import os
import sys
from abc import abstractmethod

if __name__ == "__main__": # if running as a script for individual testing
    sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from sources.logger import Logger

class Exporter():
    """
    Abstract class for all exporters.
    """
    def __init__(self, out_dir: str = "out"):
        self.tag = "undefined"
        self.name = "undefined"
        self.description = "undefined"
        self.extension = "txt"
        self.logger = Logger("exporters.log")
        self.out_dir = out_dir
        self.written = []

    def get_out_dir(self) -> str:
        return self.out_dir

    def create_out_dir(self) -> str:
        """Create the output directory if it does not exist."""
        if not os.path.exists(self.out_dir):
            self.logger.info(f"Creating directory {self.out_dir}")
            os.makedirs(self.out_dir)
        return self.out_dir

    @abstractmethod
    def render(self, *args, **kwargs) -> str:
        """
        Abstract method that must be implemented by child classes to render data as text.
        Returns:
            str: The file content.
        """
        pass

    def save(self, filename: str, *args, **kwargs) -> str:
        """
        Render and write a file under the output directory.
        Args:
            filename (str): file name, the exporter's extension is added when missing.
        Returns:
            str: The path written.
        """
        assert self.tag != "undefined", "Tag not defined"
        if not filename.endswith(f".{self.extension}"):
            filename = f"{filename}.{self.extension}"
        path = os.path.join(self.create_out_dir(), filename)
        content = self.render(*args, **kwargs)
        with open(path, 'w', encoding="utf-8", newline="\n") as f:
            f.write(content)
        self.logger.info(f"{self.name}: wrote {path}")
        self.written.append(path)
        return path
