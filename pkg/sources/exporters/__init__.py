from .exporter import Exporter
from .csvTable import CsvTable
from .svgChart import SvgChart
from .runLog import RunLog
from .worldsGraph import WorldsGraph

__all__ = ["Exporter", "CsvTable", "SvgChart", "RunLog", "WorldsGraph"]
