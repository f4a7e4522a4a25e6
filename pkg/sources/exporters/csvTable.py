import io
import csv

from sources.exporters.exporter import Exporter
from sources.propagator import DoubleSlitResult, born_distribution
from sources.transitions import TransitionSystem

FIELD_COLUMNS = ["frame", "state_id", "x", "y", "re", "im", "prob"]

class CsvTable(Exporter):
    """
    Writes tables as CSV with a header row. Floats use repr so values round-trip.
    """
    def __init__(self, out_dir: str = "out"):
        super().__init__(out_dir)
        self.tag = "csv"
        self.name = "CSV Table"
        self.description = "Tabular results: amplitudes, histograms, sweeps and fits."
        self.extension = "csv"

    def render(self, header: list, rows: list) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buffer.getvalue()

def field_rows(fields: list, ts: TransitionSystem) -> list:
    """One row per reachable state per frame; prob is the Born probability within the frame."""
    rows = []
    for amplitudes in fields:
        probabilities = born_distribution(amplitudes) if amplitudes.total_weight() > 0 else {}
        for sid in sorted(amplitudes.entries):
            k = amplitudes.entries[sid]
            position = ts.position(amplitudes.states[sid])
            x = position[0]
            y = position[1] if len(position) > 1 else ""
            rows.append([amplitudes.frame, sid, x, y, k.real, k.imag, probabilities.get(sid, 0.0)])
    return rows

def screen_rows(result: DoubleSlitResult, which: str) -> list:
    """Screen cells of one double-slit configuration: both, left or right."""
    amplitudes = getattr(result, which)
    probabilities = getattr(result, f"p_{which}")
    return [[x, float(k.real), float(k.imag), float(p), float(pc)]
            for x, k, p, pc in zip(result.cells, amplitudes, probabilities, result.p_classical)]

SCREEN_COLUMNS = ["x", "re", "im", "prob", "classical"]
