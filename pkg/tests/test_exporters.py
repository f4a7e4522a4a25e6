import unittest
import os
import sys
import csv
import tempfile

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.action import ActionFunctional
from sources.exporters import CsvTable, SvgChart, RunLog, WorldsGraph
from sources.exporters.csvTable import FIELD_COLUMNS, SCREEN_COLUMNS, field_rows, screen_rows
from sources.propagator import TransferChain, WeightFunction, double_slit
from sources.schemas import RunRecord
from sources.transitions import lattice_system
from sources.worlds import worlds_tree

def record(index, inputs, completed=True):
    return RunRecord(run_index=index, seed=index, inputs=inputs, completed=completed,
                     frames=len(inputs.split()), action=-1.5)

class TestExporters(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.tmp.name, "out")

    def tearDown(self):
        self.tmp.cleanup()

    def test_csv_table(self):
        table = CsvTable(self.out)
        path = table.save("table", ["a", "b"], [[1, 0.1], [2, 1 / 3]])
        self.assertTrue(path.endswith("table.csv"))
        self.assertEqual(table.written, [path])
        with open(path, encoding="utf-8") as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], ["a", "b"])
        self.assertEqual(float(rows[2][1]), 1 / 3)

    def test_output_is_deterministic(self):
        table = CsvTable(self.out)
        first = table.render(["x"], [[0.5], [2.0]])
        self.assertEqual(first, table.render(["x"], [[0.5], [2.0]]))
        chart = SvgChart(self.out)
        series = {"a": ([1.0, 2.0, 3.0], [0.1, 0.4, 0.2])}
        self.assertEqual(chart.render(series, title="t"), chart.render(series, title="t"))

    def test_field_rows(self):
        ts = lattice_system(5, 2)
        fields = TransferChain(ts, ActionFunctional.kinetic(), 2).fields(WeightFunction("feynman", 1.0))
        rows = field_rows(fields, ts)
        self.assertEqual(len(FIELD_COLUMNS), len(rows[0]))
        self.assertEqual(rows[0][0], 0)
        self.assertEqual(len(rows), 1 + 3 + 5)
        for frame in (1, 2):
            with self.subTest(frame=frame):
                total = sum(r[-1] for r in rows if r[0] == frame)
                self.assertAlmostEqual(total, 1.0)

    def test_screen_rows(self):
        result = double_slit(15, 8, 4, (5, 9), WeightFunction("feynman", 1.0),
                             ActionFunctional.kinetic(), start=7)
        rows = screen_rows(result, "both")
        self.assertEqual(len(rows), 15)
        self.assertEqual(len(rows[0]), len(SCREEN_COLUMNS))
        self.assertAlmostEqual(sum(r[3] for r in rows), 1.0)

    def test_svg_chart(self):
        chart = SvgChart(self.out)
        path = chart.save("fit", {"KL": ([0.1, 1.0, 10.0], [0.3, 0.01, 0.2])}, log_x=True)
        with open(path, encoding="utf-8") as f:
            text = f.read()
        self.assertTrue(text.startswith("<svg"))
        self.assertIn("<polyline", text)
        with self.assertRaises(ValueError):
            chart.render({})

    def test_run_log(self):
        log = RunLog(self.out)
        records = [record(0, "R- R-"), record(1, "L-", completed=False)]
        path = log.save("runs", records)
        with open(path, encoding="utf-8") as f:
            self.assertEqual(len(f.read().splitlines()), 2)
        self.assertEqual(log.load(path), records)

    def test_run_log_errors(self):
        log = RunLog(self.out)
        with self.assertRaises(FileNotFoundError):
            log.load(os.path.join(self.out, "missing.jsonl"))
        path = os.path.join(self.tmp.name, "bad.jsonl")
        with open(path, "w", encoding="utf-8") as f:
            f.write('{"run_index": 0}\n')
        with self.assertRaises(ValueError):
            log.load(path)

    def test_worlds_graph(self):
        tree = worlds_tree([record(0, "R- R-"), record(1, "R- RJ")])
        dot = WorldsGraph(self.out).save("worlds", tree)
        txt = WorldsGraph(self.out, fmt="txt").save("worlds", tree)
        self.assertTrue(dot.endswith(".dot"))
        self.assertTrue(txt.endswith(".txt"))
        with self.assertRaises(ValueError):
            WorldsGraph(self.out, fmt="png")

if __name__ == "__main__":
    unittest.main()
