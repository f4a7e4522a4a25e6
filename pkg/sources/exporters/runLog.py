from pydantic import ValidationError

from sources.exporters.exporter import Exporter
from sources.schemas import RunRecord

class RunLog(Exporter):
    """
    Run logs as JSON lines, one RunRecord per line in run-index order.
    """
    def __init__(self, out_dir: str = "out"):
        super().__init__(out_dir)
        self.tag = "jsonl"
        self.name = "Run Log"
        self.description = "JSON lines with run_index, seed, inputs, completed, frames, action, in_tube."
        self.extension = "jsonl"

    def render(self, records: list) -> str:
        return "".join(r.to_json_line() + "\n" for r in records)

    def load(self, path: str) -> list:
        """
        Read a run log.
        Returns:
            list[RunRecord]: records in file order; blank lines are skipped.
        """
        records = []
        try:
            with open(path, 'r', encoding="utf-8") as f:
                for number, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        records.append(RunRecord.model_validate_json(line))
                    except ValidationError as e:
                        raise ValueError(f"{path}:{number}: invalid run record: {e.errors()[0]['msg']}") from e
        except FileNotFoundError:
            raise FileNotFoundError(f"Run log not found at path: {path}")
        self.logger.info(f"Loaded {len(records)} runs from {path}")
        return records
