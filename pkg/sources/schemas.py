from typing import Optional
from pydantic import BaseModel, Field

from sources.utility import pretty_print

class RunRecord(BaseModel):
    """
    One attempt at a level. Field names are the run-log JSON keys.
    """
    run_index: int = Field(ge=0)
    seed: int = Field(ge=0)
    inputs: str = ""
    completed: bool
    frames: int = Field(ge=0)
    action: float
    in_tube: Optional[bool] = None

    def __str__(self):
        status = f"completed in {self.frames} frames" if self.completed else f"DNF after {self.frames} frames"
        return f"Run {self.run_index} (seed {self.seed}): {status}, action {self.action:g}"

    def jsonify(self):
        return {
            "run_index": self.run_index,
            "seed": self.seed,
            "inputs": self.inputs,
            "completed": self.completed,
            "frames": self.frames,
            "action": self.action,
            "in_tube": self.in_tube,
        }

    def to_json_line(self) -> str:
        return self.model_dump_json()

    def show(self):
        pretty_print(str(self), color="success" if self.completed else "warning")

class HbarFit(BaseModel):
    grid: list[float]
    divergence: list[float]
    hbar_eff: float
    dnf_fraction: float = 0.0

    def __str__(self):
        return f"hbar_eff={self.hbar_eff:g} over {len(self.grid)} grid points (DNF {self.dnf_fraction:.3f} excluded)"

    def jsonify(self):
        return {
            "grid": self.grid,
            "divergence": self.divergence,
            "hbar_eff": self.hbar_eff,
            "dnf_fraction": self.dnf_fraction,
        }

class CommandConfig(BaseModel):
    """
    Flags of one CLI invocation after argparse, shared by every subcommand.
    """
    subcommand: str
    level: Optional[str] = None
    config: Optional[str] = None
    out: str = "out"
    seed: Optional[int] = None
    n: Optional[int] = None
    p: Optional[float] = None
    hbar: Optional[float] = None
    hbars: Optional[list[float]] = None
    radius: Optional[int] = None
    frame_cap: Optional[int] = None
    category: str = "any%"
    svg: bool = True

    def jsonify(self):
        return self.model_dump()
