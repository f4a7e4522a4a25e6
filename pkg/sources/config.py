"""
Configuration loading.

Defaults live in the pydantic models below; config.ini (or any file passed
with --config) overrides them section by section. A flat key=value file
without section headers is accepted as well: bare keys are physics keys and
dotted keys such as action.kind are routed to the section named by the
prefix.
"""

import os
import configparser
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, model_validator

from sources.errors import ConfigError

load_dotenv()

class PhysicsConfig(BaseModel):
    gravity: int = 1
    accel: int = 1
    vmax_x: int = 4
    vmax_y: int = 8
    jump_impulse: int = -8
    subpixels_per_tile: int = Field(default=16, ge=2)
    frame_cap: int = Field(default=240, ge=1)
    fps: int = Field(default=60, ge=1)

    @model_validator(mode="after")
    def check_speeds(self):
        # a move never skips a whole tile, so snapping only looks one tile ahead
        if not 0 < self.vmax_x < self.subpixels_per_tile:
            raise ValueError("vmax_x must be in (0, subpixels_per_tile)")
        if not 0 < self.vmax_y < self.subpixels_per_tile:
            raise ValueError("vmax_y must be in (0, subpixels_per_tile)")
        return self

class ActionConfig(BaseModel):
    kind: Literal["lagrangian", "completion_time", "composite"] = "lagrangian"
    mass: float = Field(default=1.0, gt=0)
    potential_coeff: float | None = None
    penalty_weight: float = Field(default=0.0, ge=0)
    potential_at: Literal["successor", "midpoint"] = "successor"
    category: str = "any%"

class PropagatorConfig(BaseModel):
    hbar: float = Field(default=1.0, gt=0)
    weight: Literal["feynman", "boltzmann"] = "feynman"
    path_cap: int = Field(default=100_000, ge=1)
    state_budget: int = Field(default=200_000, ge=1)

class RunsConfig(BaseModel):
    seed: int = Field(default=0, ge=0)
    count: int = Field(default=1000, ge=1)
    noise: float = Field(default=0.05, ge=0, le=1)
    threads: int = Field(default=0, ge=0)

class StatsConfig(BaseModel):
    grid_min: float = Field(default=1e-2, gt=0)
    grid_max: float = Field(default=1e2, gt=0)
    grid_points: int = Field(default=41, ge=1)
    radius: int = Field(default=8, ge=0)
    epsilon: float = Field(default=1e-9, gt=0)

class PathrunConfig(BaseModel):
    physics: PhysicsConfig = PhysicsConfig()
    action: ActionConfig = ActionConfig()
    propagator: PropagatorConfig = PropagatorConfig()
    runs: RunsConfig = RunsConfig()
    stats: StatsConfig = StatsConfig()

SECTIONS = {
    "PHYSICS": "physics",
    "ACTION": "action",
    "PROPAGATOR": "propagator",
    "RUNS": "runs",
    "STATS": "stats",
}

def _flat_to_ini(text: str) -> str:
    """Rewrite a header-less key=value file as an ini document."""
    sections = {name: [] for name in SECTIONS}
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith(('#', ';')):
            continue
        if '=' not in stripped:
            raise ConfigError(stripped, "expected key=value")
        key, value = (part.strip() for part in stripped.split('=', 1))
        section = "PHYSICS"
        if '.' in key:
            prefix, key = key.split('.', 1)
            section = prefix.upper()
        elif key == "category":
            section = "ACTION"
        if section not in sections:
            raise ConfigError(key, f"unknown section {section}")
        sections[section].append(f"{key} = {value}")
    return "\n".join(f"[{name}]\n" + "\n".join(lines) for name, lines in sections.items())

def parse_config(text: str) -> PathrunConfig:
    """
    Parse configuration text, ini or flat key=value.
    Args:
        text (str): The configuration document.
    Returns:
        PathrunConfig: validated configuration, defaults for missing keys.
    """
    if not any(line.strip().startswith('[') for line in text.splitlines()):
        text = _flat_to_ini(text)
    config = configparser.ConfigParser(interpolation=None)
    try:
        config.read_string(text)
    except configparser.Error as e:
        raise ConfigError("<file>", str(e)) from e
    values = {}
    for section in config.sections():
        if section.upper() not in SECTIONS:
            raise ConfigError(section, "unknown section")
        values[SECTIONS[section.upper()]] = dict(config[section])
    try:
        return PathrunConfig.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(".".join(str(p) for p in first["loc"]), first["msg"]) from e

def load_config(path: str | None = None) -> PathrunConfig:
    """
    Load configuration from a file. Falls back to ./config.ini, then to defaults.
    """
    if path is None:
        if not os.path.exists('./config.ini'):
            return PathrunConfig()
        path = './config.ini'
    try:
        with open(path, 'r', encoding="utf-8") as f:
            return parse_config(f.read())
    except FileNotFoundError:
        raise FileNotFoundError(f"Config file not found at path: {path}")

def worker_count(config_threads: int = 0) -> int:
    """
    Number of workers for parallel loops. PATHRUN_THREADS wins over the config,
    0 means one worker per CPU.
    """
    value = os.getenv('PATHRUN_THREADS')
    threads = config_threads
    if value not in (None, ""):
        try:
            threads = int(value)
        except ValueError:
            raise ConfigError("PATHRUN_THREADS", f"not an integer: {value}")
    if threads < 0:
        raise ConfigError("PATHRUN_THREADS", "must be >= 0")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads
