"""
Deterministic tile platformer.

Everything is integer arithmetic on a grid of tiles, each tile being
subpixels_per_tile subpixels wide. The avatar is a box exactly one tile in
size; out-of-grid space counts as solid. One call to step() advances one
frame in a fixed update order, which is what makes replaying recorded
inputs bit-exact.
"""

import os
from enum import Enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from sources.config import PhysicsConfig
from sources.errors import (NonRectangular, UnknownChar, MissingStart,
                            MissingGoal, MultipleStarts, FrameCapExceeded)
from sources.logger import Logger

logger = Logger("simworld.log")

DEFAULT_PHYSICS = PhysicsConfig()

class Tile(Enum):
    EMPTY = '.'
    SOLID = '#'
    START = 'S'
    GOAL = 'G'
    ITEM = 'o'

class InputSymbol(NamedTuple):
    horizontal: int  # -1 left, 0 neutral, +1 right
    jump: bool

    @property
    def code(self) -> str:
        return "LNR"[self.horizontal + 1] + ("J" if self.jump else "-")

    def __str__(self) -> str:
        return self.code

    @classmethod
    def from_code(cls, code: str) -> "InputSymbol":
        if len(code) != 2 or code[0] not in "LNR" or code[1] not in "J-":
            raise ValueError(f"Invalid input symbol: {code!r}")
        return cls("LNR".index(code[0]) - 1, code[1] == "J")

ALPHABET = tuple(InputSymbol(h, j) for h in (-1, 0, 1) for j in (False, True))
NEUTRAL = InputSymbol(0, False)

def encode_inputs(inputs: Sequence[InputSymbol]) -> str:
    """Encode inputs as space separated codes, e.g. "R- R- RJ"."""
    return " ".join(u.code for u in inputs)

def decode_inputs(text: str) -> tuple:
    """Inverse of encode_inputs; commas are accepted as separators too."""
    return tuple(InputSymbol.from_code(code) for code in text.replace(',', ' ').split())

class SimState(NamedTuple):
    x: int
    y: int
    vx: int
    vy: int
    frame: int
    items: int
    grounded: bool

@dataclass(frozen=True)
class Level:
    name: str
    width: int
    height: int
    tiles: tuple
    start: tuple = field(init=False)
    goals: frozenset = field(init=False)
    items: tuple = field(init=False)
    solid: frozenset = field(init=False)

    def __post_init__(self):
        starts, goals, items, solid = [], [], [], []
        for row, line in enumerate(self.tiles):
            for col, tile in enumerate(line):
                if tile is Tile.START:
                    starts.append((col, row))
                elif tile is Tile.GOAL:
                    goals.append((col, row))
                elif tile is Tile.ITEM:
                    items.append((col, row))
                elif tile is Tile.SOLID:
                    solid.append((col, row))
        if len(starts) > 1:
            raise MultipleStarts(starts)
        if not starts:
            raise MissingStart()
        if not goals:
            raise MissingGoal()
        object.__setattr__(self, "start", starts[0])
        object.__setattr__(self, "goals", frozenset(goals))
        object.__setattr__(self, "items", tuple(items))
        object.__setattr__(self, "solid", frozenset(solid))

    @property
    def all_items(self) -> int:
        return (1 << len(self.items)) - 1

    def tile_at(self, col: int, row: int) -> Tile:
        if not (0 <= col < self.width and 0 <= row < self.height):
            return Tile.SOLID
        return self.tiles[row][col]

    def blocked(self, col: int, row: int) -> bool:
        return (col, row) in self.solid or not (0 <= col < self.width and 0 <= row < self.height)

    def tile_counts(self) -> dict:
        counts = {tile: 0 for tile in Tile}
        for line in self.tiles:
            for tile in line:
                counts[tile] += 1
        return counts

    def covered(self, x: int, y: int, q: int) -> list:
        """Tiles overlapped by the avatar box with top-left corner (x, y)."""
        cols = range(x // q, (x + q - 1) // q + 1)
        rows = range(y // q, (y + q - 1) // q + 1)
        return [(c, r) for r in rows for c in cols]

    def box_hits_solid(self, x: int, y: int, q: int) -> bool:
        return any(self.blocked(c, r) for c, r in self.covered(x, y, q))

    def touches_goal(self, x: int, y: int, q: int) -> bool:
        return any(cell in self.goals for cell in self.covered(x, y, q))

    def items_touched(self, x: int, y: int, q: int) -> int:
        cells = self.covered(x, y, q)
        mask = 0
        for bit, cell in enumerate(self.items):
            if cell in cells:
                mask |= 1 << bit
        return mask

    def render(self, state: SimState | None = None, q: int = DEFAULT_PHYSICS.subpixels_per_tile) -> str:
        """ASCII picture of the level, the avatar drawn as '@' on the tiles it overlaps."""
        rows = [[tile.value for tile in line] for line in self.tiles]
        if state is not None:
            for bit, (c, r) in enumerate(self.items):
                if state.items >> bit & 1:
                    rows[r][c] = '.'
            for c, r in self.covered(state.x, state.y, q):
                if 0 <= c < self.width and 0 <= r < self.height:
                    rows[r][c] = '@'
        return "\n".join("".join(line) for line in rows)

def load_level(text: str, name: str = "level") -> Level:
    """
    Parse an ASCII level.
    Args:
        text (str): grid lines using '#', '.', 'S', 'G', 'o'. A trailing newline is tolerated.
        name (str): level name.
    Returns:
        Level: the parsed level.
    """
    lines = text.rstrip('\n').split('\n')
    if lines == ['']:
        raise ValueError("Level text is empty")
    symbols = {tile.value: tile for tile in Tile}
    width = len(lines[0])
    rows = []
    for row, line in enumerate(lines):
        for col, char in enumerate(line):
            if char not in symbols:
                raise UnknownChar(char, col, row)
        if len(line) != width:
            raise NonRectangular(row, len(line), width)
        rows.append(tuple(symbols[char] for char in line))
    level = Level(name=name, width=width, height=len(rows), tiles=tuple(rows))
    logger.info(f"Loaded level {name} ({width}x{len(rows)}, {len(level.items)} items)")
    return level

def read_level(path: str) -> Level:
    try:
        with open(path, 'r', encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"Level file not found at path: {path}")
    return load_level(text, name=os.path.splitext(os.path.basename(path))[0])

def start_state(level: Level, physics: PhysicsConfig = DEFAULT_PHYSICS) -> SimState:
    q = physics.subpixels_per_tile
    col, row = level.start
    x, y = col * q, row * q
    return SimState(x=x, y=y, vx=0, vy=0, frame=0,
                    items=level.items_touched(x, y, q),
                    grounded=level.box_hits_solid(x, y + 1, q))

def touches_goal(state: SimState, level: Level, physics: PhysicsConfig = DEFAULT_PHYSICS) -> bool:
    return level.touches_goal(state.x, state.y, physics.subpixels_per_tile)

def _clamp(value: int, bound: int) -> int:
    return max(-bound, min(bound, value))

def step(s: SimState, u: InputSymbol, level: Level, physics: PhysicsConfig = DEFAULT_PHYSICS) -> SimState:
    """
    Advance one frame. Update order:
    accelerate, jump, gravity, clamp, move x and resolve, move y and resolve,
    collect items, advance frame.
    """
    q = physics.subpixels_per_tile
    vx = s.vx + u.horizontal * physics.accel
    vy = s.vy
    if u.jump and s.grounded:
        vy = physics.jump_impulse
    vy += physics.gravity
    vx = _clamp(vx, physics.vmax_x)
    vy = _clamp(vy, physics.vmax_y)

    x = s.x + vx
    if vx != 0 and level.box_hits_solid(x, s.y, q):
        # snap to the face of the tile that was entered
        x = ((x + q - 1) // q) * q - q if vx > 0 else (x // q + 1) * q
        vx = 0

    y = s.y + vy
    grounded = False
    if vy != 0 and level.box_hits_solid(x, y, q):
        if vy > 0:
            y = ((y + q - 1) // q) * q - q
            grounded = True
        else:
            y = (y // q + 1) * q
        vy = 0

    items = s.items | level.items_touched(x, y, q)
    return SimState(x, y, vx, vy, s.frame + 1, items, grounded)

@dataclass(frozen=True)
class Trajectory:
    inputs: tuple
    states: tuple
    completed: bool = False
    completion_frame: int | None = None

    @property
    def frames(self) -> int:
        return len(self.inputs)

    @property
    def final(self):
        return self.states[-1]

    def seconds(self, fps: int = DEFAULT_PHYSICS.fps) -> float:
        return self.frames / fps

    def encoded_inputs(self) -> str:
        return encode_inputs(self.inputs)

def run(level: Level, inputs: Sequence[InputSymbol],
        physics: PhysicsConfig = DEFAULT_PHYSICS,
        require_completion: bool = False) -> Trajectory:
    """
    Replay inputs from the start state, stopping at the first goal contact.
    Args:
        level (Level): the level to play.
        inputs (Sequence[InputSymbol]): one input per frame.
        physics (PhysicsConfig): physics constants and frame cap.
        require_completion (bool): raise FrameCapExceeded when the goal is not reached.
    Returns:
        Trajectory: inputs actually consumed and the visited states.
    """
    if len(inputs) > physics.frame_cap:
        raise ValueError(f"{len(inputs)} inputs exceed the frame cap of {physics.frame_cap}")
    state = start_state(level, physics)
    states = [state]
    completed = False
    for u in inputs:
        state = step(state, u, level, physics)
        states.append(state)
        if touches_goal(state, level, physics):
            completed = True
            break
    if require_completion and not completed:
        raise FrameCapExceeded(physics.frame_cap)
    consumed = tuple(inputs[:len(states) - 1])
    return Trajectory(inputs=consumed, states=tuple(states), completed=completed,
                      completion_frame=state.frame if completed else None)
