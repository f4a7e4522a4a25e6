"""
Transition systems: the one interface the propagator and the searches run on.

A system has an initial state, a fixed ordered list of labelled transitions
per state, and an encoder giving every state of a frame layer a dense integer
id. Ids are frame-local: (frame, id) identifies a state globally.
"""

from abc import abstractmethod
from collections import OrderedDict
from typing import NamedTuple, Sequence

from sources.config import PhysicsConfig
from sources.simworld import (Level, SimState, Trajectory, ALPHABET,
                              DEFAULT_PHYSICS, start_state, step)

DEFAULT_CACHE_SIZE = 1 << 18

class TransitionSystem():
    """
    Abstract class for all transition systems.
    """
    kind = "undefined"

    @abstractmethod
    def initial(self):
        """The state at frame 0."""
        pass

    @abstractmethod
    def transitions(self, state) -> list:
        """
        Ordered (label, successor) pairs; empty for absorbing and dead-end states.
        """
        pass

    @abstractmethod
    def encode(self, state) -> int:
        pass

    @abstractmethod
    def decode(self, sid: int, frame: int):
        pass

    def is_absorbing(self, state) -> bool:
        """True when the state ends a run (absorbed at a goal)."""
        return False

    def is_goal(self, state) -> bool:
        """True when the state is an absorbing state that counts as a completion."""
        return False

    def position(self, state) -> tuple:
        """Spatial coordinates used by tube metrics and exports."""
        pass

    def replay(self, labels: Sequence, start=None) -> Trajectory:
        """
        Follow labels from start (default: the initial state).
        Raises ValueError on a label that is not available.
        """
        state = self.initial() if start is None else start
        states = [state]
        for label in labels:
            successors = dict(self.transitions(state))
            if label not in successors:
                raise ValueError(f"Label {label} not available at frame {state.frame}")
            state = successors[label]
            states.append(state)
        completed = self.is_goal(state)
        return Trajectory(inputs=tuple(labels), states=tuple(states), completed=completed,
                          completion_frame=state.frame if completed else None)

class PlatformerSystem(TransitionSystem):
    """
    The platformer as a transition system. Labels are InputSymbols in ALPHABET
    order; goal contact is absorbing and counts as a completion when the
    category holds.
    """
    kind = "platformer"

    def __init__(self, level: Level, physics: PhysicsConfig = DEFAULT_PHYSICS, category=None,
                 cache_size: int = DEFAULT_CACHE_SIZE):
        from sources.action import CategoryConstraint
        self.level = level
        self.physics = physics
        self.category = category if category is not None else CategoryConstraint.any_percent()
        q = physics.subpixels_per_tile
        self.q = q
        self.x_span = (level.width - 1) * q + 1
        self.y_span = (level.height - 1) * q + 1
        self.vx_span = 2 * physics.vmax_x + 1
        self.vy_span = 2 * physics.vmax_y + 1
        self.item_span = 1 << len(level.items)
        if cache_size < 0:
            raise ValueError(f"cache_size must be >= 0, got {cache_size}")
        self.cache_size = cache_size
        self._successors = OrderedDict()

    def initial(self) -> SimState:
        return start_state(self.level, self.physics)

    def encode(self, s: SimState) -> int:
        sid = s.x
        sid = sid * self.y_span + s.y
        sid = sid * self.vx_span + s.vx + self.physics.vmax_x
        sid = sid * self.vy_span + s.vy + self.physics.vmax_y
        sid = sid * 2 + int(s.grounded)
        return sid * self.item_span + s.items

    def decode(self, sid: int, frame: int) -> SimState:
        sid, items = divmod(sid, self.item_span)
        sid, grounded = divmod(sid, 2)
        sid, vy = divmod(sid, self.vy_span)
        sid, vx = divmod(sid, self.vx_span)
        x, y = divmod(sid, self.y_span)
        return SimState(x=x, y=y, vx=vx - self.physics.vmax_x, vy=vy - self.physics.vmax_y,
                        frame=frame, items=items, grounded=bool(grounded))

    def is_absorbing(self, s: SimState) -> bool:
        return self.level.touches_goal(s.x, s.y, self.q)

    def is_goal(self, s: SimState) -> bool:
        return self.is_absorbing(s) and self.category.items_ok(s.items)

    def position(self, s: SimState) -> tuple:
        return (s.x, s.y)

    def transitions(self, s: SimState) -> list:
        if self.is_absorbing(s):
            return []
        sid = self.encode(s)
        cached = self._successors.get(sid)
        if cached is None:
            cached = [(u, step(s, u, self.level, self.physics)) for u in ALPHABET]
            if self.cache_size:
                self._successors[sid] = cached
                if len(self._successors) > self.cache_size:
                    self._successors.popitem(last=False)
            return cached
        self._successors.move_to_end(sid)
        frame = s.frame + 1
        return [(u, succ if succ.frame == frame else succ._replace(frame=frame)) for u, succ in cached]

class LatticeState(NamedTuple):
    x: int
    frame: int

class LatticeSystem(TransitionSystem):
    """
    Walk on cells 0..width-1: each frame the walker moves by -1, 0 or +1.
    Walls are (frame, cell) pairs that cannot be occupied at that frame.
    """
    kind = "lattice"

    def __init__(self, width: int, frames: int, walls=(), start: int | None = None, goals=()):
        if width < 3:
            raise ValueError(f"Lattice width must be >= 3, got {width}")
        if frames < 1:
            raise ValueError(f"Lattice horizon must be >= 1, got {frames}")
        self.width = width
        self.frames = frames
        self.walls = frozenset((int(t), int(x)) for t, x in walls)
        for t, x in self.walls:
            if not (0 <= x < width and 0 <= t <= frames):
                raise ValueError(f"Wall ({t}, {x}) outside the {width}x{frames} lattice")
        self.start = width // 2 if start is None else start
        if not 0 <= self.start < width or (0, self.start) in self.walls:
            raise ValueError(f"Start cell {self.start} is outside the lattice or walled")
        self.goals = frozenset(goals)

    def initial(self) -> LatticeState:
        return LatticeState(self.start, 0)

    def encode(self, s: LatticeState) -> int:
        return s.x

    def decode(self, sid: int, frame: int) -> LatticeState:
        return LatticeState(sid, frame)

    def is_absorbing(self, s: LatticeState) -> bool:
        return s.x in self.goals

    def is_goal(self, s: LatticeState) -> bool:
        return s.x in self.goals

    def position(self, s: LatticeState) -> tuple:
        return (s.x,)

    def transitions(self, s: LatticeState) -> list:
        if s.frame >= self.frames or self.is_absorbing(s):
            return []
        frame = s.frame + 1
        moves = []
        for dx in (-1, 0, 1):
            x = s.x + dx
            if 0 <= x < self.width and (frame, x) not in self.walls:
                moves.append((dx, LatticeState(x, frame)))
        return moves

def lattice_system(width: int, frames: int, walls=(), start: int | None = None, goals=()) -> LatticeSystem:
    """
    Build a lattice walk.
    Args:
        width (int): number of cells, >= 3.
        frames (int): horizon, >= 1; states at the horizon have no successors.
        walls: iterable of (frame, cell) pairs.
        start (int): start cell, the middle cell by default.
        goals: cells that absorb the walker.
    """
    return LatticeSystem(width, frames, walls=walls, start=start, goals=goals)

def slit_walls(width: int, slit_frame: int, open_cells) -> set:
    """Walls filling the row at slit_frame except for the open cells."""
    return {(slit_frame, x) for x in range(width) if x not in set(open_cells)}
