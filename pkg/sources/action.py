"""
Action functionals over trajectories.

A step from s to s2 lasts one frame, so the discrete action is the frame sum
of L = T - V. Units are dimensionless action quanta, which leaves hbar as a
free dial for the propagator.
"""

from enum import Enum
from dataclasses import dataclass, replace

from sources.config import ActionConfig, PhysicsConfig
from sources.simworld import Level, SimState, Trajectory, DEFAULT_PHYSICS
from sources.transitions import LatticeState

class ActionKind(Enum):
    LAGRANGIAN = "lagrangian"
    COMPLETION_TIME = "completion_time"
    COMPOSITE = "composite"

class CategoryKind(Enum):
    ANY_PERCENT = "any%"
    HUNDRED_PERCENT = "100%"

@dataclass(frozen=True)
class CategoryConstraint:
    kind: CategoryKind = CategoryKind.ANY_PERCENT
    required_items: int = 0

    @classmethod
    def any_percent(cls) -> "CategoryConstraint":
        return cls(CategoryKind.ANY_PERCENT, 0)

    @classmethod
    def hundred_percent(cls, level: Level) -> "CategoryConstraint":
        return cls(CategoryKind.HUNDRED_PERCENT, level.all_items)

    def items_ok(self, items: int) -> bool:
        return items & self.required_items == self.required_items

    def __str__(self) -> str:
        return self.kind.value

def parse_category(text: str, level: Level) -> CategoryConstraint:
    """Parse 'any%' or '100%' (also 'any' / '100')."""
    value = text.strip().lower().rstrip('%')
    if value == "any":
        return CategoryConstraint.any_percent()
    if value == "100":
        return CategoryConstraint.hundred_percent(level)
    raise ValueError(f"Unknown category: {text!r}, expected any% or 100%")

def satisfies_category(traj: Trajectory, category: CategoryConstraint) -> bool:
    """
    any% needs a completed run; 100% also needs every required item collected
    by the completion frame.
    """
    if not traj.completed:
        return False
    if category.kind is CategoryKind.ANY_PERCENT:
        return True
    return category.items_ok(traj.final.items)

@dataclass(frozen=True)
class ActionFunctional:
    kind: ActionKind = ActionKind.LAGRANGIAN
    mass: float = 1.0
    potential_coeff: float = float(DEFAULT_PHYSICS.gravity)
    penalty_weight: float = 0.0
    category: CategoryConstraint = CategoryConstraint()
    # subpixel y of the bottom row; None switches the potential off
    bottom: int | None = None
    potential_at: str = "successor"
    base: ActionKind = ActionKind.COMPLETION_TIME

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if self.penalty_weight < 0:
            raise ValueError(f"penalty_weight must be >= 0, got {self.penalty_weight}")
        if self.potential_at not in ("successor", "midpoint"):
            raise ValueError(f"potential_at must be successor or midpoint, got {self.potential_at}")
        if self.base is ActionKind.COMPOSITE:
            raise ValueError("a composite functional cannot use itself as its base")

    @classmethod
    def completion_time(cls) -> "ActionFunctional":
        return cls(kind=ActionKind.COMPLETION_TIME)

    @classmethod
    def kinetic(cls, mass: float = 1.0) -> "ActionFunctional":
        """Lagrangian without potential, the free-particle action."""
        return cls(kind=ActionKind.LAGRANGIAN, mass=mass, bottom=None)

    def bind(self, level: Level, physics: PhysicsConfig = DEFAULT_PHYSICS) -> "ActionFunctional":
        """Measure heights from the bottom row of level."""
        return replace(self, bottom=(level.height - 1) * physics.subpixels_per_tile)

def functional_from_config(config: ActionConfig, level: Level | None = None,
                           physics: PhysicsConfig = DEFAULT_PHYSICS) -> ActionFunctional:
    category = CategoryConstraint.any_percent()
    if level is not None:
        category = parse_category(config.category, level)
    coeff = config.potential_coeff if config.potential_coeff is not None else float(physics.gravity)
    functional = ActionFunctional(kind=ActionKind(config.kind), mass=config.mass,
                                  potential_coeff=coeff, penalty_weight=config.penalty_weight,
                                  category=category, potential_at=config.potential_at)
    if level is not None:
        functional = functional.bind(level, physics)
    return functional

def kinetic_energy(s, s2, mass: float) -> float:
    if isinstance(s2, LatticeState):
        dx = s2.x - s.x
        return 0.5 * mass * dx * dx
    return 0.5 * mass * (s2.vx * s2.vx + s2.vy * s2.vy)

def potential_energy(s, s2, f: ActionFunctional) -> float:
    if f.bottom is None or not isinstance(s2, SimState):
        return 0.0
    if f.potential_at == "midpoint":
        return f.potential_coeff * (f.bottom - (s.y + s2.y) / 2)
    return f.potential_coeff * (f.bottom - s2.y)

def step_action(s, s2, f: ActionFunctional) -> float:
    """
    Action of one frame from s to s2.
    Returns:
        float: T - V for the Lagrangian, 1 per frame for completion time.
    """
    kind = f.base if f.kind is ActionKind.COMPOSITE else f.kind
    if kind is ActionKind.COMPLETION_TIME:
        return 1.0
    return kinetic_energy(s, s2, f.mass) - potential_energy(s, s2, f)

def trajectory_action(traj: Trajectory, f: ActionFunctional) -> float:
    """
    Frame sum of step_action, plus the penalty when a composite functional's
    category is not met.
    """
    total = 0.0
    for s, s2 in zip(traj.states, traj.states[1:]):
        total += step_action(s, s2, f)
    if f.kind is ActionKind.COMPOSITE and not satisfies_category(traj, f.category):
        total += f.penalty_weight
    return total
