"""
Domain errors for pathrun.

Every error the simulator, the searches or the statistics can raise derives
from PathrunError, so the command line can tell domain failures (exit 1)
from usage failures (exit 2).
"""

class PathrunError(Exception):
    """
    Base class for all pathrun domain errors.
    """
    @property
    def name(self) -> str:
        return type(self).__name__

class ConfigError(PathrunError):
    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"Invalid configuration value for {key}: {reason}")

# level parsing

class NonRectangular(PathrunError):
    def __init__(self, row: int, width: int, expected: int):
        self.row = row
        self.width = width
        self.expected = expected
        super().__init__(f"Row {row} has width {width}, expected {expected}")

class UnknownChar(PathrunError):
    def __init__(self, char: str, col: int, row: int):
        self.char = char
        self.position = (col, row)
        super().__init__(f"Unknown tile character {char!r} at column {col}, row {row}")

class MissingStart(PathrunError):
    def __init__(self):
        super().__init__("Level has no start tile 'S'")

class MissingGoal(PathrunError):
    def __init__(self):
        super().__init__("Level has no goal tile 'G'")

class MultipleStarts(PathrunError):
    def __init__(self, positions: list):
        self.positions = positions
        super().__init__(f"Level has {len(positions)} start tiles: {positions}")

# simulation and search

class FrameCapExceeded(PathrunError):
    def __init__(self, frame_cap: int):
        self.frame_cap = frame_cap
        super().__init__(f"Goal not reached within {frame_cap} frames")

class Unreachable(PathrunError):
    def __init__(self, frame_cap: int):
        self.frame_cap = frame_cap
        super().__init__(f"No admissible endpoint within {frame_cap} frames")

class PathCapExceeded(PathrunError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"More than {cap} paths, instance too large for enumeration")

class StateBudgetExceeded(PathrunError):
    def __init__(self, frame: int, count: int):
        self.frame = frame
        self.count = count
        super().__init__(f"{count} reachable states at frame {frame} exceed the state budget")

# amplitudes

class ZeroField(PathrunError):
    def __init__(self, frame: int):
        self.frame = frame
        super().__init__(f"All amplitudes are zero at frame {frame}")

class NonFiniteAmplitude(PathrunError):
    def __init__(self, frame: int):
        self.frame = frame
        super().__init__(f"Amplitude overflow at frame {frame}, lower the action scale or raise hbar")

class SlitBlocked(PathrunError):
    def __init__(self, slits: tuple, reason: str):
        self.slits = slits
        super().__init__(f"Slits {slits} rejected: {reason}")

class LinearityViolated(PathrunError):
    def __init__(self, error: float, tolerance: float):
        self.error = error
        self.tolerance = tolerance
        super().__init__(f"Slit amplitudes do not add up: max error {error:.3e} above {tolerance:.1e}")

# statistics

class EmptyInput(PathrunError):
    def __init__(self, what: str = "runs"):
        super().__init__(f"No {what} given")

class NoCompletedRuns(PathrunError):
    def __init__(self, total: int):
        self.total = total
        super().__init__(f"None of the {total} runs reached the goal")
