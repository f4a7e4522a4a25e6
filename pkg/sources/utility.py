import platform
from contextlib import contextmanager
from time import perf_counter

from colorama import just_fix_windows_console
from termcolor import colored

just_fix_windows_console()

def get_color_map() -> dict:
    color_map = {
        "success": "green",
        "failure": "red",
        "status": "light_green",
        "warning": "yellow",
        "output": "cyan",
        "info": "cyan"
    }
    if platform.system().lower() == "windows":
        color_map["info"] = "black"
    return color_map

def pretty_print(text, color="info", no_newline=False) -> None:
    """
    Print text to the console in one of the color map colors.
    Unknown colors fall back to "info". Summary lines meant for scripts
    are printed plain, never through here.
    """
    color_map = get_color_map()
    if color not in color_map:
        color = "info"
    print(colored(text, color_map[color]), end='' if no_newline else "\n")

def format_duration(frames: int, fps: int) -> str:
    """Frames as a speedrun clock, e.g. 90 frames at 60 fps -> 0:01.500."""
    if fps < 1:
        raise ValueError(f"fps must be >= 1, got {fps}")
    seconds = frames / fps
    minutes = int(seconds // 60)
    return f"{minutes}:{seconds - 60 * minutes:06.3f}"

@contextmanager
def timed(label: str, verbose: bool = True):
    """Report the wall time of the enclosed block on the console."""
    start = perf_counter()
    try:
        yield
    finally:
        if verbose:
            pretty_print(f"{label} took {perf_counter() - start:.2f} s", color="status")
