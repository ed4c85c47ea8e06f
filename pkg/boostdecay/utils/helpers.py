"""
Helper utility functions
"""

import contextlib
import math
import sys
from pathlib import Path
from typing import IO, Iterator, Optional, Sequence

import numpy as np


def format_float(value: float) -> str:
    """Shortest round-tripping decimal for CSV/JSON output"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return repr(float(value))


def geometric_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """n points spaced geometrically over [lo, hi]"""
    return np.geomspace(lo, hi, n)


def relative_difference(value: float, reference: float) -> float:
    """|value - reference| / |reference| (absolute difference if reference is 0)"""
    if reference == 0.0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def join_warnings(kinds: Sequence[str]) -> str:
    """Warning kinds as a single CSV cell"""
    return ";".join(sorted(set(kinds)))


@contextlib.contextmanager
def open_output(path: Optional[Path]) -> Iterator[IO[str]]:
    """
    Open ``path`` for writing, or yield stdout when no path is given

    Args:
        path: Output file; parent directories are created

    Yields:
        Text stream
    """
    if path is None:
        yield sys.stdout
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        yield handle
