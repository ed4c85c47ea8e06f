"""
File codecs for survival curves (CSV) and mode sets (JSON)
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from boostdecay.core.exceptions import InputError
from boostdecay.models.modes import ExpMode, ExpModeSet, SurvivalCurve
from boostdecay.utils.helpers import format_float, open_output

logger = logging.getLogger(__name__)


def _read_text(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}", error_code="unreadable_file") from e


def read_curve_csv(path: Path, column: str = "value", values: str = "modulus") -> SurvivalCurve:
    """
    Read a SurvivalCurve from CSV

    Lines starting with ``#`` are comments. The header must name ``t`` and
    ``column``.

    Args:
        path: CSV file
        column: Name of the value column
        values: ``modulus`` (sqrt P0) or ``probability`` (P0, square-rooted here)

    Returns:
        Curve of modulus samples
    """
    if values not in ("modulus", "probability"):
        raise InputError(f"values must be 'modulus' or 'probability', got {values!r}")
    lines = [line for line in _read_text(path).splitlines() if line.strip() and not line.lstrip().startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    fields = [name.strip() for name in (reader.fieldnames or [])]
    if "t" not in fields or column not in fields:
        raise InputError(
            f"{path}: CSV header must contain 't' and '{column}', got {fields}",
            error_code="bad_header",
        )
    reader.fieldnames = fields

    times: List[float] = []
    samples: List[float] = []
    for row_number, row in enumerate(reader, start=2):
        try:
            t = float(row["t"])
            v = float(row[column])
        except (TypeError, ValueError) as e:
            raise InputError(f"{path}: row {row_number} is not numeric: {row}", error_code="bad_row") from e
        if values == "probability":
            if v < 0.0:
                raise InputError(f"{path}: row {row_number} has a negative probability")
            v = math.sqrt(v)
        times.append(t)
        samples.append(v)

    logger.debug(f"Read {len(times)} samples from {path}")
    return SurvivalCurve.from_arrays(times, samples)


def write_curve_csv(path: Optional[Path], curve: SurvivalCurve, comments: Optional[List[str]] = None) -> None:
    """Write a SurvivalCurve as ``t,value`` CSV"""
    with open_output(path) as handle:
        for line in comments or []:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "value"])
        for t, v in zip(curve.t, curve.value):
            writer.writerow([format_float(t), format_float(v)])


def modeset_to_dict(modeset: ExpModeSet, M: Optional[float] = None) -> Dict[str, Any]:
    return {"M": M, "modes": [{"w": m.w, "gamma": m.gamma} for m in modeset.modes]}


def read_modeset_json(path: Path) -> Tuple[ExpModeSet, Optional[float]]:
    """
    Read ``{"M": <real or null>, "modes": [{"w": .., "gamma": ..}, ...]}``

    Returns:
        Tuple of (mode set, M or None)
    """
    try:
        document = json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}", error_code="bad_json") from e
    if not isinstance(document, dict) or not isinstance(document.get("modes"), list):
        raise InputError(f"{path}: expected an object with a 'modes' list", error_code="bad_json")
    try:
        modes = [ExpMode(w=float(m["w"]), gamma=float(m["gamma"])) for m in document["modes"]]
        M = document.get("M")
        M = None if M is None else float(M)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: malformed mode entry: {e}", error_code="bad_json") from e
    modes.sort(key=lambda m: m.gamma)
    return ExpModeSet(modes=modes), M


def write_modeset_json(
    path: Optional[Path],
    modeset: ExpModeSet,
    M: Optional[float] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    document = modeset_to_dict(modeset, M)
    if extra:
        document.update(extra)
    with open_output(path) as handle:
        json.dump(document, handle, indent=2, sort_keys=False)
        handle.write("\n")
