# fptclock/storage/gridfile.py
"""
CSV grid files and JSON documents for the command-line surface.

Grids are UTF-8 CSV with a header row and a fixed column layout per file kind
(see GRID_LAYOUTS). Numbers are written with 17 significant digits so every
float round-trips exactly.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from fptclock.constants import GRID_LAYOUTS
from fptclock.errors import GridFormatError
from fptclock.types import RunConfig

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

NUMBER_FORMAT = "%.17g"


@dataclass(frozen=True)
class GridTable:
    """Parsed grid: header plus one float column per header name."""
    kind: str
    columns: Tuple[str, ...]
    data: np.ndarray

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def has(self, name: str) -> bool:
        return name in self.columns

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise GridFormatError(f"{self.kind} file has no '{name}' column")
        return self.data[:, self.columns.index(name)]

# ========== Reading ==========

def read_grid(path: PathLike, kind: str) -> GridTable:
    """
    Parse a grid file of the given kind.

    Raises GridFormatError naming the offending line for an unknown header,
    a wrong cell count, a non-numeric or non-finite cell, or a first column
    that does not increase (strictly, except for crossing times).
    """
    if kind not in GRID_LAYOUTS:
        raise GridFormatError(f"unknown grid kind '{kind}'")
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [(n, row) for n, row in enumerate(csv.reader(fh), start=1)]
    except OSError as e:
        raise GridFormatError(f"cannot read {kind} file {path}: {e}") from e
    except (UnicodeDecodeError, csv.Error) as e:
        raise GridFormatError(f"{path}: not a UTF-8 CSV file ({e})") from e

    rows = [(n, row) for n, row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise GridFormatError(f"{path}: empty {kind} file")

    header_line, header = rows[0]
    columns = tuple(cell.strip() for cell in header)
    if columns not in GRID_LAYOUTS[kind]:
        allowed = " | ".join(",".join(layout) for layout in GRID_LAYOUTS[kind])
        raise GridFormatError(
            f"{path}:{header_line}: header '{','.join(columns)}' is not a {kind} layout ({allowed})"
        )
    if len(rows) == 1:
        raise GridFormatError(f"{path}: {kind} file has a header but no rows")

    data = np.empty((len(rows) - 1, len(columns)))
    for i, (line, row) in enumerate(rows[1:]):
        if len(row) != len(columns):
            raise GridFormatError(f"{path}:{line}: expected {len(columns)} cells, got {len(row)}")
        for j, cell in enumerate(row):
            try:
                value = float(cell.strip())
            except ValueError:
                raise GridFormatError(f"{path}:{line}: '{cell}' is not a number")
            if not math.isfinite(value):
                raise GridFormatError(f"{path}:{line}: '{cell}' is not finite")
            data[i, j] = value

    first = data[:, 0]
    steps = np.diff(first)
    bad = np.flatnonzero(steps < 0) if kind == "crossings" else np.flatnonzero(steps <= 0)
    if bad.size:
        line = rows[int(bad[0]) + 2][0]
        order = "nondecreasing" if kind == "crossings" else "strictly increasing"
        raise GridFormatError(f"{path}:{line}: column '{columns[0]}' must be {order}")

    logger.debug(f"read {len(data)} row(s) of {kind} from {path}")
    return GridTable(kind=kind, columns=columns, data=data)

# ========== Writing ==========

def write_grid(path: PathLike, columns: Sequence[str], *values: Sequence[float]) -> Path:
    """Write equal-length columns under the given header."""
    if len(columns) != len(values):
        raise ValueError("one value sequence per column is required")
    arrays = [np.asarray(v, dtype=float).ravel() for v in values]
    if len({a.size for a in arrays}) > 1:
        raise ValueError("columns must have equal length")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in zip(*arrays):
            writer.writerow([NUMBER_FORMAT % x for x in row])
    logger.info(f"wrote {arrays[0].size if arrays else 0} row(s) to {path}")
    return path


def write_json(path: PathLike, payload: Union[BaseModel, Dict[str, Any], list]) -> Path:
    """Sorted keys, indent 2, trailing newline; non-finite floats become null."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_finite_or_null(payload), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info(f"wrote {path}")
    return path


def _finite_or_null(obj: Any) -> Any:
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite_or_null(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_or_null(v) for v in obj]
    return obj


def read_run_config(path: PathLike) -> RunConfig:
    """Load and validate a JSON run configuration; unknown keys are rejected."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise GridFormatError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise GridFormatError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e
    if not isinstance(raw, dict):
        raise GridFormatError(f"{path}: run configuration must be a JSON object")
    return RunConfig.model_validate(raw)
