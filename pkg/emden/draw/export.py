"""Write profiles as CSV files and reports as JSON files."""

import csv
import json
import math
import os

from typing import (
    Any,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from ..debug import Debug

from ..util import log_info

######################################################################

# Encoding of the files written.
ENCODING = "utf-8"

# A column of a CSV file: its header and its values (None if undefined).
Column = Tuple[str, Sequence[Optional[float]]]

def format_number(value: Optional[float]) -> str:
    """Print with 17 significant digits, enough to read back exactly."""
    if value is None:
        return ""
    return f"{value:.17g}"

def write_columns(path: str, columns: Sequence[Column]) -> None:
    """Write equally long columns to a CSV file with a header row."""
    lengths = {len(values) for _, values in columns}
    if len(lengths) != 1:
        raise ValueError(f"columns of unequal lengths {sorted(lengths)}")
    with open(path, 'w', encoding=ENCODING, newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow([name for name, _ in columns])
        for row in zip(*(values for _, values in columns)):
            writer.writerow([format_number(value) for value in row])
    if Debug.is_enabled():
        log_info(f"Wrote '{path}'")

def _floats(values: Any) -> Sequence[Optional[float]]:
    """Nodal values as a list of floats."""
    return np.asarray(values, dtype=float).tolist()

def write_solution_csv(path: str, r: Any, u: Any, v: Any) -> None:
    """Solution profile with the barrier: columns r, u, v."""
    write_columns(path, [
        ('r', _floats(r)),
        ('u', _floats(u)),
        ('v', _floats(v)),
    ])

def write_barrier_csv(path: str, r: Any, w: Any, v: Any, margins: Any) -> None:
    """Barrier with its supersolution margins: columns r, w, v, margin.

    The margin is not defined on the sphere and is left empty there.

    """
    margin_column: list = _floats(margins)
    margin_column = margin_column + [None] * (len(_floats(r)) - len(margin_column))
    write_columns(path, [
        ('r', _floats(r)),
        ('w', _floats(w)),
        ('v', _floats(v)),
        ('margin', margin_column),
    ])

def write_eigen_csv(path: str, r: Any, phi1: Any) -> None:
    """First eigenfunction: columns r, phi1."""
    write_columns(path, [
        ('r', _floats(r)),
        ('phi1', _floats(phi1)),
    ])

######################################################################

def _json_safe(data: Any) -> Any:
    """Replace non-finite floats by None, recursively."""
    if isinstance(data, float):
        return data if math.isfinite(data) else None
    if isinstance(data, dict):
        return {key: _json_safe(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_json_safe(value) for value in data]
    if isinstance(data, np.generic):
        return _json_safe(data.item())
    return data

def write_json(path: str, data: Any) -> None:
    """Write a report as indented JSON."""
    with open(path, 'w', encoding=ENCODING) as stream:
        json.dump(_json_safe(data), stream, indent=2, allow_nan=False)
        stream.write("\n")
    if Debug.is_enabled():
        log_info(f"Wrote '{path}'")

def output_path(directory: str, name: str) -> str:
    """Path of an output file, creating the directory if needed."""
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)
