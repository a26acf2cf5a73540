"""Utility functions."""

import sys

from typing import Sequence

######################################################################

def class_str(obj: object, content: object) -> str:
    """Helper for representation methods."""
    cls = obj.__class__.__name__
    return f"{cls}({content})"

def grid_str(radius: float, interior: int) -> str:
    """Return a string that shows the dimensions of a radial grid."""
    return f"R={radius}, M={interior}"

def float_list_str(values: Sequence[float]) -> str:
    """Return a compact string for a short sequence of floats."""
    return "[" + ", ".join(f"{value:.6g}" for value in values) + "]"

######################################################################

def log_debug(msg: str) -> None:
    """Print a debugging message to standard error."""
    print("Debug: " + msg, file=sys.stderr)

def log_info(msg: str) -> None:
    """Print an informational message to standard error."""
    print("Info: " + msg, file=sys.stderr)

def log_warning(msg: str) -> None:
    """Print a warning message to standard error."""
    print("Warning: " + msg, file=sys.stderr)

def log_error(msg: str) -> None:
    """Print an error message to standard error."""
    print("Error: " + msg, file=sys.stderr)
