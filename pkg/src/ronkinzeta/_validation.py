"""Small input-validation helpers used at every public entry point."""

import math
from numbers import Integral

import numpy as np

from .errors import ConfigError, DimensionError


def check_int(value, name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_real(value, name):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return out


def check_shift(shift):
    s = str(shift).upper()
    if s not in ("M", "F"):
        raise ConfigError(f"shift must be 'M' or 'F', got {shift!r}")
    return s


def as_real_vector(x, d, name="k"):
    """Return ``x`` as a float array of length ``d``; scalars allowed when d == 1."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.shape[0] != d:
        raise DimensionError(f"{name} must have length {d}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} must be finite")
    return arr


def as_point_array(x, d, name="x"):
    """Coerce to shape (n, d); a single point becomes (1, d)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 and d == 1:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.shape[0] == d else arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise DimensionError(f"{name} must have {d} columns, got shape {arr.shape}")
    return arr
