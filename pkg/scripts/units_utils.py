"""
units_utils.py

Physical quantities, unit conversions and the error metric shared by all
TactileSensePro modules. Quantities are plain 64-bit floats (or float arrays);
the aliases below only document the unit a value carries.

Author: Satvik Praveen
Project: TactileSensePro
"""

from typing import NewType, Sequence, Union

import numpy as np

from .exceptions import DomainError, UsageError

Force = NewType("Force", float)            # newtons
GramWeight = NewType("GramWeight", float)  # gram-weight
Voltage = NewType("Voltage", float)        # volts
Resistance = NewType("Resistance", float)  # ohms

ArrayLike = Union[float, Sequence[float], np.ndarray]

# 1 gw = 1 g × 9.8 m/s² (100 gw → 0.98 N)
GRAVITY = 9.8
NEWTONS_PER_GW = GRAVITY / 1000.0


# ✅ Validation helpers
def check_finite(value: ArrayLike, name: str = "value") -> np.ndarray:
    """Returns ``value`` as a float array, raising DomainError on NaN/inf."""
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"❌ {name} must be finite, got {value!r}")
    return arr


def check_non_negative(value: ArrayLike, name: str = "value") -> np.ndarray:
    """Returns ``value`` as a float array, raising DomainError if any entry < 0."""
    arr = check_finite(value, name)
    if np.any(arr < 0):
        raise DomainError(f"❌ {name} must be non-negative, got {value!r}")
    return arr


def _scalar_or_array(arr: np.ndarray):
    return float(arr) if arr.ndim == 0 else arr


# ✅ Conversions
def gw_to_newtons(w: ArrayLike):
    """
    Convert gram-weight to newtons.

    Parameters
    ----------
    w : float or array-like
        Gram-weight, must be >= 0.

    Returns
    -------
    float or np.ndarray
        Force in newtons (``w * 0.0098``).
    """
    arr = check_non_negative(w, "gram-weight")
    return _scalar_or_array(arr * NEWTONS_PER_GW)


def newtons_to_gw(f: ArrayLike):
    """Inverse of :func:`gw_to_newtons`."""
    arr = check_non_negative(f, "force")
    return _scalar_or_array(arr / NEWTONS_PER_GW)


# ✅ Error metric
def rmse(predicted: ArrayLike, truth: ArrayLike) -> float:
    """
    Root-mean-square error between two equally long force lists.

    Raises
    ------
    UsageError
        If the lists are empty or their lengths differ.
    """
    p = np.atleast_1d(np.asarray(predicted, dtype=np.float64))
    t = np.atleast_1d(np.asarray(truth, dtype=np.float64))
    if p.shape != t.shape:
        raise UsageError(
            f"❌ rmse needs equal lengths, got {p.size} predictions and {t.size} truths"
        )
    if p.size == 0:
        raise UsageError("❌ rmse of an empty list is undefined")
    return float(np.sqrt(np.mean((p - t) ** 2)))
