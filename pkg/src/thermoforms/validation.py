"""Input validation helpers for the estimator layer and the CLI."""

from __future__ import annotations

import numpy as np

__all__ = ["check_points", "check_positive_scalar"]


def check_points(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite float array of shape (n_points, 2)."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1 and arr.shape == (2,):
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n_points, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_positive_scalar(value, name: str) -> float:
    value = float(value)
    if not value > 0.0 or not np.isfinite(value):
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value
