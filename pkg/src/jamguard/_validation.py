"""Input validation helpers shared by the estimator API."""

import numpy as np


def check_pilot_tensor(x, name: str = "X") -> np.ndarray:
    """Validate a (pilots, antennas, subcarriers) complex observation stack."""
    arr = np.asarray(x)
    if arr.ndim != 3:
        raise ValueError(
            f"{name} must be 3-D (pilots, antennas, subcarriers); got shape {arr.shape}"
        )
    if min(arr.shape) < 1:
        raise ValueError(f"{name} has an empty axis: shape {arr.shape}")
    return np.ascontiguousarray(arr, dtype=complex)


def check_positive(value, name: str) -> float:
    value = float(value)
    if not value > 0.0:
        raise ValueError(f"{name} must be positive; got {value}")
    return value


def check_probability(value, name: str) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1); got {value}")
    return value
