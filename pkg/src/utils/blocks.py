"""
Elementary signal blocks shared by the unit models and the controllers.
All functions accept floats or numpy arrays of equal shape.
"""
import math

import numpy as np

from . import ArrayLike


def lag_coefficient(dt_s: float, time_constant_s: float) -> float:
    """Zero-order-hold pole of 1/(T s + 1); a non-positive T bypasses the lag."""
    if time_constant_s <= 0:
        return 0.0
    return math.exp(-dt_s / time_constant_s)


def first_order_lag(state: ArrayLike, target: ArrayLike, dt_s: float, time_constant_s: float) -> ArrayLike:
    alpha = lag_coefficient(dt_s, time_constant_s)
    return alpha * state + (1.0 - alpha) * target


def saturate(value: ArrayLike, limit: float) -> ArrayLike:
    return np.clip(value, -limit, limit)


def deadband(value: ArrayLike, width: float) -> ArrayLike:
    return np.where(np.abs(value) < width, 0.0, value)
