from typing import Optional, Union
import logging

import numpy as np

ArrayLike = Union[float, np.ndarray]


def setup_logger(name: Optional[str] = 'default', handler: logging.Handler = None,
                 level: int = logging.INFO) -> None:
    if handler is None:
        handler = logging.StreamHandler()
    fmt = logging.Formatter("{asctime} [{levelname}]: {message}", style='{')
    handler.setFormatter(fmt)
    logger = logging.getLogger(name)
    logger.addHandler(handler)
    logger.setLevel(level)


def unwrap(value: ArrayLike) -> ArrayLike:
    """Return plain floats for 0-d results so scalar callers never see numpy 0-d arrays"""
    if np.ndim(value) == 0:
        return float(value)
    return value


def require_finite(name: str, value: ArrayLike) -> None:
    if not np.all(np.isfinite(value)):
        raise ValueError(f"{name} must be finite, got {value!r}")


def require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
