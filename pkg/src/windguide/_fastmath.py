"""Elementwise helpers that take the ``math`` fast path for Python/NumPy scalars.

NumPy ufuncs cost roughly a microsecond per call on scalars, which dominates
single-trajectory integration at 50 Hz.
"""

import math

import numpy as np


def sin(x):
    return math.sin(x) if isinstance(x, float) else np.sin(x)


def cos(x):
    return math.cos(x) if isinstance(x, float) else np.cos(x)


def any_true(mask) -> bool:
    return bool(mask.any()) if isinstance(mask, np.ndarray) else bool(mask)
