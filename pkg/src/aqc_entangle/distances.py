"""Distances between an instantaneous state and the target state."""

from __future__ import annotations

import numpy as np


def _pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    return a, b


def fidelity_distance(a, b):
    """``1 - |<a|b>|``; zero when the states agree up to a global sign.

    Broadcasts over leading axes.
    """
    a, b = _pair(a, b)
    return np.maximum(0.0, 1.0 - np.abs(np.sum(a * b, axis=-1)))


def geometric_separation(a, b):
    """``sum_i | |a_i| - |b_i| |``, the 1-norm distance of the magnitude profiles."""
    a, b = _pair(a, b)
    return np.sum(np.abs(np.abs(a) - np.abs(b)), axis=-1)
