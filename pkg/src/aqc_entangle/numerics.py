"""Dense symmetric eigensolver, gauge fixing and 1-D quadrature/search helpers.

Everything here operates on plain numpy arrays.  The eigensolver accepts a
stack of matrices ``(..., n, n)`` and diagonalizes all of them at once; each
matrix follows exactly the rotation sequence it would follow on its own, so
results do not depend on how a grid is chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

SYMMETRY_TOL = 1e-14
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100
GOLDEN_TOL = 1e-10

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NumericalError(RuntimeError):
    """Base class for failures of the numerical kernels."""


class SymmetryError(NumericalError, ValueError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and matching orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray


def _offdiag_norm(a: np.ndarray) -> np.ndarray:
    # a has shape (n, n, B)
    off = a.copy()
    idx = np.arange(a.shape[0])
    off[idx, idx] = 0.0
    return np.sqrt(np.sum(off * off, axis=(0, 1)))


def jacobi_eigensystem(a, max_sweeps: int = MAX_SWEEPS, tol: float = OFFDIAG_TOL) -> EigenSystem:
    """Cyclic Jacobi diagonalization of a real symmetric matrix (or a stack of them).

    Sweeps stop for a given matrix once its off-diagonal Frobenius norm is at
    most ``tol * ||A||_F``.  Eigenvalues come back in ascending order, ties
    broken by original column index.
    """
    a = np.array(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    n = a.shape[-1]
    if n < 1:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")

    scale = np.maximum(1.0, np.max(np.abs(a), axis=(-2, -1)))
    asym = np.max(np.abs(a - np.swapaxes(a, -1, -2)), axis=(-2, -1))
    if np.any(asym > SYMMETRY_TOL * scale):
        raise SymmetryError(f"matrix is not symmetric (max |A - A^T| = {np.max(asym):.3e})")

    batch_shape = a.shape[:-2]
    # batch axis last: every rotation then works on contiguous (n, B) slabs
    a = np.ascontiguousarray(np.moveaxis(a.reshape((-1, n, n)), 0, -1))
    v = np.zeros_like(a)
    v[np.arange(n), np.arange(n)] = 1.0
    norm = np.sqrt(np.sum(a * a, axis=(0, 1)))
    limit = tol * np.where(norm > 0.0, norm, 1.0)

    for _ in range(max_sweeps):
        active = _offdiag_norm(a) > limit
        if not np.any(active):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                rotate = active & (apq != 0.0)
                if not np.any(rotate):
                    continue
                safe_apq = np.where(rotate, apq, 1.0)
                theta = (a[q, q] - a[p, p]) / (2.0 * safe_apq)
                t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                c = np.where(rotate, c, 1.0)
                s = np.where(rotate, s, 0.0)

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p].copy()
                row_q = a[q].copy()
                a[p] = c * row_p - s * row_q
                a[q] = s * row_p + c * row_q
                a[p, q] = np.where(rotate, 0.0, a[p, q])
                a[q, p] = np.where(rotate, 0.0, a[q, p])

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        residual = _offdiag_norm(a)
        if np.any(residual > limit):
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps", float(np.max(residual))
            )

    a = np.moveaxis(a, -1, 0)
    v = np.moveaxis(v, -1, 0)
    values = np.diagonal(a, axis1=-2, axis2=-1).copy()
    order = np.argsort(values, axis=-1, kind="stable")
    values = np.take_along_axis(values, order, axis=-1)
    vectors = np.take_along_axis(v, order[:, None, :], axis=-1)
    return EigenSystem(values.reshape(batch_shape + (n,)), vectors.reshape(batch_shape + (n, n)))


def fix_gauge(reference, v) -> np.ndarray:
    """Choose the sign of ``v``.

    With a reference, the result has non-negative overlap with it.  Without
    one, the largest-magnitude component (lowest index on ties) is made
    positive.
    """
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("cannot fix the gauge of a zero vector")
    if reference is not None:
        return -v if float(np.dot(reference, v)) < 0.0 else v.copy()
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0.0 else v.copy()


def cumulative_trapezoid(xs, ys) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-D arrays of equal length")
    if xs.size and np.any(np.diff(xs) <= 0.0):
        raise ValueError("grid must be strictly ascending")
    out = np.zeros_like(ys)
    if xs.size > 1:
        out[1:] = np.cumsum(0.5 * np.diff(xs) * (ys[1:] + ys[:-1]))
    return out


def refine_extremum(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    mode: str = "max",
    tol: float = GOLDEN_TOL,
) -> tuple[float, float]:
    """Golden-section search for an interior extremum of ``f`` on ``bracket``."""
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"invalid bracket ({lo}, {hi})")
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    sign = 1.0 if mode == "max" else -1.0

    def g(x: float) -> float:
        return sign * f(x)

    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    gc, gd = g(c), g(d)
    while hi - lo > tol:
        if gc >= gd:
            hi, d, gd = d, c, gc
            c = hi - _INV_PHI * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + _INV_PHI * (hi - lo)
            gd = g(d)
    x = 0.5 * (lo + hi)
    return x, f(x)
