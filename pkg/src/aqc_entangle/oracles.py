"""Brute-force references kept independent of the production solvers."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize


def _direction(angles: np.ndarray) -> np.ndarray:
    out = np.ones(1)
    for a in angles:
        out = np.kron(out, np.array([math.cos(a), math.sin(a)]))
    return out


def grid_overlap(state, step: float = 1e-2, refine: bool = True) -> float:
    """Max |<c|u>| over real product directions by dense angle grid (+ Nelder-Mead polish).

    Angles cover [0, pi) per qubit, which is enough since flipping a factor
    only flips the overlap sign.  Supports two and three qubits.
    """
    c = np.asarray(state, dtype=float)
    n = int(round(math.log2(c.size)))
    if n not in (2, 3):
        raise ValueError("grid oracle supports 2 or 3 qubits")
    grid = np.arange(0.0, math.pi, step)
    u = np.stack([np.cos(grid), np.sin(grid)], axis=1)  # (G, 2)
    t = c.reshape((2,) * n)
    if n == 2:
        vals = np.abs(u @ t @ u.T)
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        best, start = float(vals[i, j]), np.array([grid[i], grid[j]])
    else:
        tb = np.einsum("ijk,bj->ibk", t, u)  # contract qubit 1
        best, start = -1.0, None
        for lo in range(0, grid.size, 64):
            ua = u[lo : lo + 64]
            vals = np.abs(np.einsum("ai,ibk,ck->abc", ua, tb, u))
            k = np.argmax(vals)
            if vals.flat[k] > best:
                a, b, cc = np.unravel_index(k, vals.shape)
                best, start = float(vals.flat[k]), np.array([grid[lo + a], grid[b], grid[cc]])
    if not refine:
        return best
    res = minimize(
        lambda x: -abs(float(c @ _direction(x))),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 20000},
    )
    return max(best, -float(res.fun))


def characteristic_roots(a) -> np.ndarray:
    """Eigenvalues of a 2x2 or 3x3 symmetric matrix from its characteristic polynomial."""
    a = np.asarray(a, dtype=float)
    if a.shape == (2, 2):
        tr = a[0, 0] + a[1, 1]
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        root = math.sqrt(max(0.0, tr * tr / 4 - det))
        return np.array([tr / 2 - root, tr / 2 + root])
    if a.shape == (3, 3):
        # trigonometric solution of the depressed cubic (real symmetric => three real roots)
        q = np.trace(a) / 3.0
        b = a - q * np.eye(3)
        p = math.sqrt(np.sum(b * b) / 6.0)
        if p == 0.0:
            return np.full(3, q)
        r = np.linalg.det(b / p) / 2.0
        phi = math.acos(min(1.0, max(-1.0, r))) / 3.0
        e1 = q + 2 * p * math.cos(phi)
        e3 = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
        return np.sort([e1, 3 * q - e1 - e3, e3])
    raise ValueError("only 2x2 and 3x3 supported")


def two_level_search(n_qubits: int, s: float) -> tuple[float, float]:
    """Gap and |<E-|dH/ds|E+>| for uniform-start search, from the 2x2 problem on span{|m>, |m_perp>}."""
    dim = 2**n_qubits
    ov = 1.0 / math.sqrt(dim)
    # orthonormal basis: |m>, |r> = (psi0 - ov |m>)/sqrt(1-ov^2)
    p0 = np.array([ov, math.sqrt(1 - ov * ov)])
    p1 = np.array([1.0, 0.0])
    h = (1 - s) * (np.eye(2) - np.outer(p0, p0)) + s * (np.eye(2) - np.outer(p1, p1))
    dh = np.outer(p0, p0) - np.outer(p1, p1)
    tr = h[0, 0] + h[1, 1]
    det = h[0, 0] * h[1, 1] - h[0, 1] ** 2
    root = math.sqrt(tr * tr / 4 - det)
    lo = tr / 2 - root
    if abs(h[0, 1]) > 0:
        v = np.array([h[0, 1], lo - h[0, 0]])
    else:
        v = np.array([1.0, 0.0]) if h[0, 0] <= h[1, 1] else np.array([0.0, 1.0])
    v /= np.linalg.norm(v)
    w = np.array([-v[1], v[0]])
    return 2 * root, abs(float(v @ dh @ w))
