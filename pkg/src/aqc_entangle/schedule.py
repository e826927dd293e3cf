"""Adiabatic profile along the schedule and the running times derived from it."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algorithms import ProblemSpec, dh_ds, hamiltonian_at
from .numerics import NumericalError, cumulative_trapezoid, fix_gauge, jacobi_eigensystem, refine_extremum

DEFAULT_EPS = 0.01
DEFAULT_GRID = 20001
MIN_GRID = 1001
DEGENERACY_TOL = 1e-13
CLUSTER_TOL = 1e-9
_CHUNK = 2048


class DegeneracyError(NumericalError):
    pass


def worker_count() -> int:
    """Thread cap from ``AQC_THREADS`` (0 or unset: one per CPU)."""
    raw = os.environ.get("AQC_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("AQC_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def diagonalize_grid(spec: ProblemSpec, s_grid: np.ndarray):
    """Eigenvalues/vectors of H(s) for every grid point (chunks may run in parallel)."""
    chunks = [s_grid[i : i + _CHUNK] for i in range(0, s_grid.size, _CHUNK)]

    def solve(chunk):
        es = jacobi_eigensystem(hamiltonian_at(spec, chunk))
        return es.values, es.vectors

    workers = min(worker_count(), len(chunks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(solve, chunks))
    else:
        parts = [solve(c) for c in chunks]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


@dataclass(frozen=True)
class AdiabaticProfile:
    spec: ProblemSpec = field(repr=False)
    s_grid: np.ndarray
    e_minus: np.ndarray
    e_plus: np.ndarray
    gap: np.ndarray
    m_abs: np.ndarray
    ground_states: np.ndarray = field(repr=False)
    excited_states: np.ndarray = field(repr=False)

    @property
    def ratio(self) -> np.ndarray:
        """|<E-|dH/ds|E+>| / gap^2 on the grid."""
        return self.m_abs / self.gap**2


@dataclass(frozen=True)
class OptimizedSchedule:
    s_grid: np.ndarray
    t_of_s: np.ndarray
    total_time: float


def _excited_vector(values, vectors, reference):
    # E+ may sit inside a degenerate cluster (the schedule endpoints); pick the
    # cluster member continuous with the neighbouring sample.
    if reference is None or values.size < 3 or values[2] - values[1] >= CLUSTER_TOL:
        return vectors[:, 1]
    members = np.nonzero(values[1:] - values[1] < CLUSTER_TOL)[0] + 1
    basis = vectors[:, members]
    proj = basis @ (basis.T @ reference)
    norm = np.linalg.norm(proj)
    if norm < 1e-8:
        return vectors[:, 1]
    return proj / norm


def adiabatic_profile(spec: ProblemSpec, grid_points: int = DEFAULT_GRID) -> AdiabaticProfile:
    if grid_points < MIN_GRID:
        raise ValueError(f"grid_points must be >= {MIN_GRID}")
    s_grid = np.linspace(0.0, 1.0, grid_points)
    values, vectors = diagonalize_grid(spec, s_grid)
    gap = values[:, 1] - values[:, 0]
    bad = np.nonzero(gap < DEGENERACY_TOL)[0]
    if bad.size:
        raise DegeneracyError(f"ground state degenerate at s={s_grid[bad[0]]:.6g}")

    ground = np.empty((grid_points, spec.dim))
    prev = None
    for k in range(grid_points):
        prev = ground[k] = fix_gauge(prev, vectors[k, :, 0])

    excited = np.empty_like(ground)
    if values.shape[1] > 2:
        clean = np.nonzero(values[:, 2] - values[:, 1] >= CLUSTER_TOL)[0]
    else:
        clean = np.arange(grid_points)
    start = int(clean[0]) if clean.size else 0
    excited[start] = fix_gauge(None, vectors[start, :, 1])
    for order in (range(start + 1, grid_points), range(start - 1, -1, -1)):
        prev = excited[start]
        for k in order:
            v = _excited_vector(values[k], vectors[k], prev)
            prev = excited[k] = fix_gauge(prev, v)

    dh = dh_ds(spec)
    m_abs = np.abs(np.einsum("ki,ij,kj->k", ground, dh, excited))
    return AdiabaticProfile(
        spec=spec,
        s_grid=s_grid,
        e_minus=values[:, 0].copy(),
        e_plus=values[:, 1].copy(),
        gap=gap,
        m_abs=m_abs,
        ground_states=ground,
        excited_states=excited,
    )


def point_ratio(spec: ProblemSpec, s: float) -> float:
    """|<E-|dH/ds|E+>| / gap^2 at a single schedule time (sign-independent)."""
    es = jacobi_eigensystem(hamiltonian_at(spec, s))
    gap = es.values[1] - es.values[0]
    m = abs(float(es.vectors[:, 0] @ dh_ds(spec) @ es.vectors[:, 1]))
    return m / gap**2


def unoptimized_runtime(profile: AdiabaticProfile, eps: float = DEFAULT_EPS) -> tuple[float, float]:
    """Global adiabatic condition: T = max_s ratio(s) / eps, grid max refined by golden section."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    ratio = profile.ratio
    k = int(np.argmax(ratio))
    s = profile.s_grid
    best_s, best = float(s[k]), float(ratio[k])
    lo, hi = s[max(k - 1, 0)], s[min(k + 1, s.size - 1)]
    if 0 < k < s.size - 1:
        s_ref, r_ref = refine_extremum(lambda x: point_ratio(profile.spec, x), (lo, hi), "max")
        if r_ref > best:
            best_s, best = s_ref, r_ref
    return float(best / eps), float(best_s)


def optimized_schedule(profile: AdiabaticProfile, eps: float = DEFAULT_EPS) -> OptimizedSchedule:
    """Local adiabatic condition dt = ds * ratio(s) / eps, integrated along the grid."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = cumulative_trapezoid(profile.s_grid, profile.ratio / eps)
    return OptimizedSchedule(profile.s_grid, t, float(t[-1]))


def optimized_runtime(profile: AdiabaticProfile, eps: float = DEFAULT_EPS) -> float:
    return optimized_schedule(profile, eps).total_time


def printed_trun_runtime(profile: AdiabaticProfile, eps: float = DEFAULT_EPS) -> float:
    """Diagnostic: integrate eps * gap^2 / |m|, the reciprocal orientation of the local condition.

    Diverges when the matrix element vanishes anywhere on the grid.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = eps * profile.gap**2 / profile.m_abs
    if not np.all(np.isfinite(integrand)):
        return float("inf")
    return float(cumulative_trapezoid(profile.s_grid, integrand)[-1])
