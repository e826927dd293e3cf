"""Diagnostic time series along the schedule and per-preset runtime tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .algorithms import COLORS, Algorithm, ProblemSpec, make_spec
from .distances import fidelity_distance, geometric_separation
from .entanglement import (
    DEFAULT_RESTARTS,
    alternating_batch,
    closest_product_2q_analytic,
    entropy_of,
    select_best,
    start_angles,
)
from .numerics import NumericalError
from .schedule import (
    DEFAULT_EPS,
    DEFAULT_GRID,
    AdiabaticProfile,
    adiabatic_profile,
    optimized_runtime,
    optimized_schedule,
    unoptimized_runtime,
)

B1_WINDOW = 0.15
C1_MIN_SPEARMAN = 0.8


def trace_header(n_qubits: int) -> list[str]:
    return (
        ["s", "t_opt", "e_minus", "e_plus", "gap", "m_abs"]
        + [f"entropy_q{q}" for q in range(n_qubits)]
        + ["entropy_max", "d_norm", "d_unnorm", "d_hs", "F", "G", "dF_ds"]
    )


@dataclass
class Trace:
    """Column-oriented trace; ``columns`` follows ``trace_header`` order."""

    spec: ProblemSpec = field(repr=False)
    eps: float
    columns: dict[str, np.ndarray] = field(repr=False)

    @property
    def header(self) -> list[str]:
        return list(self.columns)

    def __len__(self) -> int:
        return self.columns["s"].size

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def row(self, i: int) -> dict[str, float]:
        return {k: float(v[i]) for k, v in self.columns.items()}

    def as_array(self) -> np.ndarray:
        return np.column_stack([self.columns[k] for k in self.header])


def geometric_overlaps(states: np.ndarray, restarts: int = DEFAULT_RESTARTS):
    """Maximal product-state overlap for every row of ``states``, plus a per-row success mask."""
    n = int(round(math.log2(states.shape[1])))
    if n == 2:
        lam = np.array([closest_product_2q_analytic(c).overlap for c in states])
        return lam, np.ones(lam.size, dtype=bool)
    units, lam, conv = alternating_batch(states, start_angles(states, n, restarts))
    best, ok = select_best(units, lam, conv)
    return np.minimum(lam[np.arange(states.shape[0]), best], 1.0), ok


def run_trace(
    spec: ProblemSpec,
    eps: float = DEFAULT_EPS,
    grid_points: int = DEFAULT_GRID,
    restarts: int = DEFAULT_RESTARTS,
    profile: AdiabaticProfile | None = None,
) -> Trace:
    if profile is None:
        profile = adiabatic_profile(spec, grid_points)
    s = profile.s_grid
    ground = profile.ground_states
    sched = optimized_schedule(profile, eps)

    cols: dict[str, np.ndarray] = {
        "s": s,
        "t_opt": sched.t_of_s,
        "e_minus": profile.e_minus,
        "e_plus": profile.e_plus,
        "gap": profile.gap,
        "m_abs": profile.m_abs,
    }
    ent = [entropy_of(ground, q) for q in range(spec.n_qubits)]
    for q, e in enumerate(ent):
        cols[f"entropy_q{q}"] = e
    cols["entropy_max"] = np.max(ent, axis=0)

    lam, ok = geometric_overlaps(ground, restarts)
    if not np.all(ok):
        raise NumericalError(f"closest-product solver did not converge at s={s[int(np.argmin(ok))]:.6g}")
    cols["d_norm"] = 2.0 - 2.0 * lam
    cols["d_unnorm"] = 1.0 - lam**2
    cols["d_hs"] = np.sqrt(np.clip(2.0 - 2.0 * lam**2, 0.0, None))

    target = ground[-1]
    cols["F"] = fidelity_distance(ground, target)
    cols["G"] = geometric_separation(ground, target)
    cols["dF_ds"] = np.gradient(cols["F"], s)
    return Trace(spec=spec, eps=eps, columns=cols)


@dataclass(frozen=True)
class RuntimeRow:
    preset: str
    t_unoptimized: float
    t_optimized: float
    initial_f: float
    initial_g: float
    max_entropy: float
    s_star: float


@dataclass
class RuntimeTable:
    algorithm: Algorithm
    n_qubits: int
    eps: float
    alpha: int
    rows: list[RuntimeRow]
    profiles: dict[str, AdiabaticProfile] = field(default_factory=dict, repr=False)

    def row(self, preset: str) -> RuntimeRow:
        for r in self.rows:
            if r.preset == preset:
                return r
        raise KeyError(preset)

    def to_dict(self) -> dict:
        return {
            "schema_version": "1",
            "algorithm": self.algorithm.value,
            "n_qubits": self.n_qubits,
            "alpha": self.alpha,
            "epsilon": self.eps,
            "rows": [
                {
                    "preset": r.preset,
                    "t_unoptimized": r.t_unoptimized,
                    "t_optimized": r.t_optimized,
                    "initial_f": r.initial_f,
                    "initial_g": r.initial_g,
                    "max_entropy": r.max_entropy,
                    "s_star": r.s_star,
                }
                for r in self.rows
            ],
        }


def runtime_table(
    algorithm,
    n_qubits: int,
    presets=COLORS,
    eps: float = DEFAULT_EPS,
    alpha: int = 0,
    grid_points: int = DEFAULT_GRID,
) -> RuntimeTable:
    presets = list(presets)
    if not presets:
        raise ValueError("need at least one preset")
    algorithm = Algorithm(algorithm)
    rows, profiles = [], {}
    for name in presets:
        spec = make_spec(algorithm, n_qubits, name, alpha=alpha)
        prof = adiabatic_profile(spec, grid_points)
        t_un, s_star = unoptimized_runtime(prof, eps)
        ground = prof.ground_states
        target = ground[-1]
        ent = np.max([entropy_of(ground, q) for q in range(n_qubits)], axis=0)
        rows.append(
            RuntimeRow(
                preset=name,
                t_unoptimized=float(t_un),
                t_optimized=optimized_runtime(prof, eps),
                initial_f=float(fidelity_distance(ground[0], target)),
                initial_g=float(geometric_separation(ground[0], target)),
                max_entropy=float(np.max(ent)),
                s_star=float(s_star),
            )
        )
        profiles[name] = prof
    rows.sort(key=lambda r: (-r.t_unoptimized, presets.index(r.preset)))
    return RuntimeTable(algorithm, n_qubits, eps, alpha, rows, profiles)


def _tie_rounded(v) -> np.ndarray:
    # values equal to 12 significant digits rank as ties (rounding noise of ~1e-16)
    v = np.asarray(v, dtype=float)
    return np.array([float(f"{x:.12g}") for x in v])


def spearman(x, y) -> float | None:
    """Spearman rank correlation; None when undefined (fewer than 2 points or a constant input)."""
    x = _tie_rounded(x)
    y = _tie_rounded(y)
    if x.size < 2 or np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return None
    rx, ry = rankdata(x), rankdata(y)
    return float(np.corrcoef(rx, ry)[0, 1])


def half_max_time(trace: Trace) -> float:
    """Optimized time at which entropy_max first reaches half of its maximum (linear interpolation)."""
    e = trace["entropy_max"]
    t = trace["t_opt"]
    target = 0.5 * float(np.max(e))
    if target <= 0.0:
        return float("nan")
    k = int(np.argmax(e >= target))
    if k == 0:
        return float(t[0])
    frac = (target - e[k - 1]) / (e[k] - e[k - 1])
    return float(t[k - 1] + frac * (t[k] - t[k - 1]))


@dataclass
class CorrelationReport:
    rank_correlations: dict[str, float | None]
    entropy_peak_s: dict[str, float]
    fidelity_rate_peak_s: dict[str, float]
    half_max_entropy_time: dict[str, float]
    half_max_vs_t_opt: float | None

    def peak_offsets(self) -> dict[str, float]:
        return {k: abs(self.entropy_peak_s[k] - self.fidelity_rate_peak_s[k]) for k in self.entropy_peak_s}

    def to_dict(self) -> dict:
        return {
            "schema_version": "1",
            "rank_correlations": self.rank_correlations,
            "entropy_peak_s": self.entropy_peak_s,
            "fidelity_rate_peak_s": self.fidelity_rate_peak_s,
            "peak_offsets": self.peak_offsets(),
            "half_max_entropy_time": self.half_max_entropy_time,
            "half_max_vs_t_opt": self.half_max_vs_t_opt,
        }


def correlation_report(table: RuntimeTable, traces: dict[str, Trace]) -> CorrelationReport:
    names = [r.preset for r in table.rows]
    missing = set(names) - set(traces)
    if missing:
        raise ValueError(f"missing traces for {sorted(missing)}")
    t_un = [r.t_unoptimized for r in table.rows]
    t_op = [r.t_optimized for r in table.rows]
    f0 = [r.initial_f for r in table.rows]
    g0 = [r.initial_g for r in table.rows]
    ranks = {
        "F_vs_T_unoptimized": spearman(f0, t_un),
        "F_vs_T_optimized": spearman(f0, t_op),
        "G_vs_T_unoptimized": spearman(g0, t_un),
        "G_vs_T_optimized": spearman(g0, t_op),
    }
    ent_peak, rate_peak, half = {}, {}, {}
    for name in names:
        tr = traces[name]
        s = tr["s"]
        ent_peak[name] = float(s[int(np.argmax(tr["entropy_max"]))])
        rate_peak[name] = float(s[int(np.argmax(np.abs(tr["dF_ds"])))])
        half[name] = half_max_time(tr)
    return CorrelationReport(
        rank_correlations=ranks,
        entropy_peak_s=ent_peak,
        fidelity_rate_peak_s=rate_peak,
        half_max_entropy_time=half,
        half_max_vs_t_opt=spearman([half[k] for k in names], t_op),
    )
