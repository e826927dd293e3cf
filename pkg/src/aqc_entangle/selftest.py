"""Built-in verification run: invariants, entanglement identities and the reference tables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algorithms import analytic_low_spectrum, hamiltonian_at, make_spec, uniform_state
from .distances import fidelity_distance, geometric_separation
from .entanglement import closest_product_2q_analytic, closest_product_alternating, schmidt_mus
from .numerics import jacobi_eigensystem
from .oracles import grid_overlap
from .output import load_reference, within_tolerance
from .schedule import adiabatic_profile, optimized_runtime, printed_trun_runtime, unoptimized_runtime
from .trace import spearman

TABLE_BLOCKS = (("search", 2), ("search", 3), ("dj", 2), ("dj", 3), ("ctdj", 2))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    expected_fail: bool = False
    info: bool = False

    @property
    def status(self) -> str:
        if self.info:
            return "INFO"
        if self.expected_fail:
            return "XPASS" if self.passed else "XFAIL"
        return "PASS" if self.passed else "FAIL"

    @property
    def failed(self) -> bool:
        return self.status in ("FAIL", "XPASS")


def _spectrum_checks() -> list[Check]:
    out = []
    s = np.linspace(0.0, 1.0, 1001)
    for alg in ("search", "dj"):
        for n in (2, 3, 4):
            spec = make_spec(alg, n, uniform_state(n))
            vals = jacobi_eigensystem(hamiltonian_at(spec, s)).values
            em, ep = analytic_low_spectrum(spec, s)
            err = max(np.max(np.abs(vals[:, 0] - em)), np.max(np.abs(vals[:, 1] - ep)))
            deg = np.max(np.abs(vals[:, 2:] - 1.0))
            out.append(Check(f"spectrum {alg} n={n}", err <= 1e-9 and deg <= 1e-9,
                             f"low-pair err {err:.2e}, upper-level err {deg:.2e}"))
    s101 = np.linspace(0.0, 1.0, 101)
    for n in (2, 3):
        spec = make_spec("ctdj", n, uniform_state(n))
        vals = jacobi_eigensystem(hamiltonian_at(spec, s101)).values
        root = np.sqrt(1.0 - 2.0 * s101 * (1.0 - s101))
        err = max(np.max(np.abs(vals[:, 0] - (0.5 - 0.5 * root))), np.max(np.abs(vals[:, 1] - (0.5 + 0.5 * root))))
        out.append(Check(f"ctdj closed-form levels n={n}", err <= 1e-9, f"max err {err:.2e}"))
    return out


def _random_states(rng, count: int, dim: int) -> np.ndarray:
    x = rng.normal(size=(count, dim))
    return x / np.linalg.norm(x, axis=1)[:, None]


def _entanglement_checks(fast: bool) -> list[Check]:
    rng = np.random.default_rng(20240601)
    out = []
    worst_sum = 0.0
    for c in _random_states(rng, 200, 8):
        for q in range(3):
            m = schmidt_mus(c, q)
            worst_sum = max(worst_sum, abs(m.mu_plus + m.mu_minus - 1.0))
    out.append(Check("mu+ + mu- = 1", worst_sum <= 1e-12, f"max dev {worst_sum:.2e}"))

    worst_l, worst_n, worst_r = 0.0, 0.0, 0.0
    for c in _random_states(rng, 1000, 4):
        mu = schmidt_mus(c, 0).mu_plus
        res = closest_product_2q_analytic(c)
        worst_l = max(worst_l, abs(res.overlap**2 - mu))
        na, nb = res.factors.norms
        worst_n = max(worst_n, abs(na * nb - mu))
        worst_r = max(worst_r, res.residuals[0])
    out.append(Check("n=2 Lambda^2 = mu+", worst_l <= 1e-8, f"max dev {worst_l:.2e}"))
    out.append(Check("n=2 NaNb = mu+", worst_n <= 1e-8, f"max dev {worst_n:.2e}"))
    out.append(Check("n=2 consistency residual", worst_r <= 1e-8, f"max {worst_r:.2e}"))

    ghz = np.zeros(8)
    ghz[[0, 7]] = 1 / math.sqrt(2)
    w = np.zeros(8)
    w[[1, 2, 4]] = 1 / math.sqrt(3)
    g = closest_product_alternating(ghz)
    wr = closest_product_alternating(w)
    out.append(Check("GHZ d_unnormalized = 1/2", abs(g.d_unnormalized - 0.5) <= 1e-6, f"{g.d_unnormalized:.10f}"))
    out.append(Check("W d_unnormalized = 5/9", abs(wr.d_unnormalized - 5 / 9) <= 1e-6, f"{wr.d_unnormalized:.10f}"))
    worst = max(max(g.residuals), max(wr.residuals))
    out.append(Check("n=3 consistency residuals", worst <= 1e-8, f"max {worst:.2e}"))
    if not fast:
        dev = 0.0
        for c in _random_states(rng, 5, 8):
            dev = max(dev, abs(closest_product_alternating(c).overlap - grid_overlap(c)))
        out.append(Check("n=3 alternating vs grid oracle", dev <= 1e-4, f"max dev {dev:.2e} on 5 states"))
    return out


def _table_checks(printed_trun: bool) -> list[Check]:
    ref = load_reference()
    eps = ref["epsilon"]
    out = []
    for alg, n in TABLE_BLOCKS:
        table = ref["tables"][f"{alg}/{n}"]
        names = list(table["unoptimized"])
        t_un, t_op, shown_op, f0, g0 = [], [], [], [], []
        bad_un, bad_op = [], []
        for name in names:
            prof = adiabatic_profile(make_spec(alg, n, name))
            tu = unoptimized_runtime(prof, eps)[0]
            t_true = optimized_runtime(prof, eps)
            to = printed_trun_runtime(prof, eps) if printed_trun else t_true
            t_un.append(tu)
            t_op.append(t_true)
            shown_op.append(to)
            ground = prof.ground_states
            f0.append(float(fidelity_distance(ground[0], ground[-1])))
            g0.append(float(geometric_separation(ground[0], ground[-1])))
            if not within_tolerance(tu, table["unoptimized"][name], ref["rel_tol"], ref["abs_tol"]):
                bad_un.append(f"{name}={tu:.1f}")
            if not within_tolerance(to, table["optimized"][name], ref["rel_tol"], ref["abs_tol"]):
                bad_op.append(f"{name}={to:.4g}")
        shown = " ".join(f"{k}={v:.1f}" for k, v in zip(names, t_un))
        out.append(Check(f"table {alg} n={n} unoptimized", not bad_un, " ".join(bad_un) or shown))
        shown = " ".join(f"{k}={v:.4g}" for k, v in zip(names, shown_op))
        out.append(Check(f"table {alg} n={n} optimized" + (" (printed integrand)" if printed_trun else ""),
                         not bad_op, " ".join(bad_op) or shown, expected_fail=printed_trun))
        rf = [spearman(f0, t_un), spearman(f0, t_op)]
        out.append(Check(f"rank F vs T {alg} n={n}", all(r is not None and r >= 1 - 1e-12 for r in rf),
                         f"spearman {rf}"))
        rg = [spearman(g0, t_un), spearman(g0, t_op)]
        out.append(Check(f"rank G vs T {alg} n={n}", True, f"spearman {rg}", info=True))
    return out


def run_selftest(fast: bool = False, printed_trun: bool = False) -> list[Check]:
    checks = _spectrum_checks()
    checks += _entanglement_checks(fast)
    checks += _table_checks(printed_trun)
    return checks


def format_report(checks: list[Check]) -> str:
    lines = [f"{c.status:<5} {c.name}: {c.detail}" for c in checks]
    failed = [c.name for c in checks if c.failed]
    counted = [c for c in checks if not c.info]
    n_pass = sum(c.status == "PASS" for c in counted)
    n_xfail = sum(c.status == "XFAIL" for c in counted)
    lines.append(f"selftest: {n_pass} passed, {len(failed)} failed, {n_xfail} expected failures")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    return "\n".join(lines) + "\n"
