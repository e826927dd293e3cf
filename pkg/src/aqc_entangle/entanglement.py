"""Entanglement of real pure qubit states.

Two families of measures:

* von Neumann entropy of each single-qubit reduced density matrix, from the
  closed-form 2x2 eigenvalues;
* geometric measures built on the closest product state.  Along a fixed
  product direction ``u`` the best unnormalized multiple of ``u`` is the
  orthogonal projection, so every distance variant is a function of the
  maximal overlap ``Lambda = max_u |<c|u>|``:

      normalized product state        2 - 2 Lambda
      unnormalized product state      1 - Lambda^2
      Hilbert-Schmidt                 sqrt(2 - 2 Lambda^2)

The maximal overlap is found either analytically (two qubits) or by
alternating single-qubit updates with deterministic multistart (any n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algorithms import n_qubits_of
from .numerics import ConvergenceError

DEFAULT_RESTARTS = 32
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 500
DEFAULT_SEED = 0x5EED
_TIE_TOL = 1e-14


@dataclass(frozen=True)
class SchmidtPair:
    mu_plus: float
    mu_minus: float


@dataclass(frozen=True)
class ProductFactors:
    """Per-qubit two-component factors of a (possibly unnormalized) product state."""

    factors: tuple[np.ndarray, ...]

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    @property
    def norms(self) -> tuple[float, ...]:
        return tuple(float(f @ f) for f in self.factors)

    def vector(self) -> np.ndarray:
        out = np.ones(1)
        for f in self.factors:
            out = np.kron(out, f)
        return out

    @classmethod
    def from_unit(cls, units, length_sq: float) -> "ProductFactors":
        """Scale unit factors so that the product of the norms equals ``length_sq``."""
        units = [np.asarray(u, dtype=float) for u in units]
        per = length_sq ** (0.5 / len(units))
        return cls(tuple(per * u for u in units))


@dataclass(frozen=True)
class GeometricResult:
    overlap: float
    factors: ProductFactors
    angles: tuple[float, ...]
    residuals: list[float] = field(default_factory=list)
    stationarity: list[float] = field(default_factory=list)

    @property
    def d_normalized(self) -> float:
        return 2.0 - 2.0 * self.overlap

    @property
    def d_unnormalized(self) -> float:
        return 1.0 - self.overlap**2

    @property
    def d_hilbert_schmidt(self) -> float:
        return math.sqrt(max(0.0, 2.0 - 2.0 * self.overlap**2))

    def to_dict(self) -> dict:
        return {
            "overlap": self.overlap,
            "d_normalized": self.d_normalized,
            "d_unnormalized": self.d_unnormalized,
            "d_hilbert_schmidt": self.d_hilbert_schmidt,
            "angles": list(self.angles),
            "factors": [f.tolist() for f in self.factors.factors],
            "norms": list(self.factors.norms),
            "residuals": list(self.residuals),
            "stationarity": list(self.stationarity),
        }


def _as_state(state) -> tuple[np.ndarray, int]:
    c = np.asarray(state, dtype=float)
    return c, n_qubits_of(c)


def partition_vectors(state, kept_qubit: int):
    """The two halves (kept qubit in |0> and |1>) of the amplitude vector.

    Works on stacks of states: ``state`` may have shape ``(..., 2**n)``.
    """
    c = np.asarray(state, dtype=float)
    n = n_qubits_of(c[(0,) * (c.ndim - 1)] if c.ndim > 1 else c)
    if not 0 <= kept_qubit < n:
        raise IndexError(f"qubit {kept_qubit} out of range for {n} qubits")
    t = c.reshape(c.shape[:-1] + (2,) * n)
    t = np.moveaxis(t, c.ndim - 1 + kept_qubit, c.ndim - 1)
    t = t.reshape(c.shape[:-1] + (2, -1))
    return t[..., 0, :], t[..., 1, :]


def reduced_density(state, kept_qubit: int) -> np.ndarray:
    v1, v2 = partition_vectors(state, kept_qubit)
    off = float(v1 @ v2)
    return np.array([[float(v1 @ v1), off], [off, float(v2 @ v2)]])


def schmidt_xx(state, kept_qubit: int):
    """Determinant of the reduced density matrix (vectorized over leading axes)."""
    v1, v2 = partition_vectors(state, kept_qubit)
    n11 = np.sum(v1 * v1, axis=-1)
    n22 = np.sum(v2 * v2, axis=-1)
    n12 = np.sum(v1 * v2, axis=-1)
    return n11 * n22 - n12 * n12


def _discriminant(state, kept_qubit: int):
    # 1 - 4 XX for a unit state, written as (n11 - n22)^2 + 4 n12^2 to avoid cancellation
    v1, v2 = partition_vectors(state, kept_qubit)
    n11 = np.sum(v1 * v1, axis=-1)
    n22 = np.sum(v2 * v2, axis=-1)
    n12 = np.sum(v1 * v2, axis=-1)
    tr = n11 + n22
    if np.any(np.abs(tr - 1.0) > 1e-9):
        raise ValueError("state is not normalized")
    return (n11 - n22) ** 2 + 4.0 * n12 * n12


def _mus(disc):
    root = np.sqrt(disc)
    return 0.5 * (1.0 + root), 0.5 * (1.0 - root)


def schmidt_mus(state, kept_qubit: int) -> SchmidtPair:
    """Eigenvalues of the reduced density matrix, 1/2 (1 +- sqrt(1 - 4 XX))."""
    mp, mm = _mus(_discriminant(state, kept_qubit))
    return SchmidtPair(float(mp), float(max(mm, 0.0)))


def _entropy_terms(mu):
    mu = np.asarray(mu, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(mu > 0.0, -mu * np.log2(np.where(mu > 0.0, mu, 1.0)), 0.0)
    return terms


def vn_entropy(mus: SchmidtPair) -> float:
    """Entropy in bits, 0 log 0 := 0."""
    return float(_entropy_terms(mus.mu_plus) + _entropy_terms(mus.mu_minus))


def entropy_of(states, kept_qubit: int) -> np.ndarray:
    """Single-qubit entanglement entropy for a stack of states."""
    mp, mm = _mus(_discriminant(states, kept_qubit))
    return _entropy_terms(mp) + _entropy_terms(np.maximum(mm, 0.0))


# --------------------------------------------------------------------------
# consistency conditions for an unnormalized closest product state


def consistency_residuals(state, factors: ProductFactors) -> list[float]:
    """Residuals of the non-trivial-solution conditions.

    n=2: ``(NaNb)^2 - NaNb + (c0c3 - c1c2)^2``.
    n=3: for each qubit q (order a, b, e), with M the 2x2 contraction of the
    state with factor q and lam = N_q * Na*Nb*Ne,
    ``lam^2 - lam tr(M^T M) + det(M)^2``.
    Other sizes have no closed form and return an empty list.
    """
    c, n = _as_state(state)
    norms = factors.norms
    if n == 2:
        nab = norms[0] * norms[1]
        det = c[0] * c[3] - c[1] * c[2]
        return [float(abs(nab * nab - nab + det * det))]
    if n != 3:
        return []
    t = c.reshape(2, 2, 2)
    total = norms[0] * norms[1] * norms[2]
    out = []
    for q in range(3):
        m = np.tensordot(t, factors.factors[q], axes=([q], [0]))
        lam = norms[q] * total
        tr = float(np.sum(m * m))
        det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
        out.append(float(abs(lam * lam - lam * tr + det * det)))
    return out


def stationarity_residuals(state, units) -> list[float]:
    """Per-qubit ``|| w_q - Lambda u_q ||`` where w_q contracts the state with all other factors."""
    c, n = _as_state(state)
    t = c.reshape((2,) * n)
    units = [np.asarray(u, dtype=float) for u in units]
    lam = float(c @ ProductFactors(tuple(units)).vector())
    out = []
    for q in range(n):
        w = t
        for r in reversed(range(n)):
            if r != q:
                w = np.tensordot(w, units[r], axes=([r], [0]))
        out.append(float(np.linalg.norm(w - lam * units[q])))
    return out


def _finish(c: np.ndarray, units, angles) -> GeometricResult:
    units = [np.asarray(u, dtype=float) for u in units]
    lam = float(c @ ProductFactors(tuple(units)).vector())
    if lam < 0.0:
        units[0] = -units[0]
        angles = (angles[0] + math.pi,) + tuple(angles[1:])
        lam = -lam
    lam = min(lam, 1.0)
    factors = ProductFactors.from_unit(units, lam * lam)
    return GeometricResult(
        overlap=lam,
        factors=factors,
        angles=tuple(float(a) for a in angles),
        residuals=consistency_residuals(c, factors),
        stationarity=stationarity_residuals(c, units),
    )


# --------------------------------------------------------------------------
# two qubits: closed-form stationary points


def _branch_angles(k: float, d: float) -> list[float]:
    # roots of k t^2 - d t - k = 0 for t = tan(angle); k == 0 leaves the axes
    if abs(k) < 1e-15:
        return [0.0, math.pi / 2]
    root = math.sqrt(4.0 * k * k + d * d)
    return [math.atan((d + root) / (2.0 * k)), math.atan((d - root) / (2.0 * k))]


def _partner_angles(y: float, x: float) -> list[float]:
    if y == 0.0 and x == 0.0:
        return [0.0, math.pi / 2]
    return [math.atan2(y, x)]


def closest_product_2q_analytic(state) -> GeometricResult:
    """Closest product state of a normalized two-qubit state from the tangent equations.

    Both branches of the quadratic for tan(phi) are evaluated with theta from
    its tangent equation, and symmetrically with the roles of the qubits
    swapped; the candidate with the largest overlap wins (ties: smaller
    |tan phi|).
    """
    c, n = _as_state(state)
    if n != 2:
        raise ValueError("analytic solver is for two qubits")
    c0, c1, c2, c3 = (float(x) for x in c)
    candidates = []
    for phi in _branch_angles(c0 * c1 + c2 * c3, c1 * c1 + c3 * c3 - c0 * c0 - c2 * c2):
        cp, sp = math.cos(phi), math.sin(phi)
        for theta in _partner_angles(c2 * cp + c3 * sp, c0 * cp + c1 * sp):
            candidates.append((theta, phi))
    for theta in _branch_angles(c0 * c2 + c1 * c3, c2 * c2 + c3 * c3 - c0 * c0 - c1 * c1):
        ct, st = math.cos(theta), math.sin(theta)
        for phi in _partner_angles(c1 * ct + c3 * st, c0 * ct + c2 * st):
            candidates.append((theta, phi))

    best = None
    for theta, phi in candidates:
        ct, st, cp, sp = math.cos(theta), math.sin(theta), math.cos(phi), math.sin(phi)
        ov = abs(c0 * ct * cp + c1 * ct * sp + c2 * st * cp + c3 * st * sp)
        key_tan = abs(math.tan(phi)) if abs(cp) > 1e-300 else math.inf
        if best is None or ov > best[0] + _TIE_TOL or (abs(ov - best[0]) <= _TIE_TOL and key_tan < best[1]):
            best = (ov, key_tan, theta, phi)
    _, _, theta, phi = best
    units = [np.array([math.cos(theta), math.sin(theta)]), np.array([math.cos(phi), math.sin(phi)])]
    return _finish(c, units, (theta, phi))


# --------------------------------------------------------------------------
# any n: alternating single-qubit updates


def _contract_except(t: np.ndarray, units: np.ndarray, q: int, n: int) -> np.ndarray:
    """Contract ``t`` (shape (2,)*n + (P,)) with every factor but ``q``.

    ``units`` has shape (n, 2, P); the result has shape (2, P).
    """
    w = t
    for r in reversed(range(n)):
        if r == q:
            continue
        lead = (slice(None),) * r
        w = w[lead + (0,)] * units[r, 0] + w[lead + (1,)] * units[r, 1]
    return w


def _full_overlap(t: np.ndarray, units: np.ndarray, n: int) -> np.ndarray:
    w = _contract_except(t, units, n - 1, n)
    return w[0] * units[n - 1, 0] + w[1] * units[n - 1, 1]


def _dominant_directions(states: np.ndarray, n: int) -> np.ndarray:
    """Leading eigenvector angle of every single-qubit reduced density matrix, shape (B, n)."""
    out = np.empty((states.shape[0], n))
    for q in range(n):
        v1, v2 = partition_vectors(states, q)
        a = np.sum(v1 * v1, axis=-1)
        d = np.sum(v2 * v2, axis=-1)
        b = np.sum(v1 * v2, axis=-1)
        out[:, q] = 0.5 * np.arctan2(2.0 * b, a - d)
    return out


def start_angles(states: np.ndarray, n: int, restarts: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Start angles, shape (B, restarts, n): dominant marginals first, then seeded uniform draws."""
    b = states.shape[0]
    rng = np.random.default_rng(seed)
    draws = rng.uniform(0.0, math.pi, size=(restarts - 1, n))
    out = np.empty((b, restarts, n))
    out[:, 0] = _dominant_directions(states, n)
    out[:, 1:] = draws[None]
    return out


def alternating_batch(
    states: np.ndarray,
    angles: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
):
    """Run alternating maximization from every start of every state.

    ``states`` has shape (B, 2**n) and ``angles`` shape (B, R, n).  Returns unit
    factors (B, R, n, 2), overlaps (B, R) and a converged mask (B, R).  Every
    (state, start) pair evolves independently of the others.
    """
    states = np.asarray(states, dtype=float)
    b, dim = states.shape
    n = n_qubits_of(states[0])
    r = angles.shape[1]
    p = b * r
    t = np.moveaxis(states.reshape((b,) + (2,) * n), 0, -1)
    t = np.repeat(t, r, axis=-1)  # pair index = state * R + start
    flat = angles.reshape(p, n).T
    units = np.stack([np.cos(flat), np.sin(flat)], axis=1)  # (n, 2, P)

    lam = np.abs(_full_overlap(t, units, n))
    converged = np.zeros(p, dtype=bool)
    active = np.arange(p)
    for _ in range(max_iters):
        if active.size == 0:
            break
        ta = t[..., active]
        ua = units[:, :, active]
        new_lam = lam[active]
        for q in range(n):
            w = _contract_except(ta, ua, q, n)
            norm = np.sqrt(w[0] * w[0] + w[1] * w[1])
            ok = norm > 0.0
            safe = np.where(ok, norm, 1.0)
            ua[q, 0] = np.where(ok, w[0] / safe, ua[q, 0])
            ua[q, 1] = np.where(ok, w[1] / safe, ua[q, 1])
            new_lam = np.where(ok, norm, new_lam)
        units[:, :, active] = ua
        done = np.abs(new_lam - lam[active]) < tol
        lam[active] = new_lam
        converged[active[done]] = True
        active = active[~done]

    units = np.moveaxis(units, -1, 0).reshape(b, r, n, 2)
    return units, lam.reshape(b, r), converged.reshape(b, r)


def select_best(units, lam, converged):
    """Best converged start per state (ties: lowest start index). Returns (index, ok) arrays."""
    score = np.where(converged, lam, -np.inf)
    best = np.argmax(score, axis=1)
    return best, np.any(converged, axis=1)


def closest_product_alternating(
    state,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = DEFAULT_SEED,
) -> GeometricResult:
    c, n = _as_state(state)
    if n < 2:
        raise ValueError("need at least two qubits")
    if restarts < 1:
        raise ValueError("need at least one start")
    angles = start_angles(c[None], n, restarts, seed)
    units, lam, conv = alternating_batch(c[None], angles, tol, max_iters)
    best, ok = select_best(units, lam, conv)
    k = int(best[0])
    if not ok[0]:
        k = int(np.argmax(lam[0]))
        partial = _finish(c, list(units[0, k]), _angles_of(units[0, k]))
        err = ConvergenceError(f"no start converged in {max_iters} iterations", float(1.0 - lam[0, k]))
        err.partial = partial
        raise err
    return _finish(c, list(units[0, k]), _angles_of(units[0, k]))


def _angles_of(units) -> tuple[float, ...]:
    return tuple(math.atan2(u[1], u[0]) for u in units)


def closest_product(state, **kwargs) -> GeometricResult:
    """Analytic route for two qubits, alternating solver otherwise."""
    c, n = _as_state(state)
    if n == 2:
        return closest_product_2q_analytic(c)
    return closest_product_alternating(c, **kwargs)
