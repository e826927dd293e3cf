"""Initial/final states and interpolated projector Hamiltonians.

States are real numpy vectors over the computational basis, index = binary
value of the bit string with qubit 0 as the most significant bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

NORM_TOL = 1e-9


class Algorithm(str, enum.Enum):
    SEARCH = "search"
    DEUTSCH_JOZSA = "dj"
    CONSTANT_TIME_DJ = "ctdj"


class UnsupportedAnalyticForm(ValueError):
    pass


# unnormalized component lists, kept exact until normalization
PRESETS: dict[int, dict[str, tuple[str, ...]]] = {
    2: {
        "red": ("1", "3/2", "1", "3/2"),
        "yellow": ("1", "1", "4/3", "4/3"),
        "green": ("1", "1", "1", "1"),
        "blue": ("1", "1", "2/3", "2/3"),
        "cyan": ("2", "2", "1", "1"),
        "magenta": ("3", "1", "3", "1"),
    },
    3: {
        "red": ("1", "1", "3", "3", "1", "1", "3", "3"),
        "yellow": ("3", "3", "3", "3", "1", "1", "1", "1"),
        "green": ("1",) * 8,
        "blue": ("1", "1", "2", "2", "1", "1", "2", "2"),
        "cyan": ("2", "2", "2", "2", "3", "3", "3", "3"),
        "magenta": ("19", "19", "1", "1", "19", "19", "1", "1"),
    },
}
COLORS = ("red", "yellow", "green", "blue", "cyan", "magenta")


def n_qubits_of(amps) -> int:
    size = len(amps)
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise ValueError(f"state length {size} is not a power of two >= 2")
    return n


def normalize_rational(components) -> np.ndarray:
    """Normalize a list of exact rationals (Fractions, ints or 'p/q' strings)."""
    fracs = [Fraction(c) for c in components]
    norm2 = sum(x * x for x in fracs)
    if norm2 == 0:
        raise ValueError("cannot normalize the zero vector")
    scale = math.sqrt(norm2)
    return np.array([float(x) / scale for x in fracs])


def uniform_state(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one qubit")
    dim = 2**n
    return np.full(dim, 1.0 / math.sqrt(dim))


def preset_state(color: str, n: int) -> np.ndarray:
    if n not in PRESETS:
        raise ValueError(f"presets exist only for n in {sorted(PRESETS)}, got {n}")
    try:
        comps = PRESETS[n][color]
    except KeyError:
        raise ValueError(f"unknown preset color {color!r}") from None
    return normalize_rational(comps)


@dataclass(frozen=True)
class ProblemSpec:
    algorithm: Algorithm
    n_qubits: int
    initial: np.ndarray = field(repr=False)
    alpha: int = 0
    marked_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        init = np.asarray(self.initial, dtype=float)
        object.__setattr__(self, "initial", init)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if init.shape != (2**self.n_qubits,):
            raise ValueError(f"initial state must have {2**self.n_qubits} amplitudes")
        if abs(float(init @ init) - 1.0) > NORM_TOL:
            raise ValueError("initial state is not normalized")
        if self.alpha not in (0, 1):
            raise ValueError("alpha must be 0 or 1")
        if not 0 <= self.marked_index < init.size:
            raise ValueError("marked_index out of range")
        if self.algorithm is Algorithm.CONSTANT_TIME_DJ and init.size % 2:
            raise ValueError("constant-time DJ needs an even dimension")

    @property
    def beta(self) -> int:
        return 1 - self.alpha

    @property
    def dim(self) -> int:
        return self.initial.size


def final_state(spec: ProblemSpec) -> np.ndarray:
    dim = spec.dim
    out = np.zeros(dim)
    if spec.algorithm is Algorithm.SEARCH:
        out[spec.marked_index] = 1.0
    elif spec.algorithm is Algorithm.DEUTSCH_JOZSA:
        out[0] = spec.alpha
        out[1:] = spec.beta / math.sqrt(dim - 1)
    else:
        half = math.sqrt(dim / 2)
        out[0::2] = spec.alpha / half
        out[1::2] = spec.beta / half
    return out


def projector_hamiltonian(psi) -> np.ndarray:
    """``I - |psi><psi|``: ground state psi at energy 0, everything else at 1."""
    psi = np.asarray(psi, dtype=float)
    if abs(float(psi @ psi) - 1.0) > NORM_TOL:
        raise ValueError("projector needs a normalized state")
    return np.eye(psi.size) - np.outer(psi, psi)


def initial_hamiltonian(spec: ProblemSpec) -> np.ndarray:
    return projector_hamiltonian(spec.initial)


def final_hamiltonian(spec: ProblemSpec) -> np.ndarray:
    return projector_hamiltonian(final_state(spec))


def hamiltonian_at(spec: ProblemSpec, s) -> np.ndarray:
    """H(s) = (1-s) H0 + s H1.  ``s`` may be an array, giving a stack of matrices."""
    s_arr = np.asarray(s, dtype=float)
    if np.any((s_arr < 0.0) | (s_arr > 1.0)):
        raise ValueError("schedule time must lie in [0, 1]")
    h0 = initial_hamiltonian(spec)
    h1 = final_hamiltonian(spec)
    f = (1.0 - s_arr)[..., None, None]
    g = s_arr[..., None, None]
    return f * h0 + g * h1


def dh_ds(spec: ProblemSpec) -> np.ndarray:
    return final_hamiltonian(spec) - initial_hamiltonian(spec)


def analytic_low_spectrum(spec: ProblemSpec, s):
    """Closed-form two lowest levels, valid for the uniform initial state only."""
    if not np.allclose(spec.initial, uniform_state(spec.n_qubits), rtol=0.0, atol=1e-12):
        raise UnsupportedAnalyticForm("closed forms assume the uniform initial state")
    s = np.asarray(s, dtype=float)
    f, g = 1.0 - s, s
    dim = spec.dim
    if spec.algorithm is Algorithm.SEARCH:
        root = np.sqrt((f - g) ** 2 + (4.0 / dim) * f * g)
    elif spec.algorithm is Algorithm.DEUTSCH_JOZSA:
        ab = spec.alpha - spec.beta
        root = np.sqrt((f - ab * g) ** 2 + (4.0 / dim) * ab * f * g)
    else:
        root = np.sqrt(1.0 - 2.0 * s * (1.0 - s))
        return 0.5 - 0.5 * root, 0.5 + 0.5 * root
    return 0.5 * ((f + g) - root), 0.5 * ((f + g) + root)


def make_spec(algorithm, n_qubits: int, initial="green", alpha: int = 0, marked_index: int = 0) -> ProblemSpec:
    """Convenience constructor: ``initial`` may be a preset color or an amplitude list."""
    if isinstance(initial, str):
        amps = preset_state(initial, n_qubits)
    else:
        amps = np.asarray(initial, dtype=float)
    return ProblemSpec(Algorithm(algorithm), n_qubits, amps, alpha, marked_index)
