import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aqc_entangle.algorithms import hamiltonian_at, make_spec, uniform_state
from aqc_entangle.numerics import (
    ConvergenceError,
    SymmetryError,
    cumulative_trapezoid,
    fix_gauge,
    jacobi_eigensystem,
    refine_extremum,
)
from aqc_entangle.oracles import characteristic_roots

from conftest import profile


def test_identity():
    es = jacobi_eigensystem(np.eye(2))
    np.testing.assert_array_equal(es.values, [1.0, 1.0])


def test_swap_matrix():
    es = jacobi_eigensystem(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(es.values, [-1.0, 1.0], atol=1e-15)
    v0, v1 = es.vectors[:, 0], es.vectors[:, 1]
    assert abs(abs(v0 @ np.array([1, -1]) / math.sqrt(2)) - 1) < 1e-12
    assert abs(abs(v1 @ np.array([1, 1]) / math.sqrt(2)) - 1) < 1e-12


def test_search_half_point():
    spec = make_spec("search", 2, uniform_state(2))
    es = jacobi_eigensystem(hamiltonian_at(spec, 0.5))
    np.testing.assert_allclose(es.values, [0.25, 0.75, 1.0, 1.0], atol=1e-12)


def test_rejects_asymmetric():
    with pytest.raises(SymmetryError):
        jacobi_eigensystem(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        jacobi_eigensystem(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_sweep_cap_raises():
    a = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]])
    with pytest.raises(ConvergenceError):
        jacobi_eigensystem(a, max_sweeps=1)


def _random_sym(rng, n):
    x = rng.normal(size=(n, n))
    return (x + x.T) / 2


def test_random_residuals_and_trace():
    rng = np.random.default_rng(0)
    for k in range(1000):
        n = 1 + k % 16
        a = _random_sym(rng, n)
        es = jacobi_eigensystem(a)
        scale = np.linalg.norm(a)
        res = np.linalg.norm(a @ es.vectors - es.vectors * es.values, axis=0)
        assert np.all(res <= 1e-10 * scale)
        assert abs(es.values.sum() - np.trace(a)) <= 1e-10 * max(1.0, scale)
        assert np.all(np.diff(es.values) >= 0)


def test_against_numpy_oracle():
    rng = np.random.default_rng(1)
    for n in (4, 8, 16):
        a = _random_sym(rng, n)
        np.testing.assert_allclose(jacobi_eigensystem(a).values, np.linalg.eigvalsh(a), atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-10, 10)), st.sampled_from([2, 3]))
def test_characteristic_roots(x, n):
    a = (x[:n, :n] + x[:n, :n].T) / 2
    np.testing.assert_allclose(jacobi_eigensystem(a).values, characteristic_roots(a), atol=1e-10 * max(1, np.abs(a).max()))


def test_batch_matches_single():
    rng = np.random.default_rng(2)
    batch = np.stack([_random_sym(rng, 6) for _ in range(20)])
    batch[3] = np.diag(np.arange(6.0))  # already diagonal member
    es = jacobi_eigensystem(batch)
    for k in range(20):
        single = jacobi_eigensystem(batch[k])
        np.testing.assert_array_equal(es.values[k], single.values)
        np.testing.assert_array_equal(es.vectors[k], single.vectors)


def test_stable_sort_of_degenerate_level():
    es = jacobi_eigensystem(np.diag([1.0, 0.0, 1.0, 1.0]))
    np.testing.assert_array_equal(es.vectors[:, 1:], np.eye(4)[:, [0, 2, 3]])


@pytest.mark.parametrize(
    "ref, v, expected",
    [((1, 0), (-1, 0), (1, 0)), (None, (0, -1), (0, 1)), ((0.6, 0.8), (0.6, 0.8), (0.6, 0.8))],
)
def test_fix_gauge_examples(ref, v, expected):
    np.testing.assert_array_equal(fix_gauge(ref, np.array(v, float)), expected)


@given(
    arrays(np.float64, 5, elements=st.floats(-1, 1)).filter(lambda v: np.any(np.abs(v) > 1e-3)),
    st.one_of(st.none(), arrays(np.float64, 5, elements=st.floats(-1, 1))),
)
def test_fix_gauge_idempotent(v, ref):
    once = fix_gauge(ref, v)
    np.testing.assert_array_equal(fix_gauge(ref, once), once)


def test_fix_gauge_zero_vector():
    with pytest.raises(ValueError):
        fix_gauge(None, np.zeros(3))


def test_cumulative_trapezoid_examples():
    np.testing.assert_allclose(cumulative_trapezoid([0, 1], [1, 1]), [0, 1])
    np.testing.assert_allclose(cumulative_trapezoid([0, 0.5, 1], [0, 1, 2]), [0, 0.25, 1.0])


def test_cumulative_trapezoid_errors():
    with pytest.raises(ValueError):
        cumulative_trapezoid([0, 0, 1], [1, 1, 1])
    with pytest.raises(ValueError):
        cumulative_trapezoid([0, 1], [1, 1, 1])


def test_cumulative_trapezoid_green_search():
    p = profile("search", 2)
    assert abs(cumulative_trapezoid(p.s_grid, p.ratio)[-1] / 0.01 - 173) <= 0.02 * 173


def test_refine_examples():
    s, _ = refine_extremum(lambda x: -(x - 0.3) ** 2, (0, 1))
    assert abs(s - 0.3) < 1e-9
    s, f = refine_extremum(lambda x: x * (1 - x), (0, 1))
    assert abs(s - 0.5) < 1e-9 and abs(f - 0.25) < 1e-15
    s, _ = refine_extremum(lambda x: (x - 0.7) ** 2, (0, 1), mode="min")
    assert abs(s - 0.7) < 1e-9


def test_refine_bad_bracket():
    with pytest.raises(ValueError):
        refine_extremum(lambda x: x, (0.6, 0.4))
    with pytest.raises(ValueError):
        refine_extremum(lambda x: x, (0, 1), mode="median")
