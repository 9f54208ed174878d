import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lassopath.errors import RankDeficient
from lassopath.linalg import (DesignMatrix, extremal_singular_values, gram_factorize, gram_solve,
                              projection_residual)


def test_identity_factor():
    f = gram_factorize(np.eye(2), [0])
    np.testing.assert_array_equal(f.factor, [[1.0]])
    assert f.min_sv == f.max_sv == 1.0


def test_duplicated_column_is_rank_deficient():
    with pytest.raises(RankDeficient) as info:
        gram_factorize(np.array([[1.0, 1.0], [0.0, 0.0]]), [0, 1])
    assert info.value.support == (0, 1)


def test_seed42_reconstruction(seed42):
    X, _ = seed42
    f = gram_factorize(X, [0, 2])
    direct = X[:, [0, 2]].T @ X[:, [0, 2]]
    assert np.linalg.norm(f.gram() - direct) <= 1e-10 * np.linalg.norm(direct)


def test_solve_identity_and_zero():
    f = gram_factorize(np.eye(2), [0, 1])
    np.testing.assert_allclose(gram_solve(f, [3.0, 1.0]), [3.0, 1.0])
    np.testing.assert_array_equal(gram_solve(f, [0.0, 0.0]), [0.0, 0.0])


def test_seed42_solve_residual(seed42):
    X, _ = seed42
    f = gram_factorize(X, [0, 2])
    v = np.array([1.0, -1.0])
    w = gram_solve(f, v)
    G = X[:, [0, 2]].T @ X[:, [0, 2]]
    assert np.linalg.norm(G @ w - v) <= 1e-10 * np.linalg.norm(v)


def test_singular_values(seed42):
    assert extremal_singular_values(np.eye(2), [0, 1]) == (1.0, 1.0)
    dup = np.array([[1.0, 1.0], [2.0, 2.0], [0.5, 0.5]])
    smin, smax = extremal_singular_values(dup, [0, 1])
    assert smin <= 1e-8 and smax > 0
    X, _ = seed42
    smin, smax = extremal_singular_values(X, [0, 1, 2])
    ev = np.linalg.eigvalsh(X[:, :3].T @ X[:, :3])
    np.testing.assert_allclose([smin, smax], np.sqrt([ev[0], ev[-1]]), rtol=1e-8)


def test_wide_support_has_zero_min_sv(seed42):
    X, _ = seed42
    assert extremal_singular_values(X, [0, 1, 2, 3])[0] == 0.0


def test_factorize_is_deterministic(seed42):
    X, _ = seed42
    a, b = gram_factorize(X, [1, 3, 4]), gram_factorize(X, [1, 3, 4])
    assert a.factor.tobytes() == b.factor.tobytes()
    assert (a.min_sv, a.max_sv) == (b.min_sv, b.max_sv)


def test_design_rejects_bad_input():
    with pytest.raises(ValueError):
        DesignMatrix(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        DesignMatrix(np.zeros((0, 3)))
    D = DesignMatrix(np.array([[3.0, 0.0], [4.0, 1.0]]))
    np.testing.assert_allclose(D.col_norms, [5.0, 1.0], rtol=1e-12)
    with pytest.raises(ValueError):
        D.values[0, 0] = 1.0


@pytest.mark.parametrize("T", [[1, 0], [0, 0], [], [0, 7]])
def test_bad_supports(T):
    with pytest.raises(ValueError):
        gram_factorize(np.eye(3), T)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 8), k=st.integers(1, 3))
def test_least_squares_projection(seed, n, k):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, k + 2))
    y = rng.standard_normal(n)
    T = sorted(rng.choice(k + 2, size=k, replace=False))
    proj, _ = projection_residual(X, T, y)
    Q, _ = np.linalg.qr(X[:, T])
    np.testing.assert_allclose(proj, Q @ (Q.T @ y), atol=1e-8)
    coef, *_ = np.linalg.lstsq(X[:, T], y, rcond=None)
    f = gram_factorize(X, T)
    np.testing.assert_allclose(gram_solve(f, X[:, T].T @ y), coef, atol=1e-8)
