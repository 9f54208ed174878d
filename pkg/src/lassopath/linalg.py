"""Dense Gram-matrix primitives shared by the solvers.

Column indices are 0-based throughout the package.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from .errors import RankDeficient

RANK_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DesignMatrix:
    """An n x p design with cached column norms."""

    values: np.ndarray
    col_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        X = np.array(self.values, dtype=float, order="F")
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"design must be a nonempty 2-d array, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("design contains non-finite entries")
        X.flags.writeable = False
        object.__setattr__(self, "values", X)
        object.__setattr__(self, "col_norms", _frozen(np.linalg.norm(X, axis=0)))

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]

    def columns(self, T):
        return self.values[:, list(T)]


def as_design(X):
    return X if isinstance(X, DesignMatrix) else DesignMatrix(X)


def as_response(y, n):
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != n:
        raise ValueError(f"response has length {y.shape[0]}, design has {n} rows")
    if not np.all(np.isfinite(y)):
        raise ValueError("response contains non-finite entries")
    return y


def _check_support(T, p):
    T = tuple(int(j) for j in T)
    if not T:
        raise ValueError("support must be nonempty")
    if any(b <= a for a, b in zip(T, T[1:])):
        raise ValueError(f"support must be sorted and distinct: {T}")
    if T[0] < 0 or T[-1] >= p:
        raise ValueError(f"support {T} out of range for p={p}")
    return T


@dataclass(frozen=True)
class GramFactor:
    """Cholesky factor of X_T^t X_T, plus the extremal singular values of X_T."""

    support: tuple
    factor: np.ndarray  # lower triangular L with L L^t = X_T^t X_T
    min_sv: float
    max_sv: float

    @property
    def size(self):
        return len(self.support)

    def gram(self):
        return self.factor @ self.factor.T


def extremal_singular_values(X, T):
    X = as_design(X)
    T = _check_support(T, X.p)
    sv = np.linalg.svd(X.columns(T), compute_uv=False)
    # rank-deficient X_T with |T| > n has fewer singular values than columns
    smin = float(sv[-1]) if len(sv) == len(T) else 0.0
    return smin, float(sv[0])


def gram_factorize(X, T, rank_tol=RANK_TOL):
    """Factor X_T^t X_T; raises RankDeficient if X_T is numerically singular."""
    X = as_design(X)
    T = _check_support(T, X.p)
    smin, smax = extremal_singular_values(X, T)
    if smax == 0.0 or smin <= rank_tol * smax:
        raise RankDeficient(T, smin / smax if smax else 0.0)
    XT = X.columns(T)
    L = np.linalg.cholesky(XT.T @ XT)
    return GramFactor(T, _frozen(L), smin, smax)


def gram_solve(f, v):
    v = np.asarray(v, dtype=float)
    if v.shape != (f.size,):
        raise ValueError(f"vector of length {v.shape} does not match support size {f.size}")
    return cho_solve((f.factor, True), v)


def projection_residual(X, T, y):
    """Return (P_{V_T} y, y - P_{V_T} y) via the Gram route."""
    X = as_design(X)
    if not T:
        return np.zeros_like(y), y.copy()
    f = gram_factorize(X, T)
    XT = X.columns(f.support)
    proj = XT @ gram_solve(f, XT.T @ y)
    return proj, y - proj
