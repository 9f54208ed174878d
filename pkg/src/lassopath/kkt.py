"""Subgradient optimality certificates for the LASSO.

A vector b solves min_b 1/2 ||y - Xb||^2 + lam ||b||_1 iff the scaled
correlation g = X^t (y - Xb) / lam equals sign(b_j) on the support of b and
satisfies |g_j| < 1 off it.
"""
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import as_design, as_response, gram_factorize, gram_solve

KKT_TOL = 1e-8
SUPPORT_TOL = 1e-10


class Status(str, enum.Enum):
    VALID = "VALID"
    VALID_AT_BREAKPOINT = "VALID_AT_BREAKPOINT"
    INVALID = "INVALID"


@dataclass(frozen=True)
class ActiveModel:
    support: tuple
    signs: tuple

    def __post_init__(self):
        support = tuple(int(j) for j in self.support)
        signs = tuple(int(s) for s in self.signs)
        if len(support) != len(signs):
            raise ValueError("support and signs differ in length")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError(f"signs must be +-1, got {signs}")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError(f"support must be sorted and distinct: {support}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_coefficients(cls, b, support_tol=SUPPORT_TOL):
        b = np.asarray(b, dtype=float)
        T = np.flatnonzero(np.abs(b) > support_tol)
        return cls(tuple(T), tuple(int(s) for s in np.sign(b[T])))

    @property
    def rho(self):
        return np.array(self.signs, dtype=float)

    def __len__(self):
        return len(self.support)


EMPTY_MODEL = ActiveModel((), ())


@dataclass(frozen=True)
class KktCertificate:
    lam: float
    g: np.ndarray
    model: ActiveModel
    active_equality_error: float
    inactive_margin: float
    kkt_tol: float = KKT_TOL

    @property
    def status(self):
        if self.active_equality_error > self.kkt_tol or self.inactive_margin <= -self.kkt_tol:
            return Status.INVALID
        if self.inactive_margin <= self.kkt_tol:
            return Status.VALID_AT_BREAKPOINT
        return Status.VALID

    @property
    def is_valid(self):
        return self.status is not Status.INVALID

    @property
    def violation(self):
        """Largest KKT violation, zero when both conditions hold exactly."""
        return max(self.active_equality_error, -self.inactive_margin, 0.0)


@dataclass(frozen=True)
class LassoSolution:
    lam: float
    coefficients: np.ndarray
    model: ActiveModel
    residual: np.ndarray
    objective: float
    certificate: Optional[KktCertificate] = None
    multiple_optima: bool = False

    @property
    def l1_norm(self):
        return float(np.abs(self.coefficients).sum())

    @property
    def residual_sq(self):
        return float(self.residual @ self.residual)


def objective(X, y, b, lam):
    r = y - X.values @ b
    return 0.5 * float(r @ r) + lam * float(np.abs(b).sum())


def make_solution(X, y, b, lam, model=None, certificate=None, **kw):
    X = as_design(X)
    b = np.asarray(b, dtype=float)
    if model is None:
        model = ActiveModel.from_coefficients(b)
    r = y - X.values @ b
    obj = 0.5 * float(r @ r) + lam * float(np.abs(b).sum())
    return LassoSolution(float(lam), b, model, r, obj, certificate, **kw)


def solve_on_support(X, y, model, lam):
    """Closed-form restricted coefficients (X_T^t X_T)^{-1} (X_T^t y - lam rho).

    Sign consistency of the result is not checked.
    """
    X = as_design(X)
    y = as_response(y, X.n)
    if len(model) == 0:
        return np.zeros(0)
    f = gram_factorize(X, model.support)
    return gram_solve(f, X.columns(model.support).T @ y - lam * model.rho)


def certify_optimality(X, y, b, lam, kkt_tol=KKT_TOL, support_tol=SUPPORT_TOL):
    if lam <= 0:
        raise ValueError("lambda must be positive")
    X = as_design(X)
    y = as_response(y, X.n)
    b = np.asarray(b, dtype=float)
    g = X.values.T @ (y - X.values @ b) / lam
    model = ActiveModel.from_coefficients(b, support_tol)
    on = np.zeros(X.p, dtype=bool)
    on[list(model.support)] = True
    eq_err = float(np.max(np.abs(g[on] - model.rho))) if on.any() else 0.0
    margin = 1.0 - float(np.max(np.abs(g[~on]))) if (~on).any() else 1.0
    return KktCertificate(float(lam), g, model, eq_err, margin, kkt_tol)


def oracle_estimator(X, y, true_model, lam):
    """Sign-penalized least squares restricted to the true support.

    Same algebra as solve_on_support, embedded in R^p. Meant as a benchmark on
    synthetic data where the planted support and signs are known; lam = 0
    gives restricted ordinary least squares.
    """
    X = as_design(X)
    b = np.zeros(X.p)
    if len(true_model):
        b[list(true_model.support)] = solve_on_support(X, y, true_model, lam)
    return b
