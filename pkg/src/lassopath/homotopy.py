"""Exact piecewise-affine LASSO path by active-set homotopy.

On every segment (lambda_lo, lambda_hi] the support T and signs rho are fixed
and the active coefficients are affine in lambda,

    beta_T(lam) = a - lam * d,   a = G^{-1} X_T^t y,   d = G^{-1} rho,

with G = X_T^t X_T. The correlations X^t (y - X beta(lam)) are affine too,
so the next breakpoint is the largest lambda below lambda_hi at which an
active coefficient hits zero or an inactive correlation reaches +-lambda.
"""
import bisect
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateProblem, IterationCap, OutOfRange
from .kkt import EMPTY_MODEL, ActiveModel, make_solution
from .linalg import as_design, as_response, gram_factorize, gram_solve

log = logging.getLogger(__name__)

LAMBDA_MIN_FACTOR = 1e-6
TIE_TOL = 1e-12  # relative to tau
# roots this close to lambda_hi for the index that just changed are the
# event we are leaving, not a new one
SELF_ROOT_TOL = 1e-9


@dataclass(frozen=True)
class Event:
    kind: str  # ACTIVATION | COEFFICIENT_ZERO | PATH_END
    index: int = -1

    def __str__(self):
        return self.kind if self.kind == "PATH_END" else f"{self.kind}({self.index})"

    @classmethod
    def parse(cls, text):
        if text == "PATH_END":
            return cls("PATH_END")
        kind, _, rest = text.partition("(")
        return cls(kind, int(rest.rstrip(")")))


@dataclass(frozen=True)
class PathSegment:
    lambda_hi: float
    lambda_lo: float
    model: ActiveModel
    intercept: np.ndarray
    slope: np.ndarray
    event_at_lo: Event

    def coefficients(self, lam, p):
        b = np.zeros(p)
        if len(self.model):
            b[list(self.model.support)] = self.intercept - lam * self.slope
        return b

    @property
    def midpoint(self):
        return 0.5 * (self.lambda_hi + self.lambda_lo)

    @property
    def sign_quadratic(self):
        """rho^t G^{-1} rho, minus the slope of ||beta||_1 in lambda."""
        return float(self.model.rho @ self.slope) if len(self.model) else 0.0


@dataclass(frozen=True)
class LassoPath:
    X: object
    y: np.ndarray
    tau: float
    lambda_min: float
    segments: tuple
    first_index: int
    reentries: int = 0
    ties: int = 0
    _lows: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # ascending lambda_lo for bisection
        object.__setattr__(self, "_lows", [s.lambda_lo for s in reversed(self.segments)])

    @property
    def breakpoints(self):
        """tau followed by every interior breakpoint, decreasing."""
        out = [self.tau]
        out += [s.lambda_lo for s in self.segments if s.event_at_lo.kind != "PATH_END"]
        return out

    def segment_at(self, lam):
        """Segment with lambda_lo < lam <= lambda_hi; lam == lambda_min maps to the last one."""
        if lam >= self.tau or lam < self.lambda_min:
            return None
        k = bisect.bisect_left(self._lows, lam) - 1
        k = max(k, 0)
        return self.segments[len(self.segments) - 1 - k]

    def evaluate(self, lam):
        return evaluate(self, lam)

    def coefficients(self, lam):
        if lam < self.lambda_min:
            raise OutOfRange(f"lambda {lam} below lambda_min {self.lambda_min}")
        seg = self.segment_at(lam)
        if seg is None:
            return np.zeros(self.X.p)
        return seg.coefficients(lam, self.X.p)


def compute_tau(X, y):
    X = as_design(X)
    y = as_response(y, X.n)
    tau = float(np.max(np.abs(X.values.T @ y)))
    if tau == 0.0:
        raise DegenerateProblem("X^t y = 0; the solution is zero for every lambda")
    return tau


def _affine(X, y, model):
    if not len(model):
        return np.zeros(0), np.zeros(0)
    f = gram_factorize(X, model.support)
    XT = X.columns(model.support)
    return gram_solve(f, XT.T @ y), gram_solve(f, model.rho)


def _next_event(X, y, model, a, d, lam_hi, just_changed):
    """Largest breakpoint strictly below lam_hi: (lam_drop, j_drop, lam_add, j_add, sign_add)."""
    Xv = X.values
    T = list(model.support)
    self_band = lam_hi * (1.0 - SELF_ROOT_TOL)

    lam_drop, j_drop = -np.inf, -1
    for pos, j in enumerate(T):
        if d[pos] == 0.0:
            continue
        root = a[pos] / d[pos]
        limit = self_band if j == just_changed else lam_hi
        if 0.0 < root < limit and root > lam_drop:
            lam_drop, j_drop = root, j

    # correlations c(lam) = u + lam * v
    if T:
        XT = Xv[:, T]
        u = Xv.T @ (y - XT @ a)
        v = Xv.T @ (XT @ d)
    else:
        u = Xv.T @ y
        v = np.zeros(X.p)
    inactive = np.ones(X.p, dtype=bool)
    inactive[T] = False

    lam_add, j_add, s_add = -np.inf, -1, 0
    for j in np.flatnonzero(inactive):
        limit = self_band if j == just_changed else lam_hi
        for s in (1, -1):
            # u_j + lam v_j = s lam
            den = s - v[j]
            if den == 0.0:
                continue
            root = u[j] / den
            if 0.0 < root < limit and root > lam_add:
                lam_add, j_add, s_add = root, int(j), s
    return lam_drop, j_drop, lam_add, j_add, s_add


def compute_path(X, y, lambda_min=None, lambda_min_factor=LAMBDA_MIN_FACTOR):
    """Follow the LASSO solution from tau down to lambda_min."""
    X = as_design(X)
    y = as_response(y, X.n)
    tau = compute_tau(X, y)
    if lambda_min is None:
        lambda_min = lambda_min_factor * tau
    if not 0.0 < lambda_min < tau:
        raise ValueError(f"lambda_min must lie in (0, tau={tau}), got {lambda_min}")

    c0 = X.values.T @ y
    j0 = int(np.argmax(np.abs(c0)))
    ties = 0
    if np.sum(np.abs(np.abs(c0) - tau) <= TIE_TOL * tau) > 1:
        ties += 1
        log.warning("several columns attain tau; activating %d first", j0)
    support, signs = [j0], {j0: int(np.sign(c0[j0]))}

    cap = 10 * X.p * X.n
    segments = []
    ever_active = {j0}
    reentries = 0
    lam_hi = tau
    just_changed = j0
    while True:
        if len(segments) >= cap:
            raise IterationCap(cap)
        model = ActiveModel(tuple(support), tuple(signs[j] for j in support))
        a, d = _affine(X, y, model)
        lam_drop, j_drop, lam_add, j_add, s_add = _next_event(
            X, y, model, a, d, lam_hi, just_changed
        )
        lam_next = max(lam_drop, lam_add)
        if lam_next <= lambda_min:
            segments.append(PathSegment(lam_hi, lambda_min, model, a, d, Event("PATH_END")))
            break

        if abs(lam_drop - lam_add) <= TIE_TOL * tau:
            ties += 1
            log.warning("drop of %d and activation of %d coincide at %.17g; dropping first",
                        j_drop, j_add, lam_next)
        if lam_drop >= lam_add - TIE_TOL * tau:
            event = Event("COEFFICIENT_ZERO", j_drop)
            lam_next = lam_drop
            support.remove(j_drop)
            del signs[j_drop]
            just_changed = j_drop
        else:
            event = Event("ACTIVATION", j_add)
            if j_add in ever_active:
                reentries += 1
            ever_active.add(j_add)
            bisect.insort(support, j_add)
            signs[j_add] = s_add
            just_changed = j_add
        segments.append(PathSegment(lam_hi, lam_next, model, a, d, event))
        lam_hi = lam_next

    return LassoPath(X, y, tau, float(lambda_min), tuple(segments), j0, reentries, ties)


def evaluate(path, lam):
    """LASSO solution at lam.

    A breakpoint belongs to the segment it closes from above, (lambda_lo, lambda_hi],
    so the returned model may carry a coefficient that is exactly zero there.
    """
    if lam < path.lambda_min:
        raise OutOfRange(f"lambda {lam} below lambda_min {path.lambda_min}")
    seg = path.segment_at(lam)
    if seg is None:
        b = np.zeros(path.X.p)
        return make_solution(path.X, path.y, b, lam, EMPTY_MODEL)
    return make_solution(path.X, path.y, seg.coefficients(lam, path.X.p), lam, seg.model)
