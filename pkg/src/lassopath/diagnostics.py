"""Fidelity/penalty quantities along a computed path, and audits of their shape.

Per segment, with r(lam) = y - X beta(lam), G = X_T^t X_T and w = X_T G^{-1} rho,

    r(lam) = (I - P_T) y + lam w,     ||w||^2 = rho^t G^{-1} rho,

so the squared residual, the l1 norm, theta and Phi are polynomials of degree
at most two on each segment.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySupport, OutOfRange, SpansBreakpoint
from .linalg import projection_residual

AUDIT_TOL = 1e-9
INF_RESIDUAL = 1e-300

CLAIMS = ("GAMMA_DECREASING", "RESIDUAL_INCREASING", "L1_NONINCREASING",
          "THETA_CONCAVE", "THETA_NONDECREASING")


@dataclass(frozen=True)
class DiagnosticsRow:
    lam: float
    l1_norm: float
    residual_sq: float
    gamma: float
    theta: float
    phi: float
    support_size: int


def row_at(path, lam):
    sol = path.evaluate(lam)
    l1, rsq = sol.l1_norm, sol.residual_sq
    phi = lam * l1
    gamma = math.inf if rsq < INF_RESIDUAL else phi / rsq
    return DiagnosticsRow(float(lam), l1, rsq, gamma, 0.5 * rsq + phi, phi, len(sol.model))


def parse_grid(text):
    """'log:COUNT', 'explicit:v1,v2,...' or 'midpoints'."""
    kind, _, arg = text.partition(":")
    if kind == "log":
        return ("log", int(arg))
    if kind == "explicit":
        return ("explicit", tuple(float(v) for v in arg.split(",") if v.strip()))
    if kind == "midpoints" and not arg:
        return ("midpoints",)
    raise ValueError(f"unknown grid spec {text!r}")


def grid_to_str(spec):
    if spec[0] == "log":
        return f"log:{spec[1]}"
    if spec[0] == "explicit":
        return "explicit:" + ",".join(repr(v) for v in spec[1])
    return "midpoints"


def grid_points(path, spec):
    """Increasing lambda values; LOG grids end exactly at tau."""
    if isinstance(spec, str):
        spec = parse_grid(spec)
    if spec[0] == "log":
        count = spec[1]
        if count < 1:
            raise ValueError("log grid needs at least one point")
        pts = np.geomspace(path.lambda_min, path.tau, count + 1)[1:]
        pts[-1] = path.tau
        return [float(v) for v in pts]
    if spec[0] == "explicit":
        pts = sorted(float(v) for v in spec[1])
        for v in pts:
            if v < path.lambda_min:
                raise OutOfRange(f"grid value {v} below lambda_min {path.lambda_min}")
        return pts
    return sorted(s.midpoint for s in path.segments)


def sample_curve(path, spec):
    return [row_at(path, lam) for lam in grid_points(path, spec)]


def theta(path, lam):
    return path.evaluate(lam).objective


def theta_derivative_check(path, lam, h):
    """Central-difference theta' against ||beta_lam||_1 inside one segment."""
    lo, hi = lam - h, lam + h
    if lo < path.lambda_min:
        raise OutOfRange(f"window reaches below lambda_min {path.lambda_min}")
    for bp in path.breakpoints:
        if lo <= bp < hi:
            raise SpansBreakpoint(f"[{lo}, {hi}] contains breakpoint {bp}")
    analytic = path.evaluate(lam).l1_norm
    numeric = (theta(path, hi) - theta(path, lo)) / (2 * h)
    if analytic == 0.0:
        rel = abs(numeric)
    else:
        rel = abs(numeric - analytic) / analytic
    return analytic, numeric, rel


@dataclass(frozen=True)
class ResidualIdentity:
    lhs: float
    rhs: float
    gap: float
    sign_term: float  # lam^2 ||X_T G^{-1} rho||^2
    complement: float  # ||(I - P_T) y||^2, zero when X_T spans R^n
    full_support: bool


def residual_identity_check(path, lam):
    seg = path.segment_at(lam)
    if seg is None or not len(seg.model):
        raise EmptySupport(f"no active variables at lambda = {lam}")
    X, y = path.X, path.y
    sol = path.evaluate(lam)
    lhs = sol.residual_sq
    w = X.columns(seg.model.support) @ seg.slope
    sign_term = lam * lam * float(w @ w)
    _, perp = projection_residual(X, seg.model.support, y)
    complement = float(perp @ perp)
    rhs = sign_term + complement
    return ResidualIdentity(lhs, rhs, lhs - rhs, sign_term, complement,
                            len(seg.model) == X.n)


@dataclass(frozen=True)
class Probe:
    applicable: bool
    lambdas: tuple = ()
    gammas: tuple = ()
    reason: str = ""

    @property
    def scaled(self):
        """Gamma * lambda, roughly constant once the support is full."""
        return tuple(g * l for g, l in zip(self.gammas, self.lambdas))


def gamma_small_lambda_probe(path, K=10):
    X = path.X
    if np.linalg.matrix_rank(X.values) < X.n:
        return Probe(False, reason="design lacks full row rank; residual does not vanish")
    lams, gams = [], []
    for k in range(K + 1):
        lam = path.lambda_min * 2.0**k
        if lam >= path.tau:
            break
        lams.append(lam)
        gams.append(row_at(path, lam).gamma)
    return Probe(True, tuple(lams), tuple(gams))


@dataclass
class ClaimResult:
    verdict: str
    worst_violation: float
    at_lambda: float


@dataclass
class MonotonicityAudit:
    grid: list
    claims: dict
    grid_spec: str = ""
    tolerance: float = AUDIT_TOL
    gamma_at_tau: float = field(default=float("nan"))

    @property
    def passed(self):
        return all(c.verdict == "PASS" for c in self.claims.values())

    def to_dict(self):
        return {
            "claims": {k: {"verdict": c.verdict, "worst_violation": c.worst_violation,
                           "at_lambda": c.at_lambda} for k, c in self.claims.items()},
            "grid_spec": self.grid_spec,
            "tolerances": {"audit_tol": self.tolerance},
        }


def _worst_increase(lams, vals, at_right=True):
    """Largest relative increase vals[i+1] - vals[i] along the grid."""
    worst, where = 0.0, float("nan")
    for i in range(len(vals) - 1):
        a, b = vals[i], vals[i + 1]
        scale = max(abs(a), abs(b), np.finfo(float).tiny)
        if math.isinf(scale):
            continue
        v = (b - a) / scale
        if v > worst or math.isnan(where):
            worst, where = v, lams[i + 1] if at_right else lams[i]
    return worst, where


def run_audit(path, spec, tol=AUDIT_TOL):
    """Check the five shape claims on a grid; violations are relative to local magnitude."""
    spec_str = spec if isinstance(spec, str) else grid_to_str(spec)
    lams = grid_points(path, spec)
    rows = [row_at(path, l) for l in lams]
    gam = [r.gamma for r in rows]
    rsq = [r.residual_sq for r in rows]
    l1 = [r.l1_norm for r in rows]
    th = [r.theta for r in rows]

    results = {}
    results["GAMMA_DECREASING"] = _worst_increase(lams, gam)
    results["RESIDUAL_INCREASING"] = _worst_increase(lams, [-v for v in rsq])
    results["L1_NONINCREASING"] = _worst_increase(lams, l1)
    results["THETA_NONDECREASING"] = _worst_increase(lams, [-v for v in th])
    slopes = [(th[i + 1] - th[i]) / (lams[i + 1] - lams[i]) for i in range(len(lams) - 1)]
    results["THETA_CONCAVE"] = _worst_increase(lams[1:], slopes)

    claims = {}
    for name in CLAIMS:
        worst, where = results[name]
        if math.isnan(where):
            worst = 0.0
        claims[name] = ClaimResult("PASS" if worst <= tol else "FAIL", float(worst), float(where))
    gamma_tau = row_at(path, path.tau).gamma
    return MonotonicityAudit(lams, claims, spec_str, tol, gamma_tau)
