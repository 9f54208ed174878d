"""Independent single-lambda solvers used to check the homotopy path.

``proximal_solve`` is (accelerated) proximal gradient, stopped on the KKT
certificate. ``exact_combinatorial_solve`` enumerates every (support, sign)
pair with |S| <= n and keeps the candidates that certify optimality; it is
exponential in p and capped accordingly.
"""
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotConverged, ProblemTooLarge, RankDeficient
from .kkt import EMPTY_MODEL, KKT_TOL, ActiveModel, certify_optimality, make_solution
from .linalg import as_design, as_response, gram_factorize, gram_solve

MAX_COMBINATORIAL_P = 12


@dataclass(frozen=True)
class ProxConfig:
    step: float = None  # defaults to 1 / sigma_max(X)^2
    max_iter: int = 200_000
    stop_kkt_tol: float = 1e-10
    acceleration: bool = True
    check_every: int = 10


def soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def proximal_solve(X, y, lam, cfg=None):
    if lam <= 0:
        raise ValueError("lambda must be positive")
    cfg = cfg or ProxConfig()
    X = as_design(X)
    y = as_response(y, X.n)
    A = X.values
    step = cfg.step
    if step is None:
        step = 1.0 / np.linalg.norm(A, 2) ** 2
    if step <= 0:
        raise ValueError("step must be positive")

    Aty = A.T @ y
    gram = A.T @ A
    b = np.zeros(X.p)
    z = b.copy()
    t = 1.0
    best = None
    for it in range(cfg.max_iter + 1):
        if it % cfg.check_every == 0:
            cert = certify_optimality(X, y, b, lam, kkt_tol=cfg.stop_kkt_tol)
            if best is None or cert.violation < best[0].violation:
                best = (cert, b.copy())
            if cert.violation <= cfg.stop_kkt_tol:
                return make_solution(X, y, b, lam, cert.model, cert)
        b_new = soft_threshold(z - step * (gram @ z - Aty), step * lam)
        if cfg.acceleration:
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            # adaptive restart keeps the momentum from overshooting
            if (z - b_new) @ (b_new - b) > 0:
                t_new, z = 1.0, b_new
            else:
                z = b_new + ((t - 1.0) / t_new) * (b_new - b)
            t = t_new
        else:
            z = b_new
        b = b_new
    raise NotConverged(cfg.max_iter, best[0])


def _sign_matrix(k):
    """All 2^k sign vectors as columns, lexicographic with -1 before +1."""
    if k == 0:
        return np.zeros((0, 1))
    return np.array(list(itertools.product((-1.0, 1.0), repeat=k))).T


class CombinatorialSolver:
    """Brute force over (S, rho); per-support algebra is cached across lambdas."""

    def __init__(self, X, y, max_p=MAX_COMBINATORIAL_P, kkt_tol=KKT_TOL):
        X = as_design(X)
        if X.p > max_p:
            raise ProblemTooLarge(f"p = {X.p} exceeds combinatorial cap {max_p}")
        self.X, self.y, self.kkt_tol = X, as_response(y, X.n), kkt_tol
        self.blocks = []
        for k in range(1, min(X.n, X.p) + 1):
            R = _sign_matrix(k)
            for S in itertools.combinations(range(X.p), k):
                try:
                    f = gram_factorize(X, S)
                except RankDeficient:
                    continue
                XS = X.columns(S)
                a = gram_solve(f, XS.T @ self.y)
                D = np.column_stack([gram_solve(f, R[:, i]) for i in range(R.shape[1])])
                self.blocks.append((S, R, a, D))

    def candidates(self, lam):
        """Every sign-consistent (S, rho) whose candidate certifies VALID."""
        X, y = self.X, self.y
        out = []
        zero_cert = certify_optimality(X, y, np.zeros(X.p), lam, self.kkt_tol)
        if zero_cert.is_valid:
            out.append((EMPTY_MODEL, np.zeros(X.p), zero_cert))
        for S, R, a, D in self.blocks:
            B = a[:, None] - lam * D
            ok = np.all(np.sign(B) == R, axis=0)
            for i in np.flatnonzero(ok):
                b = np.zeros(X.p)
                b[list(S)] = B[:, i]
                cert = certify_optimality(X, y, b, lam, self.kkt_tol)
                if cert.is_valid:
                    model = ActiveModel(S, tuple(int(s) for s in R[:, i]))
                    out.append((model, b, cert))
        return out

    def solve(self, lam):
        if lam <= 0:
            raise ValueError("lambda must be positive")
        X, y = self.X, self.y
        found = self.candidates(lam)
        if not found:
            raise NotConverged(0, certify_optimality(X, y, np.zeros(X.p), lam))

        def key(item):
            model, b, _ = item
            return (make_solution(X, y, b, lam, model).objective, len(model), model.support)

        model, b, cert = min(found, key=key)
        return make_solution(X, y, b, lam, model, cert, multiple_optima=len(found) > 1)


def exact_combinatorial_solve(X, y, lam, max_p=MAX_COMBINATORIAL_P):
    return CombinatorialSolver(X, y, max_p).solve(lam)


def min_l1_fiber(X, target, tol=1e-10):
    """min ||w||_1 subject to X w = target, by enumerating supports of size <= n.

    Returns (value, w). Vertices of the underlying LP have at most n nonzeros,
    so enumeration over full-rank supports with an exact fit is exhaustive.
    """
    X = as_design(X)
    target = np.asarray(target, dtype=float)
    scale = max(np.linalg.norm(target), 1.0)
    best = (0.0, np.zeros(X.p)) if np.linalg.norm(target) <= tol * scale else None
    for k in range(1, min(X.n, X.p) + 1):
        for S in itertools.combinations(range(X.p), k):
            try:
                f = gram_factorize(X, S)
            except RankDeficient:
                continue
            XS = X.columns(S)
            wS = gram_solve(f, XS.T @ target)
            if np.linalg.norm(XS @ wS - target) > tol * scale:
                continue
            val = float(np.abs(wS).sum())
            if best is None or val < best[0]:
                w = np.zeros(X.p)
                w[list(S)] = wS
                best = (val, w)
    return best
