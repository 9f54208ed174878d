"""General position checks on a design matrix.

For a support S (column indices, |S| <= n, X_S full column rank) and signs
eps, let v = X_S (X_S^t X_S)^{-1} eps and q = eps^t (X_S^t X_S)^{-1} eps = ||v||^2.
For two items with S != S' the condition asks

    zeta = q - q' != 0        and        ||v - v'||^2 != |zeta|.

If one support contains the other and the signs agree on the smaller one,
<v, v'> equals the smaller quadratic form, hence ||v - v'||^2 = |zeta| for
every X. Those pairs are reported as structural degeneracies rather than as
violations; ``pair_check`` still flags them.
"""
import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CombinatorialOverflow, RankDeficient
from .linalg import RANK_TOL, as_design, gram_factorize, gram_solve

GPC_TOL = 1e-9
NEAR_TOL = 1e-6
DEFAULT_BUDGET = 10**7
DEFAULT_SAMPLES = 100_000


class Inequation(str, enum.Enum):
    ZETA_ZERO = "ZETA_ZERO"
    ETA_EQUALITY = "ETA_EQUALITY"


@dataclass(frozen=True)
class SupportSignPair:
    S: tuple
    eps_S: tuple
    Sp: tuple
    eps_Sp: tuple

    def __post_init__(self):
        if tuple(self.S) == tuple(self.Sp):
            raise ValueError("a pair needs two distinct supports")
        if len(self.S) != len(self.eps_S) or len(self.Sp) != len(self.eps_Sp):
            raise ValueError("sign vector length does not match its support")

    def swapped(self):
        return SupportSignPair(self.Sp, self.eps_Sp, self.S, self.eps_S)

    @property
    def nested_consistent(self):
        return _nested_consistent(self.S, self.eps_S, self.Sp, self.eps_Sp)


def _nested_consistent(S, e, Sp, ep):
    a, b = dict(zip(S, e)), dict(zip(Sp, ep))
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    return all(j in big and big[j] == s for j, s in small.items())


@dataclass(frozen=True)
class PairWitness:
    zeta: float
    eta_norm_sq: float
    cross: float  # eps_S^t G_S^{-1} X_S^t X_S' G_S'^{-1} eps_S', shown but never flagged
    q_S: float
    flags: tuple

    def gaps(self):
        return {
            Inequation.ZETA_ZERO: abs(self.zeta),
            Inequation.ETA_EQUALITY: abs(self.eta_norm_sq - abs(self.zeta)),
        }


def _item(X, S, eps):
    f = gram_factorize(X, S)
    e = np.asarray(eps, dtype=float)
    w = gram_solve(f, e)
    return X.columns(f.support) @ w, float(e @ w)


def pair_check(X, pair, tol=GPC_TOL):
    X = as_design(X)
    v, q = _item(X, pair.S, pair.eps_S)
    vp, qp = _item(X, pair.Sp, pair.eps_Sp)
    zeta = q - qp
    diff = v - vp
    eta = float(diff @ diff)
    flags = []
    if abs(zeta) <= tol:
        flags.append(Inequation.ZETA_ZERO)
    if abs(eta - abs(zeta)) <= tol:
        flags.append(Inequation.ETA_EQUALITY)
    return PairWitness(zeta, eta, float(v @ vp), q, tuple(flags))


def _sign_vectors(k):
    return list(itertools.product((-1, 1), repeat=k))


def support_sign_items(p, max_size):
    """(S, eps) for nonempty S, lexicographic by size, support, then signs."""
    for k in range(1, max_size + 1):
        signs = _sign_vectors(k)
        for S in itertools.combinations(range(p), k):
            for eps in signs:
                yield S, eps


def count_items(p, max_size):
    return sum(math.comb(p, k) * 2**k for k in range(1, max_size + 1))


def count_pairs(p, max_size):
    """Unordered pairs of items whose supports differ."""
    N = count_items(p, max_size)
    same = sum(math.comb(p, k) * math.comb(2**k, 2) for k in range(1, max_size + 1))
    return N * (N - 1) // 2 - same


def enumerate_support_signs(n, p, max_size=None, budget=DEFAULT_BUDGET):
    """Stream every unordered pair of (S, eps) items with distinct supports."""
    max_size = min(n, p) if max_size is None else max_size
    if max_size > n:
        raise ValueError("max_size cannot exceed n")
    total = count_pairs(p, max_size)
    if total > budget:
        raise CombinatorialOverflow(total, budget)

    def gen():
        items = list(support_sign_items(p, max_size))
        for i, (S, e) in enumerate(items):
            for Sp, ep in items[i + 1:]:
                if S != Sp:
                    yield SupportSignPair(S, e, Sp, ep)

    return gen()


@dataclass
class Violation:
    pair: SupportSignPair
    inequation: Inequation
    gap: float

    def key(self):
        return (self.inequation.value, len(self.pair.S), self.pair.S, self.pair.eps_S,
                len(self.pair.Sp), self.pair.Sp, self.pair.eps_Sp)

    def to_dict(self):
        return {
            "S": list(self.pair.S), "Sprime": list(self.pair.Sp),
            "epsS": list(self.pair.eps_S), "epsSprime": list(self.pair.eps_Sp),
            "inequation": self.inequation.value, "gap": self.gap,
        }


@dataclass
class GpcReport:
    mode: str  # EXHAUSTIVE | SAMPLED
    pairs_checked: int
    skipped_rank_deficient: int
    violations: list
    tolerance: float = GPC_TOL
    seed: Optional[int] = None
    sample_count: Optional[int] = None
    structural: int = 0
    near_violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        out = {
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "skipped_rank_deficient": self.skipped_rank_deficient,
            "violations": [v.to_dict() for v in self.violations],
            "tolerance": self.tolerance,
            "structural_degeneracies": self.structural,
            "near_violations": [v.to_dict() for v in self.near_violations],
        }
        if self.mode == "SAMPLED":
            out["seed"] = self.seed
            out["sample_count"] = self.sample_count
        return out


class _Table:
    """Per-item vectors v, quadratic forms q and bit masks for one design."""

    def __init__(self, X, max_size):
        self.items, V, Q, masks, pos, ok = [], [], [], [], [], []
        cache = {}
        for S, eps in support_sign_items(X.p, max_size):
            if S not in cache:
                try:
                    cache[S] = gram_factorize(X, S)
                except RankDeficient:
                    cache[S] = None
            f = cache[S]
            self.items.append((S, eps))
            masks.append(sum(1 << j for j in S))
            pos.append(sum(1 << j for j, s in zip(S, eps) if s > 0))
            if f is None:
                ok.append(False)
                V.append(np.zeros(X.n))
                Q.append(0.0)
                continue
            e = np.asarray(eps, dtype=float)
            w = gram_solve(f, e)
            ok.append(True)
            V.append(X.columns(S) @ w)
            Q.append(float(e @ w))
        self.V = np.array(V)
        self.Q = np.array(Q)
        self.mask = np.array(masks, dtype=np.int64)
        self.pos = np.array(pos, dtype=np.int64)
        self.ok = np.array(ok)

    def evaluate(self, I, J):
        zeta = self.Q[I] - self.Q[J]
        diff = self.V[I] - self.V[J]
        eta = np.einsum("ij,ij->i", diff, diff)
        mi, mj = self.mask[I], self.mask[J]
        pi, pj = self.pos[I], self.pos[J]
        j_in_i = (mj & ~mi) == 0
        i_in_j = (mi & ~mj) == 0
        nested = (j_in_i & ((pi & mj) == pj)) | (i_in_j & ((pj & mi) == pi))
        return zeta, eta, nested


def _scan(table, I, J, tol):
    zeta, eta, nested = table.evaluate(I, J)
    gz = np.abs(zeta)
    ge = np.abs(eta - gz)
    out = {"viol": [], "near": [], "structural": int(np.count_nonzero(nested & (ge <= tol)))}
    for gap, ineq, mask_extra in ((gz, Inequation.ZETA_ZERO, None),
                                  (ge, Inequation.ETA_EQUALITY, ~nested)):
        hit = gap <= NEAR_TOL if mask_extra is None else (gap <= NEAR_TOL) & mask_extra
        for k in np.flatnonzero(hit):
            bucket = "viol" if gap[k] <= tol else "near"
            out[bucket].append((int(I[k]), int(J[k]), ineq, float(gap[k])))
    return out


def _violation(table, i, j, ineq, gap):
    (S, e), (Sp, ep) = table.items[i], table.items[j]
    return Violation(SupportSignPair(S, e, Sp, ep), ineq, gap)


def check_gpc(X, budget=DEFAULT_BUDGET, seed=None, tol=GPC_TOL, max_size=None,
              sample_count=DEFAULT_SAMPLES, exhaustive=False, jobs=1):
    """Check every pair if the enumeration fits the budget, otherwise a uniform sample.

    ``exhaustive=True`` turns budget overflow into CombinatorialOverflow
    instead of falling back to sampling.
    """
    X = as_design(X)
    max_size = min(X.n, X.p) if max_size is None else max_size
    total = count_pairs(X.p, max_size)
    if total > budget and exhaustive:
        raise CombinatorialOverflow(total, budget)
    if total > budget:
        return _check_sampled(X, max_size, seed, tol, sample_count)

    table = _Table(X, max_size)
    N = len(table.items)
    masks = table.mask
    chunks = []
    skipped = 0
    good = table.ok
    for i in range(N - 1):
        J = np.arange(i + 1, N)
        J = J[masks[J] != masks[i]]
        if not good[i]:
            skipped += len(J)
            continue
        bad = ~good[J]
        skipped += int(np.count_nonzero(bad))
        J = J[~bad]
        if len(J):
            chunks.append((np.full(len(J), i), J))

    def work(chunk):
        return _scan(table, chunk[0], chunk[1], tol)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(work, chunks))
    else:
        results = [work(c) for c in chunks]
    checked = sum(len(c[0]) for c in chunks)
    return _merge(table, results, "EXHAUSTIVE", checked, skipped, tol)


def _merge(table, results, mode, checked, skipped, tol, **kw):
    viol = [_violation(table, *v) for r in results for v in r["viol"]]
    near = [_violation(table, *v) for r in results for v in r["near"]]
    viol.sort(key=Violation.key)
    near.sort(key=Violation.key)
    structural = sum(r["structural"] for r in results)
    return GpcReport(mode, checked, skipped, viol, tol, structural=structural,
                     near_violations=near, **kw)


def _draw_items(rng, p, cum, count):
    """count random (S, eps) items; S has size k with probability ~ C(p,k) 2^k."""
    ks = np.searchsorted(cum, rng.random(count), side="right") + 1
    order = np.argsort(rng.random((count, p)), axis=1)
    signs = np.where(rng.random((count, len(cum))) < 0.5, -1, 1)
    return [(tuple(sorted(order[i, :k].tolist())), tuple(signs[i, :k].tolist()))
            for i, k in enumerate(ks)]


def _batch_items(X, new):
    """(v, q) per item, or None when X_S fails the rank test; batched by support size."""
    out = {}
    by_size = {}
    for it in new:
        by_size.setdefault(len(it[0]), []).append(it)
    for k, group in by_size.items():
        Xs = X.values[:, np.array([S for S, _ in group])].transpose(1, 0, 2)  # (m, n, k)
        E = np.array([e for _, e in group], dtype=float)
        if k > X.n:
            out.update(dict.fromkeys(group))
            continue
        sv = np.linalg.svd(Xs, compute_uv=False)
        ok = sv[:, -1] > RANK_TOL * sv[:, 0]
        G = np.einsum("mik,mil->mkl", Xs[ok], Xs[ok])
        W = np.linalg.solve(G, E[ok][..., None])[..., 0]
        V = np.einsum("mik,mk->mi", Xs[ok], W)
        Q = np.einsum("mk,mk->m", E[ok], W)
        it_ok = iter(range(len(V)))
        for it, good in zip(group, ok):
            if good:
                i = next(it_ok)
                out[it] = (V[i], float(Q[i]))
            else:
                out[it] = None
    return out


def _check_sampled(X, max_size, seed, tol, sample_count, block=4096):
    # items are drawn uniformly from the enumeration; same-support draws are redrawn
    rng = np.random.default_rng(seed)
    sizes = np.array([math.comb(X.p, k) * 2.0**k for k in range(1, max_size + 1)])
    cum = np.cumsum(sizes / sizes.sum())
    cum[-1] = 1.0
    items = {}
    viol, near = [], []
    checked = skipped = structural = 0
    drawn = 0
    while drawn < sample_count:
        A = _draw_items(rng, X.p, cum, block)
        B = _draw_items(rng, X.p, cum, block)
        items.update(_batch_items(X, {it for it in A + B if it not in items}))
        for a, b in zip(A, B):
            if drawn == sample_count:
                break
            if a[0] == b[0]:
                continue
            drawn += 1
            ia, ib = items[a], items[b]
            if ia is None or ib is None:
                skipped += 1
                continue
            checked += 1
            zeta = ia[1] - ib[1]
            diff = ia[0] - ib[0]
            gaps = {Inequation.ZETA_ZERO: abs(zeta),
                    Inequation.ETA_EQUALITY: abs(float(diff @ diff) - abs(zeta))}
            for ineq, gap in gaps.items():
                if gap > NEAR_TOL:
                    continue
                pair = SupportSignPair(a[0], a[1], b[0], b[1])
                if ineq is Inequation.ETA_EQUALITY and pair.nested_consistent:
                    structural += gap <= tol
                    continue
                (viol if gap <= tol else near).append(Violation(pair, ineq, gap))
    viol.sort(key=Violation.key)
    near.sort(key=Violation.key)
    return GpcReport("SAMPLED", checked, skipped, viol, tol, seed=seed,
                     sample_count=sample_count, structural=int(structural),
                     near_violations=near)
