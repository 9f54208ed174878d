import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lassopath import io
from lassopath.errors import DegenerateProblem, OutOfRange
from lassopath.gpc import check_gpc
from lassopath.homotopy import compute_path, compute_tau, evaluate
from lassopath.kkt import Status, certify_optimality
from lassopath.oracle import CombinatorialSolver, proximal_solve

from conftest import gaussian_batch


def test_identity_segments(identity_path):
    P = identity_path
    assert P.tau == 3.0
    first, second = P.segments
    assert (first.lambda_hi, first.lambda_lo) == (3.0, 1.0)
    assert first.model.support == (0,) and str(first.event_at_lo) == "ACTIVATION(1)"
    np.testing.assert_allclose([first.intercept[0], first.slope[0]], [3.0, 1.0])
    assert (second.lambda_hi, second.lambda_lo) == (1.0, 0.01)
    assert second.model.support == (0, 1) and str(second.event_at_lo) == "PATH_END"
    for lam in (0.3, 0.77):
        np.testing.assert_allclose(P.coefficients(lam), [3 - lam, 1 - lam])


def test_negative_response_sign():
    P = compute_path(np.eye(2), np.array([3.0, -1.0]), lambda_min=0.01)
    assert P.segments[1].model.signs == (1, -1)
    np.testing.assert_allclose(P.coefficients(0.25), [2.75, -0.75])


def test_evaluate_identity(identity_path):
    sol = evaluate(identity_path, 2.0)
    np.testing.assert_allclose(sol.coefficients, [1.0, 0.0])
    assert sol.objective == pytest.approx(0.5 * (4 + 1) + 2.0)
    at_tau = evaluate(identity_path, 3.0)
    np.testing.assert_array_equal(at_tau.coefficients, 0.0)
    assert at_tau.objective == pytest.approx(5.0)
    with pytest.raises(OutOfRange):
        evaluate(identity_path, 0.001)


def test_breakpoint_belongs_to_segment_it_closes(identity_path):
    sol = evaluate(identity_path, 1.0)
    assert sol.model.support == (0, 1)
    np.testing.assert_allclose(sol.coefficients, [2.0, 0.0])
    assert identity_path.segment_at(1.0 + 1e-12).model.support == (0,)


def test_tau(identity, seed42):
    assert compute_tau(*identity) == 3.0
    with pytest.raises(DegenerateProblem):
        compute_tau(np.eye(2), np.zeros(2))


def test_tau_by_bisection(seed42):
    X, y = seed42
    # the default 1e-8 KKT band would accept b = 0 slightly below tau
    solver = CombinatorialSolver(X, y, kkt_tol=1e-14)
    lo, hi = 0.1, 100.0
    assert np.any(solver.solve(lo).coefficients) and not np.any(solver.solve(hi).coefficients)
    while hi - lo > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if np.any(np.abs(solver.solve(mid).coefficients) > 1e-10):
            lo = mid
        else:
            hi = mid
    assert compute_tau(X, y) == pytest.approx(hi, rel=1e-10)


def test_seed42_against_proximal(seed42, seed42_path):
    X, y = seed42
    P = seed42_path
    for lam in np.geomspace(1e-3 * P.tau, P.tau, 52)[1:-1]:
        ref = proximal_solve(X, y, lam).coefficients
        assert np.max(np.abs(P.coefficients(lam) - ref)) <= 1e-6


def test_midpoints_certify(seed42, seed42_path):
    X, y = seed42
    for seg in seed42_path.segments:
        sol = evaluate(seed42_path, seg.midpoint)
        assert certify_optimality(X, y, sol.coefficients, seg.midpoint).status is Status.VALID


@pytest.fixture(scope="module")
def batch_paths():
    return [compute_path(i.X, i.y) for i in gaussian_batch(30, 10, 25)]


def test_segments_abut_and_are_continuous(batch_paths):
    for P in batch_paths:
        assert P.segments[0].lambda_hi == P.tau
        for upper, lower in zip(P.segments, P.segments[1:]):
            assert upper.lambda_lo == lower.lambda_hi
            lam = upper.lambda_lo
            p = P.X.p
            np.testing.assert_allclose(upper.coefficients(lam, p), lower.coefficients(lam, p),
                                       atol=1e-8)
        assert all(len(s.model) <= P.X.n for s in P.segments)


def test_l1_slope_matches_finite_difference(batch_paths):
    for P in batch_paths[:10]:
        for seg in P.segments:
            h = 1e-3 * (seg.lambda_hi - seg.lambda_lo)
            m = seg.midpoint
            fd = (np.abs(P.coefficients(m + h)).sum() - np.abs(P.coefficients(m - h)).sum()) / (2 * h)
            assert fd == pytest.approx(-seg.sign_quadratic, rel=1e-6)
            assert -seg.sign_quadratic < 0


def test_l1_and_residual_monotone(batch_paths):
    for P in batch_paths:
        lams = np.geomspace(P.lambda_min, P.tau, 200)
        l1 = [np.abs(P.coefficients(l)).sum() for l in lams]
        res = [evaluate(P, l).residual_sq for l in lams]
        assert all(b <= a * (1 + 1e-12) + 1e-15 for a, b in zip(l1, l1[1:]))
        assert all(b >= a * (1 - 1e-9) for a, b in zip(res, res[1:]))


def test_drop_events_occur_and_stay_optimal(batch_paths):
    drops = [(P, s) for P in batch_paths for s in P.segments
             if s.event_at_lo.kind == "COEFFICIENT_ZERO"]
    assert drops, "batch expected to contain at least one coefficient crossing zero"
    for P, s in drops:
        below = P.segment_at(s.lambda_lo * (1 - 1e-9))
        assert s.event_at_lo.index not in below.model.support
        lam = 0.5 * (below.lambda_hi + below.lambda_lo)
        assert certify_optimality(P.X, P.y, P.coefficients(lam), lam).is_valid


def test_uniqueness_against_combinatorial():
    rng = np.random.default_rng(11)
    # |zeta| can land inside the 1e-9 band by chance among ~10^6 pairs
    passing = [i for i in gaussian_batch(6, 4, 8, offset=500) if check_gpc(i.X).passed]
    assert len(passing) >= 4
    for inst in passing:
        P = compute_path(inst.X, inst.y)
        solver = CombinatorialSolver(inst.X, inst.y)
        for lam in P.tau * 10 ** rng.uniform(-3, 0, 20):
            sol = solver.solve(lam)
            assert not sol.multiple_optima
            np.testing.assert_allclose(P.coefficients(lam), sol.coefficients, atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 7), extra=st.integers(0, 8))
def test_random_paths_certify(seed, n, extra):
    rng = np.random.default_rng(seed)
    p = n + extra
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    P = compute_path(X, y)
    for seg in P.segments:
        cert = certify_optimality(X, y, P.coefficients(seg.midpoint), seg.midpoint)
        assert cert.is_valid
        assert np.all(np.abs(cert.g) <= 1 + 1e-8)
        beta = P.coefficients(seg.midpoint)
        on = np.abs(beta) > 0
        np.testing.assert_allclose(cert.g[on], np.sign(beta[on]), atol=1e-8)


def test_json_round_trip(seed42, seed42_path):
    d = io.path_to_dict(seed42_path)
    back = io.path_from_dict(d, *seed42)
    assert io.path_to_dict(back) == d
    for lam in (0.05, 1.0, 3.3):
        np.testing.assert_array_equal(back.coefficients(lam), seed42_path.coefficients(lam))


def test_lambda_min_validation(identity):
    with pytest.raises(ValueError):
        compute_path(*identity, lambda_min=5.0)
