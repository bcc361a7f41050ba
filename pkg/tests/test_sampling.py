import numpy as np
import pytest

from pwcvx import OraclePiece, PiecewiseFunction, PlqPiece, Polyhedron, builtin
from pwcvx.corpus import Q1, Q2, oracle_piece
from pwcvx.sampling import (
    KERNEL_BACKEND,
    Counterexample,
    FdFail,
    FdPass,
    Pass,
    SampleConfig,
    SamplingError,
    Schedule,
    estimate_boundary_limit,
    evaluate_many,
    fd_gradient_check,
    midpoint_convexity_test,
)
from pwcvx.sampling import _kernels_py


def _random_system(rng, m=5, n=3, k=200):
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m)
    E = rng.normal(size=(1, n))
    e = rng.normal(size=1)
    return A, b, E, e, rng.normal(size=(k, n))


@pytest.mark.skipif(KERNEL_BACKEND != "cython", reason="compiled kernels not built")
def test_compiled_kernels_match_numpy():
    from pwcvx.sampling import _kernels

    rng = np.random.default_rng(0)
    A, b, E, e, X = _random_system(rng)
    for args in [(A, b, E, e, X, 1e-9), (A, b, E[:0], e[:0], X, 0.0)]:
        got = np.asarray(_kernels.polyhedron_mask(*args), dtype=bool)
        assert np.array_equal(got, _kernels_py.polyhedron_mask(*args))
    Q = rng.normal(size=(3, 3))
    Q = Q + Q.T
    c = rng.normal(size=3)
    assert np.allclose(_kernels.quadratic_values(Q, c, 0.5, X), _kernels_py.quadratic_values(Q, c, 0.5, X))
    fx, fy, fz = rng.normal(size=(3, 100))
    fx[3] = np.inf
    got = np.asarray(_kernels.violation_indices(fx, fy, fz, 0.5, 1e-7))
    assert np.array_equal(got, _kernels_py.violation_indices(fx, fy, fz, 0.5, 1e-7))


def test_evaluate_many_matches_pointwise():
    f = builtin("ex-7.3")
    X = np.random.default_rng(1).uniform(-3, 3, size=(300, 2))
    vals = evaluate_many(f, X)
    from pwcvx.pieces import evaluate_float

    assert np.allclose(vals, [evaluate_float(f, x) for x in X])


def test_midpoint_test_on_corpus():
    assert isinstance(midpoint_convexity_test(builtin("abs-x-2d")), Pass)
    assert isinstance(midpoint_convexity_test(builtin("paper-norm")), Pass)
    out = midpoint_convexity_test(builtin("ex-7.2"))
    assert isinstance(out, Counterexample)
    assert out.violation.exact and out.violation.margin > 0


def test_midpoint_test_is_deterministic():
    a = midpoint_convexity_test(builtin("neg-abs-2d"), SampleConfig(seed=7))
    b = midpoint_convexity_test(builtin("neg-abs-2d"), SampleConfig(seed=7))
    assert a == b


def test_exact_mode():
    cfg = SampleConfig(n_samples=200, tolerance=0, exact=True)
    assert isinstance(midpoint_convexity_test(builtin("abs-x-2d"), cfg), Pass)
    assert isinstance(midpoint_convexity_test(builtin("neg-abs-2d"), cfg), Counterexample)


def test_sampling_error_on_thin_domain():
    f = PiecewiseFunction((PlqPiece.affine([0, 0], 0, Polyhedron(2, [], [((1, 0), 0)])),))
    with pytest.raises(SamplingError):
        midpoint_convexity_test(f, SampleConfig(n_samples=100))


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(n_samples=0)
    with pytest.raises(ValueError):
        SampleConfig(tolerance=0)
    with pytest.raises(ValueError):
        SampleConfig(bounding_box=([0, 0], [-1, 1])).box(2)


def test_fd_gradient_check():
    f2 = oracle_piece("paper-norm/f2", Q2)
    assert isinstance(fd_gradient_check(f2, [(-1, 1), (-2, 3)]), FdPass)
    bad = OraclePiece(Q1, lambda p: p[0] ** 2, lambda p: (p[0], 0.0), "bad")
    assert isinstance(fd_gradient_check(bad, [(1, 1)]), FdFail)
    skipped = fd_gradient_check(f2, [(0, 1)])
    assert skipped.checked == 0 and len(skipped.skipped) == 1


def test_boundary_limit_paper_norm():
    f = builtin("paper-norm")
    est = estimate_boundary_limit(f.pieces[1], (0, 1), (-1, 0))
    assert est.converged and np.allclose(est.value, [1, 1], atol=1e-6)
    est = estimate_boundary_limit(f.pieces[3], (1, 0), (0, -1))
    assert est.converged and np.allclose(est.value, [1, 1], atol=1e-6)
    exact = estimate_boundary_limit(f.pieces[0], (0, 1), (1, 0))
    assert exact.exact == (1, 1)


def test_boundary_limit_detects_divergence():
    blowup = OraclePiece(Q1, lambda p: 0.0, lambda p: (1.0 / p[0], 0.0), "blowup")
    assert not estimate_boundary_limit(blowup, (0, 1), (1, 0), Schedule()).converged
    with pytest.raises(ValueError):
        estimate_boundary_limit(blowup, (0, 1), (0, 0))
