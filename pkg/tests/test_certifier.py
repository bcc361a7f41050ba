from fractions import Fraction as F

import pytest

from instances import random_tiling
from pwcvx import (
    CertifyOptions,
    Convex,
    Fails,
    HoldsEverywhere,
    HoldsExceptPointsInE,
    Inconclusive,
    NotConvex,
    PiecewiseFunction,
    PlqPiece,
    Polyhedron,
    builtin,
    certify,
    check_gradient_limits,
    check_gradient_matching,
    check_subdiff_intersection_on_face,
    disprove,
    enumerate_overlap_faces,
    evaluate,
    verdict_to_json,
)
from pwcvx.certifier import GradFails, GradHolds, LimitsHold, certify_1d, intersection_point
from pwcvx.corpus import EXPECTED, Q1, Q2, Q3, Q4, names
from pwcvx.exact import CapabilityError
from pwcvx.exact.numbers import lerp
from pwcvx.polyhedra import PolyCone
from pwcvx.sampling import Pass, SampleConfig, midpoint_convexity_test

QUADS = [Q1, Q2, Q3, Q4]


def _lin(b, g, D):
    return PlqPiece.affine(b, g, D)


def _face(f, active):
    return next(F_ for F_ in enumerate_overlap_faces(f.domains) if F_.active == frozenset(active))


def _reverifies(f, v):
    lhs = evaluate(f, lerp(v.x, v.y, v.t))
    rhs = (1 - v.t) * evaluate(f, v.x) + v.t * evaluate(f, v.y)
    return lhs > rhs


@pytest.mark.parametrize("name", names())
def test_corpus_verdict(name):
    v = certify(builtin(name))
    assert v.tag == EXPECTED[name]
    if isinstance(v, NotConvex):
        assert _reverifies(builtin(name), v.counterexample)


def test_routes():
    assert certify(builtin("paper-norm")).certificate.route == "GradientLimits"
    assert certify(builtin("ex-6.3")).certificate.route == "SubdiffIntersection"
    c = certify(builtin("abs-x-2d")).certificate
    assert c.route == "SubdiffIntersection" and c.exactness == "FullyExact"
    assert certify(builtin("paper-norm")).certificate.exactness == "ModuloOracleSampling"


def test_ex_7_2_counterexample():
    v = certify(builtin("ex-7.2"))
    assert v.witness == (0, -1)
    cx = v.counterexample
    assert (cx.x, cx.y, cx.t, cx.lhs, cx.rhs) == ((-1, -1), (1, -1), F(1, 2), 0, -1)


def test_ex_7_3_counterexample():
    v = certify(builtin("ex-7.3"))
    cx = v.counterexample
    assert v.witness == (0, 0)
    assert (cx.x, cx.y, cx.lhs, cx.rhs) == ((-1, 0), (1, 0), 1, 0)
    assert any(h.name == "E finite" and h.status == "failed" for h in v.hypothesis_log)


def test_gradient_matching():
    smooth = PiecewiseFunction(tuple(_lin([1, 2], 3, D) for D in QUADS))
    assert isinstance(check_gradient_matching(smooth), GradHolds)
    ex63 = builtin("ex-6.3")
    plq_pair = PiecewiseFunction((ex63.pieces[1], ex63.pieces[3]))
    gm = check_gradient_matching(plq_pair)
    assert isinstance(gm, GradFails) and gm.witness == (0, 0)
    with pytest.raises(CapabilityError):
        check_gradient_matching(ex63)


def test_face_checks_ex_7_2():
    f = builtin("ex-7.2")
    res = check_subdiff_intersection_on_face(_face(f, {0, 1}), f)
    assert isinstance(res, Fails)
    assert res.witness[0] == 0 and res.witness[1] < 0


def test_face_checks_ex_7_3():
    f = builtin("ex-7.3")
    assert isinstance(check_subdiff_intersection_on_face(_face(f, {0, 4}), f), HoldsEverywhere)
    assert isinstance(check_subdiff_intersection_on_face(_face(f, {4, 5}), f), Fails)


def test_abs_x_vertex_face_holds():
    f = builtin("abs-x-2d")
    faces = enumerate_overlap_faces(f.domains)
    assert isinstance(check_gradient_matching(f), GradFails)
    assert all(isinstance(check_subdiff_intersection_on_face(F_, f), HoldsEverywhere) for F_ in faces)


def _inverted_pyramid(E=()):
    # -|x| - |y|, concave at the origin and along both axes
    pieces = [_lin([-1, -1], 0, Q1), _lin([1, -1], 0, Q2), _lin([1, 1], 0, Q3), _lin([-1, 1], 0, Q4)]
    return PiecewiseFunction(tuple(pieces), exceptional=E)


def test_exceptional_point_excuses_vertex():
    f = _inverted_pyramid()
    res = check_subdiff_intersection_on_face(_face(f, {0, 1, 2, 3}), f, [(0, 0)])
    assert isinstance(res, HoldsExceptPointsInE) and res.points == ((0, 0),)
    assert isinstance(check_subdiff_intersection_on_face(_face(f, {0, 1, 2, 3}), f), Fails)


def test_exceptions_do_not_rescue_edges():
    v = certify(_inverted_pyramid(E=[(0, 0)]))
    assert isinstance(v, NotConvex)


def test_intersection_point():
    cones = [PolyCone(2, ((-1, 0),), ()), PolyCone(2, ((1, 0),), ())]
    assert intersection_point([(-1, 0), (1, 0)], cones) is None
    w = intersection_point([(0, 0), (0, 0)], cones)
    assert w == (0, 0)


def test_gradient_limits_paper_norm():
    res = check_gradient_limits(builtin("paper-norm"))
    assert isinstance(res, LimitsHold)
    assert (0, 0) in res.exceptional_used


def test_disprove_finds_triple():
    f = builtin("neg-abs-2d")
    v = disprove(f, (0, F(1, 2)))
    assert v is not None and _reverifies(f, v)
    assert disprove(builtin("abs-x-2d"), (0, 0)) is None


def test_certify_1d():
    line = Polyhedron.universe(1)
    left, right = Polyhedron(1, [((1,), 0)]), Polyhedron(1, [((-1,), 0)])
    absx = PiecewiseFunction((_lin([-1], 0, left), _lin([1], 0, right)))
    assert isinstance(certify(absx), Convex)
    assert certify(absx).certificate.route == "OneDimChain"
    v = certify_1d(builtin("neg-abs-1d"))
    assert isinstance(v, NotConvex) and v.counterexample.exact
    quad = PiecewiseFunction((PlqPiece([[2]], [0], 0, line),))
    assert isinstance(certify(quad), Convex)


def test_1d_segment_in_plane():
    diag = Polyhedron(2, [((1, 0), 0)], [((1, -1), 0)])
    other = Polyhedron(2, [((-1, 0), 0)], [((1, -1), 0)])
    f = PiecewiseFunction((_lin([-1, 0], 0, diag), _lin([1, 0], 0, other)))
    v = certify(f)
    assert isinstance(v, Convex) and v.certificate.route == "OneDimChain"


def test_point_domain():
    f = PiecewiseFunction((_lin([1, 1], 0, Polyhedron.point([1, 1])),))
    assert isinstance(certify(f), Convex)


def test_nonconvex_piece_refuted():
    f = PiecewiseFunction((PlqPiece([[1, 0], [0, -1]], [0, 0], 0, Q1),))
    v = certify(f)
    assert isinstance(v, NotConvex) and _reverifies(f, v.counterexample)


def test_incompatible_functions():
    f = PiecewiseFunction((_lin([0, 0], 0, Q1), _lin([0, 0], 1, Q2)))
    v = certify(f)
    assert not isinstance(v, Convex)
    if isinstance(v, NotConvex):
        assert _reverifies(f, v.counterexample)


def test_nonconvex_domain():
    doms = [Polyhedron.box([0, 0], [2, 1]), Polyhedron.box([0, 0], [1, 2])]
    v = certify(PiecewiseFunction(tuple(_lin([0, 0], 0, D) for D in doms)))
    assert isinstance(v, NotConvex)
    assert v.counterexample.lhs == float("inf")


def test_three_dimensional_plq():
    lo, hi = [-1, -1, -1], [1, 1, 1]
    left = Polyhedron.box(lo, [0, 1, 1])
    right = Polyhedron.box([0, -1, -1], hi)
    box = Polyhedron.box(lo, hi)
    absx = PiecewiseFunction((_lin([-1, 0, 0], 0, left), _lin([1, 0, 0], 0, right)), declared_domain=box)
    assert isinstance(certify(absx), Convex)
    neg = PiecewiseFunction((_lin([1, 0, 0], 0, left), _lin([-1, 0, 0], 0, right)), declared_domain=box)
    assert isinstance(certify(neg), NotConvex)


def test_route_options():
    f = builtin("abs-x-2d")
    assert isinstance(certify(f, CertifyOptions(route="plq")), Inconclusive)
    assert isinstance(certify(f, CertifyOptions(route="subdiff")), Convex)
    smooth = PiecewiseFunction(tuple(_lin([1, 2], 3, D) for D in QUADS))
    assert certify(smooth, CertifyOptions(route="plq")).certificate.route == "PlqGradientMatch"
    pn = builtin("paper-norm")
    assert certify(pn, CertifyOptions(route="limits")).certificate.route == "GradientLimits"
    assert isinstance(certify(pn, CertifyOptions(route="plq")), Inconclusive)


def test_verdict_json_shape():
    for name in names():
        out = verdict_to_json(certify(builtin(name)))
        assert out["verdict"] == EXPECTED[name]
        assert isinstance(out["hypothesis_log"], list)


@pytest.mark.parametrize("seed", range(8))
def test_fully_exact_convex_never_contradicted_exactly(seed):
    f = random_tiling(seed).f
    v = certify(f)
    if isinstance(v, Convex) and v.certificate.exactness == "FullyExact":
        cfg = SampleConfig(n_samples=300, seed=seed, tolerance=0, exact=True, bounding_box=([-2, -2], [2, 2]))
        assert isinstance(midpoint_convexity_test(f, cfg), Pass)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("PLQ_CERTIFY_THREADS", "4")
    assert certify(builtin("ex-7.3")).tag == "not_convex"
    assert certify(builtin("abs-x-2d")).tag == "convex"
