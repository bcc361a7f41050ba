import math
from fractions import Fraction as F

import pytest

from pwcvx import PiecewiseFunction, PlqPiece, Polyhedron, active_indices, evaluate, plq_subdifferential
from pwcvx.corpus import Q1, Q2, builtin, oracle_piece
from pwcvx.exact import NotSymmetricError
from pwcvx.outcomes import Certified, Refuted, SampledOk
from pwcvx.pieces import SubdiffSet, evaluate_float, piece_is_convex
from pwcvx.polyhedra import PolyCone, PreconditionError


def test_plq_value_and_gradient():
    p = PlqPiece([[2, 1], [1, 2]], [1, -1], F(1, 3), Polyhedron.universe(2))
    x = (F(1), F(2))
    assert p.value(x) == F(1, 2) * (2 + 4 + 8) + 1 - 2 + F(1, 3)
    assert p.gradient(x) == (5, 4)
    assert math.isclose(p.value_float((1.0, 2.0)), float(p.value(x)))


def test_plq_rejects_bad_shapes():
    with pytest.raises(NotSymmetricError):
        PlqPiece([[1, 2], [0, 1]], [0, 0], 0, Polyhedron.universe(2))
    with pytest.raises(ValueError):
        PlqPiece([[1]], [0, 0], 0, Polyhedron.universe(2))


def test_min_over_active_pieces():
    f = builtin("ex-7.3")
    assert evaluate(f, (0, 0)) == 1
    assert [i + 1 for i in active_indices(f, (0, 0))] == [5, 6]


def test_paper_norm_mixed_evaluation():
    f = builtin("paper-norm")
    v = evaluate(f, (1, 0))
    assert isinstance(v, float) and v == 1.0
    assert [i + 1 for i in active_indices(f, (1, 0))] == [1, 4]
    assert evaluate(f, (1, 1)) == 2
    assert evaluate_float(f, (-1.0, -2.0)) == 3.0


def test_outside_domain_is_inf():
    f = PiecewiseFunction((PlqPiece.affine([1, 0], 0, Q1),))
    assert evaluate(f, (-1, 0)) == math.inf
    assert active_indices(f, (-1, 0)) == ()


def test_ex_7_2_subdifferentials():
    f = builtin("ex-7.2")
    y = F(-3, 2)
    d1 = plq_subdifferential(f.pieces[0], (0, y))
    d2 = plq_subdifferential(f.pieces[1], (0, y))
    assert d1.equals(SubdiffSet((F(-1), F(0)), PolyCone(2, ((-1, 0),), ())))
    assert d2.equals(SubdiffSet((F(1), F(0)), PolyCone(2, ((1, 0),), ())))
    assert d1.contains((-5, 0)) and not d1.contains((-1, 1))


def test_subdifferential_needs_domain_point():
    with pytest.raises(PreconditionError):
        plq_subdifferential(PlqPiece.affine([0, 0], 0, Q1), (-1, -1))


def test_ex_7_3_common_subgradient():
    f = builtin("ex-7.3")
    v = (F(-1, 2), F(1, 2))
    x = (F(1, 3), F(2, 3))  # on the edge x + y = 1
    d1 = plq_subdifferential(f.pieces[0], x)
    assert d1.equals(SubdiffSet((F(0), F(1)), PolyCone(2, ((-1, -1),), ())))
    assert d1.contains(v)
    assert plq_subdifferential(f.pieces[4], x).contains(v)
    assert not plq_subdifferential(f.pieces[4], x).contains((0, 0))


def test_piece_convexity_exact():
    assert isinstance(piece_is_convex(PlqPiece([[1, 0], [0, 2]], [0, 0], 0, Q1)), Certified)
    res = piece_is_convex(PlqPiece([[1, 0], [0, -1]], [0, 0], 0, Q1))
    assert isinstance(res, Refuted)
    v = res.violation
    assert v.exact and v.margin > 0


def test_piece_convexity_restricted_to_hull():
    # indefinite Q, but the domain is a line along which the piece is convex
    line = Polyhedron(2, [], [((0, 1), 0)])
    assert isinstance(piece_is_convex(PlqPiece([[1, 0], [0, -1]], [0, 0], 0, line)), Certified)


def test_oracle_piece_convexity_is_sampled():
    assert isinstance(piece_is_convex(oracle_piece("ex-6.3/f1", Q1)), SampledOk)
    # x^3 is concave for x < 0
    assert isinstance(piece_is_convex(oracle_piece("ex-6.2/f4", Q2)), Refuted)


def test_permute_and_scale():
    f = builtin("ex-7.3")
    g = f.permuted(list(reversed(range(len(f.pieces)))))
    for x in [(0, 0), (F(1, 2), F(1, 3)), (-2, 1)]:
        assert evaluate(g, x) == evaluate(f, x)
        assert evaluate(f.scaled(F(1, 3)), x) == evaluate(f, x) / 3
    with pytest.raises(TypeError):
        builtin("paper-norm").scaled(2)


def test_piecewise_function_validation():
    with pytest.raises(ValueError):
        PiecewiseFunction(())
    with pytest.raises(ValueError):
        PiecewiseFunction((PlqPiece.affine([0], 0, Polyhedron.universe(1)), PlqPiece.affine([0, 0], 0, Q1)))
    with pytest.raises(ValueError):
        PiecewiseFunction((PlqPiece.affine([0, 0], 0, Q1),), exceptional=[(0,)])
