import math
import random
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_point, random_tiling
from pwcvx import PiecewiseFunction, PlqPiece, Polyhedron, builtin
from pwcvx.compatibility import (
    NotCovered,
    SegmentDecomposition,
    check_domain_convexity,
    check_function_compatibility,
    compat_report,
    domain_dimension,
    is_colinearly_ordered,
    trace_segment,
)
from pwcvx.corpus import Q1, Q2, Q3, Q4
from pwcvx.exact.numbers import lerp

L_SHAPE = [Polyhedron.box([0, 0], [2, 1]), Polyhedron.box([0, 0], [1, 2])]


def _flat(domains):
    return PiecewiseFunction(tuple(PlqPiece.affine([0] * domains[0].n, 0, D) for D in domains))


def test_ex_7_3_pieces_are_compatible():
    fc = check_function_compatibility(builtin("ex-7.3"))
    assert fc.compatible and fc.exact


def test_incompatible_pair_reports_witness():
    f = PiecewiseFunction((PlqPiece.affine([1, 0], 0, Q1), PlqPiece.affine([1, 0], 1, Q2)))
    fc = check_function_compatibility(f)
    assert not fc.compatible and fc.exact
    assert fc.pair == (0, 1)
    assert fc.witness[0] == 0
    a, b = (p.value(fc.witness) for p in f.pieces)
    assert a != b


def test_oracle_compatibility_sampled():
    fc = check_function_compatibility(builtin("paper-norm"))
    assert fc.compatible and not fc.exact


def test_domain_convexity_exact_2d():
    dc = check_domain_convexity(_flat([Q1, Q2, Q3, Q4]))
    assert dc.convex and dc.exact
    dc = check_domain_convexity(_flat(L_SHAPE))
    assert not dc.convex and dc.exact
    v = dc.violation
    assert v.lhs == math.inf and v.rhs < math.inf


def test_domain_convexity_sampled_3d():
    cubes = [Polyhedron.box([0, 0, 0], [1, 1, 1]), Polyhedron.box([1, 0, 0], [2, 1, 1])]
    dc = check_domain_convexity(_flat(cubes))
    assert dc.convex and not dc.exact and dc.n_samples > 0
    corner = [Polyhedron.box([0, 0, 0], [2, 1, 1]), Polyhedron.box([0, 0, 0], [1, 2, 1])]
    assert not check_domain_convexity(_flat(corner)).convex


def test_declared_domain_must_be_covered():
    f = PiecewiseFunction(tuple(PlqPiece.affine([0, 0], 0, D) for D in L_SHAPE), declared_domain=Polyhedron.box([0, 0], [2, 2]))
    dc = check_domain_convexity(f)
    assert dc.covers_declared is False
    assert not dc.convex


def test_exact_convex_union_midpoints_are_members():
    f = random_tiling(3).f
    dc = check_domain_convexity(f)
    assert dc.convex and dc.exact
    rng = random.Random(1)
    doms = f.domains
    for _ in range(1000):
        x, y = random_point(rng), random_point(rng)
        m = lerp(x, y, F(1, 2))
        assert any(D.contains(m) for D in doms)


def test_domain_dimension():
    assert domain_dimension(builtin("neg-abs-1d")) == 1
    assert domain_dimension(builtin("ex-7.3")) == 2


def test_trace_quadrants():
    f = _flat([Q1, Q2, Q3, Q4])
    dec = trace_segment(f, (-1, -1), (1, 1))
    assert isinstance(dec, SegmentDecomposition)
    assert [i + 1 for i in dec.piece_of_segment] == [3, 1]
    assert dec.breakpoints[1] == (0, 0)


def test_trace_single_piece():
    dec = trace_segment(_flat([Q1]), (0, 0), (3, 1))
    assert len(dec.piece_of_segment) == 1


def test_trace_l_shape_gap():
    out = trace_segment(_flat(L_SHAPE), (2, 1), (1, 2))
    assert isinstance(out, NotCovered)
    assert out.t == F(1, 2) and out.point == (F(3, 2), F(3, 2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.randoms(use_true_random=False))
def test_trace_invariants(seed, rng):
    f = random_tiling(seed).f
    x, y = random_point(rng), random_point(rng)
    dec = trace_segment(f, x, y)
    assert isinstance(dec, SegmentDecomposition)
    assert is_colinearly_ordered(dec)
    assert dec.params[0] == 0 and dec.params[-1] == 1
    assert all(a < b for a, b in zip(dec.params, dec.params[1:])) or x == y
    for k, i in enumerate(dec.piece_of_segment):
        D = f.pieces[i].domain
        assert D.contains(dec.breakpoints[k]) and D.contains(dec.breakpoints[k + 1])


def test_compat_report_json():
    rep = compat_report(builtin("ex-7.2")).to_json()
    assert rep["functions_compatible"] is True
    assert rep["domain_convex"] == {"kind": "exact", "value": True}
    assert rep["domain_dimension"] == 2
