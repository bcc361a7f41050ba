from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwcvx.corpus import Q1, Q2, Q3, Q4
from pwcvx.exact import CapabilityError
from pwcvx.polyhedra import (
    PolyCone,
    PreconditionError,
    Polyhedron,
    affine_hull,
    contains_polyhedron,
    dimension,
    enumerate_overlap_faces,
    implicit_equalities,
    in_relative_interior_of_union,
    intersect,
    is_empty,
    normal_cone_at,
    region_difference,
    region_difference_2d,
    relative_interior_point,
    set_equal,
    tangent_cone_at,
    union_hull,
)

QUADS = [Q1, Q2, Q3, Q4]


def test_box_and_json_round_trip():
    P = Polyhedron.box([0, F(-1, 2)], [1, 2])
    R = Polyhedron.from_json(P.to_json())
    assert set_equal(P, R)
    assert P.to_json()["ineq"][0][1] in {"1", "2", "0", "1/2"}


def test_empty_and_dimension():
    assert is_empty(Polyhedron(1, [((1,), 0), ((-1,), -1)]))
    assert dimension(Polyhedron(2, [((1, 0), 0), ((-1, 0), 0)])) == 1
    assert dimension(Polyhedron.point([1, 2])) == 0
    with pytest.raises(PreconditionError):
        dimension(Polyhedron(2, [((1, 0), 0), ((-1, 0), -1)]))


def test_implicit_equalities_found():
    P = Polyhedron(2, [((1, 1), 1), ((-1, -1), -1), ((0, -1), 0)])
    H = affine_hull(P)
    assert H.dim == 1
    E = implicit_equalities(P)
    assert len(E.eqs) == 1


def test_relative_interior_point_of_segment():
    P = Polyhedron(2, [((1, 0), 1), ((-1, 0), 0)], [((0, 1), 3)])
    x = relative_interior_point(P)
    assert P.in_relative_interior(x)
    assert 0 < x[0] < 1 and x[1] == 3


def test_intersection_of_quadrants_is_ray():
    R = intersect(Q1, Q2)
    assert dimension(R) == 1
    assert R.contains((0, 5)) and not R.contains((0, -1)) and not R.contains((1, 1))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(-2, 2, max_denominator=3), min_size=4, max_size=4))
def test_intersection_commutes(v):
    A = Polyhedron.box([v[0], v[1]], [v[0] + 1, v[1] + 1])
    B = Polyhedron.box([v[2], v[3]], [v[2] + 1, v[3] + 1])
    AB, BA = intersect(A, B), intersect(B, A)
    assert is_empty(AB) == is_empty(BA)
    if not is_empty(AB):
        assert set_equal(AB, BA)
        assert contains_polyhedron(A, AB) and contains_polyhedron(B, AB)


def test_normal_cone_of_quadrant_corner():
    N = normal_cone_at(Q1, (0, 0))
    assert N.contains((-1, -2)) and not N.contains((1, 0))
    N_edge = normal_cone_at(Q1, (0, 1))
    assert N_edge.contains((-3, 0)) and not N_edge.contains((-1, -1))
    assert normal_cone_at(Q1, (1, 1)).is_zero()


def test_normal_cone_lineality_from_equalities():
    P = Polyhedron(2, [((1, 0), 1), ((-1, 0), 0)], [((0, 1), 0)])
    N = normal_cone_at(P, (F(1, 2), 0))
    assert N.contains((0, 7)) and N.contains((0, -7))
    assert N.equals(PolyCone(2, (), ((0, 1),)))


def test_tangent_cone():
    T = tangent_cone_at(Q1, (0, 0))
    assert set_equal(T, Q1)


def test_region_difference_l_shape_notch():
    P = Polyhedron.box([0, 0], [2, 2])
    cover = [Polyhedron.box([0, 0], [2, 1]), Polyhedron.box([0, 0], [1, 2])]
    w = region_difference(P, cover)
    assert w is not None and w[0] > 1 and w[1] > 1 and P.contains(w)
    assert region_difference(Polyhedron.box([0, 0], [1, 1]), cover) is None


def test_region_difference_3d_and_2d_guard():
    P = Polyhedron.box([0, 0, 0], [1, 1, 1])
    halves = [Polyhedron.box([0, 0, 0], [F(1, 2), 1, 1]), Polyhedron.box([F(1, 2), 0, 0], [1, 1, 1])]
    assert region_difference(P, halves) is None
    with pytest.raises(CapabilityError):
        region_difference_2d(P, halves)


def test_quadrant_faces():
    faces = enumerate_overlap_faces(QUADS)
    by_active = {F_.active: F_ for F_ in faces}
    assert frozenset({0, 1, 2, 3}) in by_active
    assert by_active[frozenset({0, 1, 2, 3})].dimension == 0
    for pair in [(0, 1), (1, 2), (2, 3), (0, 3)]:
        assert by_active[frozenset(pair)].dimension == 1
    assert frozenset({0, 2}) not in by_active  # only meet at the origin


def test_union_hull_and_relative_interior():
    H = union_hull(QUADS)
    assert H.dim == 2
    assert in_relative_interior_of_union(QUADS, (0, 0), H)
    assert not in_relative_interior_of_union([Q1, Q2], (0, 0), union_hull([Q1, Q2]))
