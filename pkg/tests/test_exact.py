from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwcvx.exact import (
    CapabilityError,
    Infeasible,
    LinearProgram,
    NotPsd,
    NotSymmetricError,
    Optimal,
    Unbounded,
    fourier_motzkin,
    ldlt_psd,
    lp_solve,
    nullspace,
    rank,
    solve_affine,
)
from pwcvx.exact._backend import BACKEND, to_fraction
from pwcvx.exact.numbers import format_rational, format_vector, q, quad_form, vec

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_rational_strings_round_trip():
    assert format_rational(F(-3, 4)) == "-3/4"
    assert format_rational(F(2)) == "2"
    assert vec(["1/2", "-3", 0]) == (F(1, 2), F(-3), F(0))
    assert format_vector(vec(["1/2", "-3"])) == ["1/2", "-3"]


def test_q_rejects_floats_losslessly():
    # floats are converted exactly, never rounded
    assert q(0.5) == F(1, 2)
    assert q("0.1") == F(1, 10)


def test_backend_values_are_fractions():
    assert BACKEND in ("gmpy2", "fraction")
    assert isinstance(to_fraction(q(3)), F)


def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    rows = [vec(r) for r in rows]
    assert rank(rows) == 2
    (v,) = nullspace(rows, 3)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_solve_affine_inconsistent():
    assert solve_affine([((1, 0), 1), ((1, 0), 2)], 2) is None


# -- linear programming ---------------------------------------------------


def test_lp_textbook():
    lp = LinearProgram([3, 2], [([1, 1], "<=", 4), ([1, 3], "<=", 6), ([-1, 0], "<=", 0), ([0, -1], "<=", 0)])
    out = lp_solve(lp)
    assert isinstance(out, Optimal)
    assert out.value == 12 and out.point == (4, 0)


def test_lp_infeasible_and_unbounded():
    assert isinstance(lp_solve(LinearProgram([1], [([1], "<=", 0), ([1], ">=", 1)])), Infeasible)
    out = lp_solve(LinearProgram([1, 1], [([1, -1], "<=", 0)]))
    assert isinstance(out, Unbounded)
    assert sum(out.ray) > 0


def test_lp_min_sense_and_equalities():
    out = lp_solve(LinearProgram([1, 1], [([1, 1], "=", 3), ([1, 0], ">=", F(1, 2)), ([0, 1], ">=", 0)], sense="min"))
    assert isinstance(out, Optimal) and out.value == 3


def _bounded_lp(c, rows):
    n = len(c)
    box = [([1 if j == i else 0 for j in range(n)], 10) for i in range(n)]
    box += [([-1 if j == i else 0 for j in range(n)], 10) for i in range(n)]
    return rows + box


@settings(max_examples=60, deadline=None)
@given(
    c=st.lists(small, min_size=2, max_size=3),
    data=st.data(),
)
def test_lp_strong_duality(c, data):
    n = len(c)
    rows = data.draw(st.lists(st.tuples(st.lists(small, min_size=n, max_size=n), small), max_size=4))
    rows = _bounded_lp(c, rows)
    primal = lp_solve(LinearProgram(c, [(a, "<=", b) for a, b in rows]))
    # dual: min b.y, A^T y = c, y >= 0
    m = len(rows)
    cons = [([rows[i][0][j] for i in range(m)], "=", c[j]) for j in range(n)]
    cons += [([1 if k == i else 0 for k in range(m)], ">=", 0) for i in range(m)]
    dual = lp_solve(LinearProgram([b for _, b in rows], cons, sense="min"))
    if isinstance(primal, Infeasible):
        assert not isinstance(dual, Optimal)
        return
    assert isinstance(primal, Optimal) and isinstance(dual, Optimal)
    assert primal.value == dual.value


# -- LDL^T ----------------------------------------------------------------


def test_ldlt_examples():
    assert not isinstance(ldlt_psd([[1, 0], [0, 0]]), NotPsd)
    M = ((F(0), F(1)), (F(1), F(0)))
    out = ldlt_psd(M)
    assert isinstance(out, NotPsd) and out.value < 0
    assert quad_form(M, out.witness) == out.value
    with pytest.raises(NotSymmetricError):
        ldlt_psd([[1, 2], [3, 4]])


def test_ldlt_zero_pivot_with_coupling():
    # zero diagonal but nonzero off-diagonal in the same row is indefinite
    M = [[0, 0, 1], [0, 2, 0], [1, 0, 3]]
    out = ldlt_psd(M)
    assert isinstance(out, NotPsd)


@st.composite
def symmetric(draw, n):
    entries = {}
    for i in range(n):
        for j in range(i, n):
            entries[i, j] = draw(small)
    return [[entries[min(i, j), max(i, j)] for j in range(n)] for i in range(n)]


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 3).flatmap(symmetric))
def test_ldlt_agrees_with_eigenvalues(M):
    out = ldlt_psd(M)
    lam = np.linalg.eigvalsh(np.array(M, dtype=float)).min()
    if isinstance(out, NotPsd):
        assert quad_form(tuple(map(tuple, M)), out.witness) == out.value < 0
    else:
        assert lam > -1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3).flatmap(symmetric))
def test_ldlt_gram_matrices_are_psd(L):
    n = len(L)
    G = [[sum(L[k][i] * L[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert not isinstance(ldlt_psd(G), NotPsd)


# -- Fourier-Motzkin --------------------------------------------------------


def test_fm_triangle_shadow():
    # x, y >= 0, x + y <= 1 projected to x
    rows = fourier_motzkin([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)], eliminate=[1])
    xs = [F(k, 4) for k in range(-4, 9)]
    inside = [x for x in xs if all(a[0] * x <= b for a, b in rows)]
    assert inside == [F(k, 4) for k in range(0, 5)]


def test_fm_infeasible():
    rows = fourier_motzkin([((1, 1), 0), ((-1, -1), -1)], eliminate=[0, 1])
    assert any(all(v == 0 for v in a) and b < 0 for a, b in rows)


def test_fm_equalities_substitute():
    rows = fourier_motzkin([((1, 0), 2), ((-1, 0), 0)], eliminate=[1], equalities=[((1, -1), 0)])
    assert all(len(a) == 1 for a, _ in rows)


def test_fm_variable_guard():
    system = [((1,) * 14, 1)]
    with pytest.raises(CapabilityError):
        fourier_motzkin(system, eliminate=range(13))
