"""Exact Gaussian elimination helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .numbers import ZERO, Matrix, Vector, sub


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` is a list of nonzero rows and
    ``pivots`` the pivot column of each row.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of ``{x : A x = 0}``, one vector per free column."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    r, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(r, piv):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_affine(eqs: Sequence[tuple[Sequence[Fraction], Fraction]], n: int):
    """Solve ``a_k . x = b_k`` for all k.

    Returns ``(particular, basis)`` with free variables set to zero in the
    particular solution, or ``None`` when the system is inconsistent.
    """
    if not eqs:
        return tuple([ZERO] * n), nullspace([], n)
    aug = [tuple(a) + (b,) for a, b in eqs]
    r, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [ZERO] * n
    for row, pc in zip(r, piv):
        x[pc] = row[n]
    basis = nullspace([row[:n] for row in r], n)
    return tuple(x), basis


def affine_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of the given points."""
    if not vectors:
        raise ValueError("affine_rank needs at least one point")
    base = vectors[0]
    return rank([sub(v, base) for v in vectors[1:]])


def independent_subset(vectors: Sequence[Vector]) -> list[Vector]:
    """Greedy maximal linearly independent subfamily, in input order."""
    kept: list[Vector] = []
    for v in vectors:
        if rank(kept + [v]) > len(kept):
            kept.append(v)
    return kept


def orthogonal_complement(basis: Sequence[Vector], n: int) -> list[Vector]:
    """Basis of the orthogonal complement of ``span(basis)`` in Q^n."""
    return nullspace(list(basis), n)


def solve_square(m: Matrix, rhs: Vector) -> Vector | None:
    n = len(m)
    sol = solve_affine(list(zip(m, rhs)), n)
    if sol is None or sol[1]:
        return None
    return sol[0]
