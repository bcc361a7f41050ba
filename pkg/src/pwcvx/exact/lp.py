"""Exact linear programming over the rationals.

Two-phase tableau simplex with Bland's anti-cycling rule. Variables are
free; internally each is split as ``x = x+ - x-``. The problems produced by
the rest of the package have at most a few dozen rows, so a dense tableau
is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import _backend
from .numbers import Vector, q, vec


class DimensionError(ValueError):
    """Raised when vectors in a problem do not have the declared length."""


_RELATIONS = {"<=": "<=", "≤": "<=", "=": "=", "==": "=", ">=": ">=", "≥": ">="}


@dataclass(frozen=True)
class LinearProgram:
    objective: Vector
    constraints: tuple
    n_vars: int
    sense: str = "max"

    def __init__(self, objective, constraints, n_vars: int | None = None, sense: str = "max"):
        obj = vec(objective)
        n = len(obj) if n_vars is None else int(n_vars)
        if n <= 0 and obj:
            raise DimensionError("n_vars must be positive")
        if len(obj) != n:
            raise DimensionError(f"objective has length {len(obj)}, expected {n}")
        cons = []
        for a, rel, b in constraints:
            a = vec(a)
            if len(a) != n:
                raise DimensionError(f"constraint vector has length {len(a)}, expected {n}")
            if rel not in _RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            cons.append((a, _RELATIONS[rel], q(b)))
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(cons))
        object.__setattr__(self, "n_vars", n)
        object.__setattr__(self, "sense", sense)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: Vector


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    # A feasible point and a direction along which the objective improves
    # without bound.
    point: Vector
    ray: Vector


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def lp_solve(lp: LinearProgram) -> LpOutcome:
    n = lp.n_vars
    Q = _backend.to_q
    rows, rels, rhs = [], [], []
    for a, rel, b in lp.constraints:
        if rel == ">=":
            a, rel, b = tuple(-x for x in a), "<=", -b
        rows.append([Q(x) for x in a])
        rels.append(rel)
        rhs.append(Q(b))
    sign = 1 if lp.sense == "max" else -1
    c = [Q(sign * x) for x in lp.objective]
    status, value, point, ray = _simplex(n, rows, rels, rhs, c)
    if status == "infeasible":
        return Infeasible()
    pt = tuple(_backend.to_fraction(x) for x in point)
    if status == "unbounded":
        return Unbounded(pt, tuple(_backend.to_fraction(x) for x in ray))
    return Optimal(sign * _backend.to_fraction(value), pt)


def _pivot(T, p, e):
    row = T[p]
    inv = 1 / row[e]
    row = [v * inv for v in row]
    T[p] = row
    nz = [(j, v) for j, v in enumerate(row) if v]
    for i in range(len(T)):
        if i == p:
            continue
        r = T[i]
        f = r[e]
        if f:
            for j, v in nz:
                r[j] -= f * v


def _run(T, basis, ncols):
    """Maximise the objective stored in ``T[-1]`` (reduced costs) over the
    constraint rows ``T[:-1]``. Returns ``None`` or the unbounded column."""
    m = len(T) - 1
    while True:
        z = T[-1]
        enter = -1
        for j in range(ncols):
            if z[j] > 0:
                enter = j
                break
        if enter < 0:
            return None
        best = -1
        best_r = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                r = T[i][ncols] / a
                if best < 0 or r < best_r or (r == best_r and basis[i] < basis[best]):
                    best, best_r = i, r
        if best < 0:
            return enter
        _pivot(T, best, enter)
        basis[best] = enter


def _objective_row(T, basis, cost, ncols):
    zero = _backend.Q(0)
    z = list(cost) + [zero]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb:
            r = T[i]
            for j in range(ncols + 1):
                if r[j]:
                    z[j] -= cb * r[j]
    return z


def _simplex(n, rows, rels, rhs, c):
    Q = _backend.Q
    zero, one = Q(0), Q(1)
    m = len(rows)
    if n == 0:
        for rel, b in zip(rels, rhs):
            if (rel == "<=" and b < 0) or (rel == "=" and b != 0):
                return "infeasible", None, (), ()
        return "optimal", zero, (), ()

    n_slack = sum(1 for r in rels if r == "<=")
    need_art = []
    for rel, b in zip(rels, rhs):
        need_art.append(rel == "=" or b < 0)
    n_art = sum(need_art)
    s0 = 2 * n
    a0 = s0 + n_slack
    ncols = a0 + n_art

    T = []
    basis = []
    si = s0
    ai = a0
    for i in range(m):
        row = [zero] * (ncols + 1)
        for j, v in enumerate(rows[i]):
            if v:
                row[j] = v
                row[n + j] = -v
        slack = None
        if rels[i] == "<=":
            row[si] = one
            slack = si
            si += 1
        row[ncols] = rhs[i]
        if rhs[i] < 0:
            row = [-v for v in row]
        if need_art[i]:
            row[ai] = one
            basis.append(ai)
            ai += 1
        else:
            basis.append(slack)
        T.append(row)

    if n_art:
        cost1 = [zero] * a0 + [-one] * n_art
        T.append(_objective_row(T, basis, cost1, ncols))
        _run(T, basis, ncols)
        if T[-1][ncols] != 0:  # -(sum of artificials) at optimum
            return "infeasible", None, (), ()
        T.pop()
        # drive remaining artificials out of the basis
        i = 0
        while i < len(T):
            if basis[i] >= a0:
                j = next((j for j in range(a0) if T[i][j] != 0), None)
                if j is None:
                    T.pop(i)
                    basis.pop(i)
                    continue
                _pivot(T, i, j)
                basis[i] = j
            i += 1
        T = [r[:a0] + [r[ncols]] for r in T]
        ncols = a0

    cost = list(c) + [-v for v in c] + [zero] * (ncols - 2 * n)
    T.append(_objective_row(T, basis, cost, ncols))
    unbounded_col = _run(T, basis, ncols)

    z = [zero] * ncols
    for i, b in enumerate(basis):
        z[b] = T[i][ncols]
    point = tuple(z[j] - z[n + j] for j in range(n))
    if unbounded_col is not None:
        d = [zero] * ncols
        d[unbounded_col] = one
        for i, b in enumerate(basis):
            d[b] = -T[i][unbounded_col]
        ray = tuple(d[j] - d[n + j] for j in range(n))
        return "unbounded", None, point, ray
    return "optimal", -T[-1][ncols], point, ()


# Small conveniences used throughout the package.

def maximize(c: Sequence, ineqs=(), eqs=(), n: int | None = None) -> LpOutcome:
    """Maximise ``c . x`` subject to ``a . x <= b`` and ``a . x = b``."""
    cons = [(a, "<=", b) for a, b in ineqs] + [(a, "=", b) for a, b in eqs]
    return lp_solve(LinearProgram(c, cons, n))


def feasible_point(ineqs, eqs, n: int) -> Vector | None:
    out = maximize([0] * n, ineqs, eqs, n)
    if isinstance(out, Infeasible):
        return None
    return out.point
