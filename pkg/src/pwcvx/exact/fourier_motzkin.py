"""Fourier–Motzkin elimination with LP-based redundancy pruning.

An inequality is a pair ``(a, b)`` meaning ``a . x <= b``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .lp import Infeasible, Optimal, maximize
from .numbers import Vector, primitive, vec, q

MAX_VARIABLES = 12


class CapabilityError(RuntimeError):
    """The exact routine refuses the input size; callers fall back."""


Inequality = tuple[Vector, Fraction]

_FALSE: Inequality = ((), Fraction(-1))


def _norm(a, b):
    a, b = primitive(a, b)
    return a, b


def _prune(ineqs: list[Inequality], n: int, use_lp: bool) -> list[Inequality] | None:
    """Deduplicate and drop redundant rows. ``None`` means infeasible."""
    seen: dict[Vector, Fraction] = {}
    for a, b in ineqs:
        if all(x == 0 for x in a):
            if b < 0:
                return None
            continue
        a, b = _norm(a, b)
        if a not in seen or b < seen[a]:
            seen[a] = b
    rows = list(seen.items())
    if not use_lp or len(rows) <= 1:
        return rows
    if isinstance(maximize([0] * n, rows, (), n), Infeasible):
        return None
    kept = list(rows)
    i = 0
    while i < len(kept):
        a, b = kept[i]
        others = kept[:i] + kept[i + 1:]
        out = maximize(a, others, (), n)
        if isinstance(out, Optimal) and out.value <= b:
            kept.pop(i)
        else:
            i += 1
    return kept


def fourier_motzkin(
    system: Iterable[tuple[Sequence, object]],
    eliminate: Iterable[int],
    equalities: Iterable[tuple[Sequence, object]] = (),
    prune: bool = True,
) -> list[Inequality]:
    """Project ``{x : A x <= b, C x = d}`` onto the variables not listed in
    ``eliminate``.

    The result is over the surviving variables in their original order.
    An infeasible input projects to the single row ``0 <= -1``.
    """
    ineqs = [(vec(a), q(b)) for a, b in system]
    eqs = [(vec(a), q(b)) for a, b in equalities]
    rows = ineqs + eqs
    if not rows:
        raise ValueError("empty system")
    n = len(rows[0][0])
    if any(len(a) != n for a, _ in rows):
        raise ValueError("inconsistent row lengths")
    elim = sorted(set(eliminate))
    if any(not 0 <= j < n for j in elim):
        raise ValueError("eliminated index out of range")
    if n > MAX_VARIABLES:
        raise CapabilityError(f"{n} variables exceeds the elimination guard of {MAX_VARIABLES}")
    keep = [j for j in range(n) if j not in elim]

    # Equalities first: substitute them away wherever they touch an
    # eliminated variable.
    todo = list(elim)
    for j in list(todo):
        k = next((i for i, (a, _) in enumerate(eqs) if a[j] != 0), None)
        if k is None:
            continue
        a, b = eqs.pop(k)
        piv = a[j]

        def sub(row):
            c, beta = row
            f = c[j] / piv
            if f == 0:
                return row
            return tuple(x - f * y for x, y in zip(c, a)), beta - f * b

        ineqs = [sub(r) for r in ineqs]
        eqs = [sub(r) for r in eqs]
        todo.remove(j)
    for a, b in eqs:
        ineqs.append((a, b))
        ineqs.append((tuple(-x for x in a), -b))

    current = _prune(ineqs, n, prune)
    if current is None:
        return [(tuple(Fraction(0) for _ in keep), Fraction(-1))]

    while todo:
        def cost(j):
            p = sum(1 for a, _ in current if a[j] > 0)
            m = sum(1 for a, _ in current if a[j] < 0)
            return p * m - p - m, j

        j = min(todo, key=cost)
        todo.remove(j)
        pos = [r for r in current if r[0][j] > 0]
        negs = [r for r in current if r[0][j] < 0]
        new = [r for r in current if r[0][j] == 0]
        for ap, bp in pos:
            for an, bn in negs:
                fp, fn = ap[j], -an[j]
                c = tuple(fn * x + fp * y for x, y in zip(ap, an))
                new.append((c, fn * bp + fp * bn))
        current = _prune(new, n, prune)
        if current is None:
            return [(tuple(Fraction(0) for _ in keep), Fraction(-1))]

    return [(tuple(a[k] for k in keep), b) for a, b in current]
