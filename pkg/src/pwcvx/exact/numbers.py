"""Rational scalars, vectors and matrices.

Scalars are :class:`fractions.Fraction`; vectors and matrices are plain
tuples of them, which keeps every value hashable and immutable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Tuple, Union

Rational = Fraction
Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

RationalLike = Union[Fraction, int, str, float]

ZERO = Fraction(0)
ONE = Fraction(1)


def q(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Strings use the ``"p/q"`` or ``"p"`` wire format. Floats are converted
    exactly (their binary expansion), never rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not s:
            raise ValueError("empty rational string")
        return Fraction(s)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, _RationalABC):
        return Fraction(int(value.numerator), int(value.denominator))
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(values: Iterable) -> Vector:
    return tuple(q(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vec(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def zero_matrix(n: int, m: int | None = None) -> Matrix:
    return tuple(zeros(n if m is None else m) for _ in range(n))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c: Fraction, a: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in a)


def neg(a: Sequence[Fraction]) -> Vector:
    return tuple(-x for x in a)


def lerp(x: Sequence[Fraction], y: Sequence[Fraction], t: Fraction) -> Vector:
    """The point ``(1 - t) x + t y``."""
    return tuple(a + t * (b - a) for a, b in zip(x, y))


def matvec(m: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, x) for row in m)


def transpose(m: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(sub(r, s) for r, s in zip(a, b))


def mat_scale(c: Fraction, a: Matrix) -> Matrix:
    return tuple(scale(c, r) for r in a)


def quad_form(m: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Fraction:
    return dot(x, matvec(m, x))


def is_symmetric(m: Sequence[Sequence[Fraction]]) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def sq_norm(a: Sequence[Fraction]) -> Fraction:
    return dot(a, a)


def primitive(a: Sequence[Fraction], b: Fraction | None = None):
    """Rescale ``(a, b)`` by a positive factor so ``a`` is a primitive
    integer vector. Used to deduplicate constraints."""
    from math import gcd

    vals = list(a) + ([b] if b is not None else [])
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in a]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        if b is None:
            return tuple(Fraction(0) for _ in a)
        return tuple(Fraction(0) for _ in a), b
    out = tuple(Fraction(v, g) for v in ints)
    if b is None:
        return out
    return out, b * den / g


def format_rational(r: Fraction) -> str:
    """Wire format: ``"p"`` for integers, ``"p/q"`` otherwise."""
    r = q(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def format_vector(v: Sequence[Fraction]) -> list[str]:
    return [format_rational(x) for x in v]


def parse_vector(raw: Sequence) -> Vector:
    return vec(raw)


def to_floats(v: Sequence) -> tuple[float, ...]:
    return tuple(float(x) for x in v)
