"""Built-in example functions and the registry of named oracle pieces.

Oracle pieces can only be referenced from documents by a registry name, so
loading a document never executes user-supplied code.
"""

from __future__ import annotations

import math
from typing import Callable

from .pieces import OraclePiece, PiecewiseFunction, PlqPiece
from .polyhedra import Polyhedron


class UnknownNameError(KeyError):
    pass


# -- oracle formulas (float tuples in, floats out) ----------------------------


def _ratio_value(sign: int):
    # (x² + y²) / (sign·(x − y)), zero at the origin
    def value(p):
        x, y = p
        d = sign * (x - y)
        if d == 0.0:
            return 0.0
        return (x * x + y * y) / d

    return value


def _ratio_gradient(sign: int):
    def grad(p):
        x, y = p
        d2 = (x - y) ** 2
        if d2 == 0.0:
            return (math.nan, math.nan)
        if sign > 0:
            return ((x * x - 2 * x * y - y * y) / d2, (x * x + 2 * x * y - y * y) / d2)
        return ((-x * x + 2 * x * y + y * y) / d2, (-x * x - 2 * x * y + y * y) / d2)

    return grad


def _root64(p):
    x, y = p
    return math.sqrt(x**6 + y**4)


def _root64_grad(p):
    x, y = p
    r = math.sqrt(x**6 + y**4)
    if r == 0.0:
        return (0.0, 0.0)
    return (3 * x**5 / r, 2 * y**3 / r)


def _root42(p):
    x, y = p
    return math.sqrt(x**4 + y * y)


def _root42_grad(p):
    x, y = p
    r = math.sqrt(x**4 + y * y)
    if r == 0.0:
        return (0.0, 0.0)
    return (2 * x**3 / r, y / r)


ORACLES: dict[str, tuple[Callable, Callable]] = {
    "paper-norm/f2": (_ratio_value(-1), _ratio_gradient(-1)),
    "paper-norm/f4": (_ratio_value(1), _ratio_gradient(1)),
    "ex-6.2/f1": (_root64, _root64_grad),
    "ex-6.2/f2": (lambda p: -p[0] ** 3 + p[1] ** 2, lambda p: (-3 * p[0] ** 2, 2 * p[1])),
    "ex-6.2/f3": (_root64, _root64_grad),
    "ex-6.2/f4": (lambda p: p[0] ** 3 + p[1] ** 2, lambda p: (3 * p[0] ** 2, 2 * p[1])),
    "ex-6.3/f1": (_root42, _root42_grad),
    "ex-6.3/f3": (_root42, _root42_grad),
}


def oracle_piece(name: str, domain: Polyhedron) -> OraclePiece:
    try:
        ev, gr = ORACLES[name]
    except KeyError:
        raise UnknownNameError(f"unknown oracle {name!r}") from None
    return OraclePiece(domain, ev, gr, name)


# -- domains -----------------------------------------------------------------

def _poly(*rows, eqs=()):
    return Polyhedron(len(rows[0][0]) if rows else len(eqs[0][0]), rows, eqs)


Q1 = _poly(([-1, 0], 0), ([0, -1], 0))  # R+ x R+
Q2 = _poly(([1, 0], 0), ([0, -1], 0))  # R- x R+
Q3 = _poly(([1, 0], 0), ([0, 1], 0))  # R- x R-
Q4 = _poly(([-1, 0], 0), ([0, 1], 0))  # R+ x R-


def _plq(Q, b, gamma, domain):
    return PlqPiece(Q, b, gamma, domain)


def _lin(b, gamma, domain):
    return PlqPiece.affine(b, gamma, domain)


# -- fixtures -----------------------------------------------------------------


def _paper_norm():
    return PiecewiseFunction(
        (
            _lin([1, 1], 0, Q1),
            oracle_piece("paper-norm/f2", Q2),
            _lin([-1, -1], 0, Q3),
            oracle_piece("paper-norm/f4", Q4),
        ),
        exceptional=[(0, 0)],
        name="paper-norm",
    )


def _neg_abs_1d():
    return PiecewiseFunction(
        (_lin([1], 0, _poly(([1], 0))), _lin([-1], 0, _poly(([-1], 0)))),
        name="neg-abs-1d",
    )


def _ex_6_2():
    return PiecewiseFunction(
        tuple(oracle_piece(f"ex-6.2/f{k}", D) for k, D in zip(range(1, 5), (Q1, Q2, Q3, Q4))),
        exceptional=[(0, 0)],
        name="ex-6.2",
    )


def _ex_6_3():
    return PiecewiseFunction(
        (
            oracle_piece("ex-6.3/f1", Q1),
            _plq([[2, 0], [0, 0]], [0, 1], 0, Q2),
            oracle_piece("ex-6.3/f3", Q3),
            _plq([[2, 0], [0, 0]], [0, -1], 0, Q4),
        ),
        exceptional=[(0, 0)],
        name="ex-6.3",
    )


def _ex_7_2():
    # max{-x, y} on x >= 0 and max{x, y} on x <= 0, each split at its kink
    return PiecewiseFunction(
        (
            _lin([-1, 0], 0, _poly(([-1, 0], 0), ([1, 1], 0))),
            _lin([1, 0], 0, _poly(([1, 0], 0), ([-1, 1], 0))),
            _lin([0, 1], 0, _poly(([-1, 0], 0), ([-1, -1], 0))),
            _lin([0, 1], 0, _poly(([1, 0], 0), ([1, -1], 0))),
        ),
        infinite_E=_poly(([0, 1], 0), eqs=(([1, 0], 0),)),
        name="ex-7.2",
    )


def _ex_7_3():
    return PiecewiseFunction(
        (
            _lin([0, 1], 0, _poly(([-1, -1], -1), ([-1, 0], 0), ([0, -1], 0))),
            _lin([0, 1], 0, _poly(([1, -1], -1), ([1, 0], 0), ([0, -1], 0))),
            _lin([0, -1], 0, _poly(([1, 1], -1), ([1, 0], 0), ([0, 1], 0))),
            _lin([0, -1], 0, _poly(([-1, 1], -1), ([-1, 0], 0), ([0, 1], 0))),
            _lin([-1, 0], 1, _poly(([1, 1], 1), ([1, -1], 1), ([-1, 0], 0))),
            _lin([1, 0], 1, _poly(([-1, 1], 1), ([-1, -1], 1), ([1, 0], 0))),
        ),
        exceptional=[(1, 0), (-1, 0)],
        infinite_E=_poly(([0, 1], 1), ([0, -1], 1), eqs=(([1, 0], 0),)),
        name="ex-7.3",
    )


def _abs_x_2d():
    return PiecewiseFunction(
        (_lin([1, 0], 0, _poly(([-1, 0], 0))), _lin([-1, 0], 0, _poly(([1, 0], 0)))),
        name="abs-x-2d",
    )


def _neg_abs_2d():
    return PiecewiseFunction(
        (_lin([-1, 0], 0, _poly(([-1, 0], 0))), _lin([1, 0], 0, _poly(([1, 0], 0)))),
        name="neg-abs-2d",
    )


_BUILDERS = {
    "paper-norm": _paper_norm,
    "neg-abs-1d": _neg_abs_1d,
    "ex-6.2": _ex_6_2,
    "ex-6.3": _ex_6_3,
    "ex-7.2": _ex_7_2,
    "ex-7.3": _ex_7_3,
    "abs-x-2d": _abs_x_2d,
    "neg-abs-2d": _neg_abs_2d,
}

# Documented verdicts, used by tests and by ``examples --list``.
EXPECTED = {
    "paper-norm": "convex",
    "neg-abs-1d": "not_convex",
    "ex-6.2": "convex",
    "ex-6.3": "convex",
    "ex-7.2": "not_convex",
    "ex-7.3": "not_convex",
    "abs-x-2d": "convex",
    "neg-abs-2d": "not_convex",
}


def names() -> list[str]:
    return list(_BUILDERS)


def builtin(name: str) -> PiecewiseFunction:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownNameError(f"unknown example {name!r}; known: {', '.join(_BUILDERS)}") from None


def fixture_filename(name: str) -> str:
    return name.replace("-", "_").replace(".", "_") + ".json"
