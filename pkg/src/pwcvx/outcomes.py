"""Result types shared by the model, the certifier and the sampling oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact.numbers import Vector, format_rational, format_vector


def _fmt_value(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return float(v)


@dataclass(frozen=True)
class ConvexityViolation:
    """``f((1-t)x + t y) > (1-t) f(x) + t f(y)`` with the values attached.

    ``exact`` is true when all three values are exact rationals.
    """

    x: Vector
    y: Vector
    t: Fraction
    lhs: object
    rhs: object

    @property
    def margin(self):
        if self.lhs == float("inf"):
            return float("inf")
        return self.lhs - self.rhs

    @property
    def exact(self) -> bool:
        return isinstance(self.lhs, Fraction) and isinstance(self.rhs, Fraction)

    def to_json(self) -> dict:
        lhs = "inf" if self.lhs == float("inf") else _fmt_value(self.lhs)
        return {
            "x": format_vector(self.x),
            "y": format_vector(self.y),
            "t": format_rational(self.t),
            "lhs": lhs,
            "rhs": _fmt_value(self.rhs),
        }


@dataclass(frozen=True)
class Certified:
    evidence: str = "ldlt"


@dataclass(frozen=True)
class Refuted:
    witness: Vector  # direction of negative curvature, or the midpoint for oracles
    violation: ConvexityViolation | None = None


@dataclass(frozen=True)
class SampledOk:
    n_samples: int


PieceConvexity = Union[Certified, Refuted, SampledOk]
