"""Pieces, piecewise functions and per-piece subdifferentials.

Values computed from PLQ data are exact Fractions. Anything that touched an
oracle callback is a Python float, and the two never mix silently: an
expression involving an oracle value is a float, which the certifier treats
as non-exact evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .exact.ldlt import NotPsd, NotSymmetricError, ldlt_psd
from .exact.numbers import (
    ZERO,
    Matrix,
    Vector,
    add,
    dot,
    is_symmetric,
    lerp,
    mat,
    mat_scale,
    matvec,
    q,
    quad_form,
    scale,
    sub,
    to_floats,
    vec,
)
from .outcomes import Certified, ConvexityViolation, PieceConvexity, Refuted, SampledOk
from .polyhedra import PolyCone, Polyhedron, PreconditionError, normal_cone_at

INF = math.inf


@dataclass(frozen=True, eq=False)
class PlqPiece:
    """``½<x, Qx> + <b, x> + gamma`` on ``domain``."""

    Q: Matrix
    b: Vector
    gamma: Fraction
    domain: Polyhedron
    label: str = ""

    is_plq = True

    def __post_init__(self):
        Q, b = mat(self.Q), vec(self.b)
        n = self.domain.n
        if len(Q) != n or any(len(r) != n for r in Q):
            raise ValueError(f"Q must be {n}x{n}")
        if len(b) != n:
            raise ValueError(f"b must have length {n}")
        if not is_symmetric(Q):
            raise NotSymmetricError("Q must be symmetric")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "gamma", q(self.gamma))

    @classmethod
    def affine(cls, b, gamma, domain: Polyhedron, label: str = "") -> "PlqPiece":
        n = domain.n
        return cls(tuple((0,) * n for _ in range(n)), b, gamma, domain, label)

    @property
    def n(self) -> int:
        return self.domain.n

    def value(self, x: Vector) -> Fraction:
        return quad_form(self.Q, x) / 2 + dot(self.b, x) + self.gamma

    def gradient(self, x: Vector) -> Vector:
        return add(matvec(self.Q, x), self.b)

    def value_float(self, x) -> float:
        x = np.asarray(x, dtype=float)
        Q = np.array(self.Q, dtype=float)
        return float(0.5 * x @ Q @ x + np.array(self.b, dtype=float) @ x + float(self.gamma))

    def gradient_float(self, x) -> np.ndarray:
        return np.array(self.Q, dtype=float) @ np.asarray(x, dtype=float) + np.array(self.b, dtype=float)

    def scaled(self, lam) -> "PlqPiece":
        lam = q(lam)
        return PlqPiece(mat_scale(lam, self.Q), scale(lam, self.b), lam * self.gamma, self.domain, self.label)


@dataclass(frozen=True, eq=False)
class OraclePiece:
    """A black-box convex function on a polyhedron.

    ``evaluate`` and ``gradient`` receive a tuple of floats. They must be
    pure; the gradient is only required on the interior of the domain.
    """

    domain: Polyhedron
    evaluate: Callable[[tuple], float]
    gradient: Callable[[tuple], Sequence[float]]
    label: str = ""

    is_plq = False

    @property
    def n(self) -> int:
        return self.domain.n

    def value(self, x) -> float:
        return float(self.evaluate(to_floats(x)))

    def value_float(self, x) -> float:
        return float(self.evaluate(tuple(float(v) for v in x)))

    def gradient_float(self, x) -> np.ndarray:
        return np.asarray(self.gradient(tuple(float(v) for v in x)), dtype=float)


Piece = Union[PlqPiece, OraclePiece]


@dataclass(frozen=True, eq=False)
class PiecewiseFunction:
    pieces: tuple
    exceptional: tuple = ()
    declared_domain: Optional[Polyhedron] = None
    infinite_E: Optional[Polyhedron] = None
    name: str = ""

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise ValueError("a piecewise function needs at least one piece")
        dims = {p.n for p in pieces}
        if len(dims) != 1:
            raise ValueError("pieces live in different dimensions")
        n = dims.pop()
        ex = tuple(vec(e) for e in self.exceptional)
        if any(len(e) != n for e in ex):
            raise ValueError("exceptional point of the wrong dimension")
        for extra in (self.declared_domain, self.infinite_E):
            if extra is not None and extra.n != n:
                raise ValueError("declared polyhedron of the wrong dimension")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "exceptional", tuple(dict.fromkeys(ex)))

    @property
    def n(self) -> int:
        return self.pieces[0].n

    @property
    def all_plq(self) -> bool:
        return all(p.is_plq for p in self.pieces)

    @property
    def domains(self) -> list[Polyhedron]:
        return [p.domain for p in self.pieces]

    def with_pieces(self, pieces, **kw) -> "PiecewiseFunction":
        args = dict(
            exceptional=self.exceptional,
            declared_domain=self.declared_domain,
            infinite_E=self.infinite_E,
            name=self.name,
        )
        args.update(kw)
        return PiecewiseFunction(tuple(pieces), **args)

    def permuted(self, order: Sequence[int]) -> "PiecewiseFunction":
        return self.with_pieces([self.pieces[i] for i in order])

    def scaled(self, lam) -> "PiecewiseFunction":
        if not self.all_plq:
            raise TypeError("only all-PLQ functions can be scaled exactly")
        return self.with_pieces([p.scaled(lam) for p in self.pieces])


def active_indices(f: PiecewiseFunction, x) -> tuple[int, ...]:
    """0-based indices of the pieces whose domain contains ``x``."""
    x = vec(x)
    return tuple(i for i, p in enumerate(f.pieces) if p.domain.contains(x))


def evaluate(f: PiecewiseFunction, x):
    """``min f_i(x)`` over active pieces: a Fraction if every active piece is
    PLQ, a float otherwise, and ``inf`` off the domain."""
    x = vec(x)
    act = active_indices(f, x)
    if not act:
        return INF
    vals = [f.pieces[i].value(x) for i in act]
    if all(isinstance(v, Fraction) for v in vals):
        return min(vals)
    return min(float(v) for v in vals)


def evaluate_float(f: PiecewiseFunction, x, tol: float = 1e-12) -> float:
    """Floating-point evaluation with a small membership tolerance."""
    x = np.asarray(x, dtype=float)
    best = INF
    for p in f.pieces:
        if _float_member(p.domain, x, tol):
            best = min(best, p.value_float(x))
    return best


def _float_member(P: Polyhedron, x: np.ndarray, tol: float) -> bool:
    for a, b in P.ineqs:
        if float(np.dot(to_floats(a), x)) > float(b) + tol:
            return False
    for a, b in P.eqs:
        if abs(float(np.dot(to_floats(a), x)) - float(b)) > tol:
            return False
    return True


# -- subdifferentials ----------------------------------------------------------


@dataclass(frozen=True)
class SubdiffSet:
    """``base + cone``."""

    base: Vector
    cone: PolyCone

    def contains(self, v) -> bool:
        return self.cone.contains(sub(vec(v), self.base))

    def equals(self, other: "SubdiffSet") -> bool:
        if not self.cone.equals(other.cone):
            return False
        d = sub(self.base, other.base)
        return self.cone.contains(d) and self.cone.contains(tuple(-x for x in d))


def plq_subdifferential(p: PlqPiece, x) -> SubdiffSet:
    """``∂p(x) = Qx + b + N_dom(x)`` for a convex PLQ piece."""
    x = vec(x)
    if not p.domain.contains(x):
        raise PreconditionError("point is outside the piece's domain")
    return SubdiffSet(p.gradient(x), normal_cone_at(p.domain, x))


# -- piece convexity -------------------------------------------------------------


def _line_room(P: Polyhedron, x: Vector, d: Vector) -> Fraction:
    """Largest ``s <= 1`` with ``x ± s d`` both in P (x in ri P, d in its hull)."""
    s = Fraction(1)
    for a, b in P.ineqs:
        ad = dot(a, d)
        slack = b - dot(a, x)
        if ad != 0:
            s = min(s, slack / abs(ad))
    return s


def piece_is_convex(p: Piece, n_samples: int = 2000, seed: int = 0) -> PieceConvexity:
    """PLQ: exact, by LDLᵀ of the Hessian restricted to the domain's
    direction space. Oracle: midpoint sampling on the domain."""
    if p.domain.is_empty:
        return Certified("empty domain")
    if p.is_plq:
        B = p.domain.hull.basis
        if not B:
            return Certified("point domain")
        Bt = tuple(B)
        M = tuple(tuple(quad_form_pair(p.Q, u, v) for v in Bt) for u in Bt)
        out = ldlt_psd(M)
        if not isinstance(out, NotPsd):
            return Certified("ldlt")
        d = tuple(sum((c * v[k] for c, v in zip(out.witness, Bt)), ZERO) for k in range(p.n))
        x0 = p.domain.ri_point
        s = _line_room(p.domain, x0, d) / 2
        x, y = sub(x0, scale(s, d)), add(x0, scale(s, d))
        half = Fraction(1, 2)
        viol = ConvexityViolation(x, y, half, p.value(x0), (p.value(x) + p.value(y)) / 2)
        assert viol.margin > 0
        return Refuted(d, viol)
    return _sample_oracle_convexity(p, n_samples, seed)


def quad_form_pair(Q: Matrix, u: Vector, v: Vector) -> Fraction:
    return dot(u, matvec(Q, v))


def sample_in_domain(P: Polyhedron, k: int, rng: np.random.Generator, radius: float = 4.0) -> np.ndarray:
    """Up to ``k`` float points of P, drawn uniformly from a box in the hull
    coordinates centred at the relative-interior point."""
    base = np.array(to_floats(P.ri_point))
    B = np.array([to_floats(v) for v in P.hull.basis]) if P.hull.basis else np.zeros((0, P.n))
    if B.shape[0] == 0:
        return base[None, :].repeat(k, axis=0)
    A = np.array([to_floats(a) for a, _ in P.ineqs]) if P.ineqs else np.zeros((0, P.n))
    bb = np.array([float(b) for _, b in P.ineqs])
    out: list[np.ndarray] = []
    for _ in range(20):
        c = rng.uniform(-radius, radius, size=(4 * k, B.shape[0]))
        pts = base + c @ B
        if A.shape[0]:
            ok = np.all(pts @ A.T <= bb + 1e-12, axis=1)
            pts = pts[ok]
        out.append(pts)
        if sum(len(o) for o in out) >= k:
            break
    pts = np.concatenate(out)[:k]
    return pts


def _sample_oracle_convexity(p: OraclePiece, n_samples: int, seed: int) -> PieceConvexity:
    rng = np.random.default_rng(seed)
    xs = sample_in_domain(p.domain, n_samples, rng)
    ys = sample_in_domain(p.domain, n_samples, rng)
    m = min(len(xs), len(ys))
    for k in range(m):
        x, y = xs[k], ys[k]
        mid = 0.5 * (x + y)
        lhs = p.value_float(mid)
        rhs = 0.5 * (p.value_float(x) + p.value_float(y))
        if lhs > rhs + 1e-9 * (1.0 + abs(rhs)):
            xq, yq = vec(x.tolist()), vec(y.tolist())
            mq = lerp(xq, yq, Fraction(1, 2))
            viol = ConvexityViolation(xq, yq, Fraction(1, 2), p.value(mq), (p.value(xq) + p.value(yq)) / 2)
            return Refuted(mq, viol)
    return SampledOk(m)
