"""Exact polyhedral geometry on H-representations.

A :class:`Polyhedron` is ``{x : a.x <= b for (a, b) in ineqs, a.x = b for
(a, b) in eqs}``. Everything is decided with exact LPs; unbounded sets are
handled directly, never by introducing a bounding box.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .exact.fourier_motzkin import CapabilityError
from .exact.linalg import independent_subset, orthogonal_complement, solve_affine
from .exact.lp import Infeasible, LinearProgram, Optimal, Unbounded, lp_solve, maximize
from .exact.numbers import (
    ZERO,
    Vector,
    dot,
    format_rational,
    format_vector,
    neg,
    primitive,
    q,
    vec,
)


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


Constraint = tuple[Vector, Fraction]


def _constraints(rows, n: int) -> tuple[Constraint, ...]:
    out = []
    for a, b in rows:
        a = vec(a)
        if len(a) != n:
            raise ValueError(f"constraint of length {len(a)} in a {n}-dimensional polyhedron")
        out.append((a, q(b)))
    return tuple(out)


def _canon_eq(a: Vector, b: Fraction) -> Constraint:
    a, b = primitive(a, b)
    lead = next((x for x in a if x != 0), None)
    if lead is not None and lead < 0:
        a, b = neg(a), -b
    return a, b


@dataclass(frozen=True)
class AffineSubspace:
    basepoint: Vector
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, coords: Sequence[Fraction]) -> Vector:
        x = list(self.basepoint)
        for c, v in zip(coords, self.basis):
            if c:
                for k in range(len(x)):
                    x[k] += c * v[k]
        return tuple(x)

    def normals(self) -> list[Vector]:
        return orthogonal_complement(self.basis, len(self.basepoint))

    def contains(self, x: Sequence[Fraction]) -> bool:
        d = tuple(a - b for a, b in zip(x, self.basepoint))
        return all(dot(nv, d) == 0 for nv in self.normals())


@dataclass(frozen=True)
class _Analysis:
    eqs: tuple[Constraint, ...]  # given equalities plus implicit ones
    free: tuple[Constraint, ...]  # inequalities with a strictly slack point
    ri_point: Vector


@dataclass(frozen=True, eq=False)
class Polyhedron:
    n: int
    ineqs: tuple = ()
    eqs: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative dimension")
        object.__setattr__(self, "ineqs", _constraints(self.ineqs, self.n))
        object.__setattr__(self, "eqs", _constraints(self.eqs, self.n))

    # constructors ---------------------------------------------------------

    @classmethod
    def universe(cls, n: int) -> "Polyhedron":
        return cls(n)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        n = len(lo)
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append((e, hi[i]))
            rows.append(([-v for v in e], -q(lo[i])))
        return cls(n, rows)

    @classmethod
    def point(cls, p: Sequence) -> "Polyhedron":
        p = vec(p)
        n = len(p)
        return cls(n, (), [([int(i == j) for j in range(n)], p[i]) for i in range(n)])

    @classmethod
    def from_json(cls, d: dict) -> "Polyhedron":
        n = int(d["n"])
        return cls(n, [(a, b) for a, b in d.get("ineq", [])], [(a, b) for a, b in d.get("eq", [])])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ineq": [[format_vector(a), format_rational(b)] for a, b in self.ineqs],
            "eq": [[format_vector(a), format_rational(b)] for a, b in self.eqs],
        }

    def __repr__(self) -> str:
        def fmt(rows, op):
            return [f"{'+'.join(format_vector(a))}{op}{format_rational(b)}" for a, b in rows]

        body = fmt(self.ineqs, "<=") + fmt(self.eqs, "=")
        return f"Polyhedron(n={self.n}, [{', '.join(body)}])"

    # membership -----------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        if len(x) != self.n:
            raise ValueError("point has the wrong dimension")
        return all(dot(a, x) <= b for a, b in self.ineqs) and all(
            dot(a, x) == b for a, b in self.eqs
        )

    def in_relative_interior(self, x: Sequence) -> bool:
        if self.is_empty or not self.contains(x):
            return False
        x = vec(x)
        return all(dot(a, x) < b for a, b in self._analysis.free)

    def constraint_rows(self) -> list[Constraint]:
        """Inequalities, with each equality split into two."""
        rows = list(self.ineqs)
        for a, b in self.eqs:
            rows.append((a, b))
            rows.append((neg(a), -b))
        return rows

    # cached exact analysis ------------------------------------------------

    @cached_property
    def _analysis(self) -> Optional[_Analysis]:
        n = self.n
        eqs = list(self.eqs)
        ineqs = list(self.ineqs)
        if not ineqs:
            pt = _feasible(n, [], eqs)
            if pt is None:
                return None
            return _Analysis(tuple(_dedupe_eqs(eqs)), (), pt)
        # max t  s.t.  a.x + t <= b,  t <= 1
        rows = [(a + (Fraction(1),), b) for a, b in ineqs]
        rows.append(((ZERO,) * n + (Fraction(1),), Fraction(1)))
        eqrows = [(a + (ZERO,), b) for a, b in eqs]
        out = maximize((0,) * n + (1,), rows, eqrows, n + 1)
        if isinstance(out, Infeasible):
            return None
        assert isinstance(out, Optimal)
        t = out.value
        if t < 0:
            return None
        if t > 0:
            return _Analysis(tuple(_dedupe_eqs(eqs)), tuple(ineqs), out.point[:n])

        m = len(ineqs)
        # max sum s_k  s.t.  a_k.x + s_k <= b_k,  0 <= s_k <= 1
        rows = []
        for k, (a, b) in enumerate(ineqs):
            rows.append((a + tuple(Fraction(int(j == k)) for j in range(m)), b))
        for k in range(m):
            e = tuple(Fraction(int(j == k)) for j in range(m))
            rows.append(((ZERO,) * n + e, Fraction(1)))
            rows.append(((ZERO,) * n + neg(e), ZERO))
        eqrows = [(a + (ZERO,) * m, b) for a, b in eqs]
        out = maximize((0,) * n + (1,) * m, rows, eqrows, n + m)
        assert isinstance(out, Optimal)
        slack = out.point[n:]
        free, implicit = [], []
        for k, (a, b) in enumerate(ineqs):
            if slack[k] > 0:
                free.append((a, b))
                continue
            o = maximize(neg(a), ineqs, eqs, n)
            if isinstance(o, Unbounded) or (isinstance(o, Optimal) and o.value + b > 0):
                free.append((a, b))
            else:
                implicit.append((a, b))
        eqs_all = eqs + implicit
        if free:
            rows = [(a + (Fraction(1),), b) for a, b in free]
            rows.append(((ZERO,) * n + (Fraction(1),), Fraction(1)))
            eqrows = [(a + (ZERO,), b) for a, b in eqs_all]
            out = maximize((0,) * n + (1,), rows, eqrows, n + 1)
            assert isinstance(out, Optimal) and out.value > 0
            pt = out.point[:n]
        else:
            pt = _feasible(n, [], eqs_all)
        return _Analysis(tuple(_dedupe_eqs(eqs_all)), tuple(free), pt)

    @property
    def is_empty(self) -> bool:
        return self._analysis is None

    @cached_property
    def hull(self) -> AffineSubspace:
        an = self._analysis
        if an is None:
            raise PreconditionError("empty polyhedron has no affine hull")
        sol = solve_affine(list(an.eqs), self.n)
        assert sol is not None
        base, basis = sol
        return AffineSubspace(base, tuple(basis))

    @property
    def dimension(self) -> int:
        return self.hull.dim

    @property
    def ri_point(self) -> Vector:
        an = self._analysis
        if an is None:
            raise PreconditionError("empty polyhedron has no relative interior")
        return an.ri_point

    def normalized(self) -> "Polyhedron":
        an = self._analysis
        if an is None:
            raise PreconditionError("empty polyhedron")
        free = _dedupe_ineqs(an.free)
        return Polyhedron(self.n, free, an.eqs)


def _dedupe_eqs(eqs: Iterable[Constraint]) -> list[Constraint]:
    seen: dict = {}
    for a, b in eqs:
        if all(x == 0 for x in a):
            continue
        key = _canon_eq(a, b)
        seen.setdefault(key, (a, b))
    return [k for k in seen]


def _dedupe_ineqs(rows: Iterable[Constraint]) -> list[Constraint]:
    seen: dict = {}
    for a, b in rows:
        key = primitive(a, b)
        if key not in seen:
            seen[key] = (a, b)
    return list(seen.values())


def _feasible(n, ineqs, eqs) -> Optional[Vector]:
    out = maximize((0,) * n, ineqs, eqs, n)
    if isinstance(out, Infeasible):
        return None
    return out.point


# -- module-level operations --------------------------------------------------


def is_empty(P: Polyhedron) -> bool:
    return P.is_empty


def implicit_equalities(P: Polyhedron) -> Polyhedron:
    if P.is_empty:
        raise PreconditionError("implicit_equalities needs a nonempty polyhedron")
    return P.normalized()


def affine_hull(P: Polyhedron) -> AffineSubspace:
    return P.hull


def dimension(P: Polyhedron) -> int:
    return P.dimension


def relative_interior_point(P: Polyhedron) -> Vector:
    return P.ri_point


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.n != Q.n:
        raise ValueError("intersect: ambient dimensions differ")
    R = Polyhedron(P.n, P.ineqs + Q.ineqs, P.eqs + Q.eqs)
    if R.is_empty:
        return R
    R = R.normalized()
    return Polyhedron(R.n, _drop_redundant(list(R.ineqs), list(R.eqs), R.n), R.eqs)


def _drop_redundant(rows: list[Constraint], eqs: list[Constraint], n: int) -> list[Constraint]:
    kept = list(rows)
    i = 0
    while i < len(kept):
        a, b = kept[i]
        out = maximize(a, kept[:i] + kept[i + 1:], eqs, n)
        if isinstance(out, Optimal) and out.value <= b:
            kept.pop(i)
        else:
            i += 1
    return kept


def contains_polyhedron(P: Polyhedron, Q: Polyhedron) -> bool:
    """Exact test of ``Q ⊆ P`` by one LP per constraint of P."""
    if P.n != Q.n:
        raise ValueError("dimension mismatch")
    if Q.is_empty:
        return True
    if not P.contains(Q.ri_point):
        return False
    ineqs, eqs = list(Q.ineqs), list(Q.eqs)
    for a, b in P.ineqs:
        out = maximize(a, ineqs, eqs, P.n)
        if not isinstance(out, Optimal) or out.value > b:
            return False
    for a, b in P.eqs:
        for sgn in (1, -1):
            out = maximize(tuple(sgn * x for x in a), ineqs, eqs, P.n)
            if not isinstance(out, Optimal) or out.value != sgn * b:
                return False
    return True


def set_equal(P: Polyhedron, Q: Polyhedron) -> bool:
    return contains_polyhedron(P, Q) and contains_polyhedron(Q, P)


# -- cones -------------------------------------------------------------------


@dataclass(frozen=True)
class PolyCone:
    """``cone(generators) + span(lineality)``."""

    n: int
    generators: tuple[Vector, ...] = ()
    lineality: tuple[Vector, ...] = ()

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        g, l = list(self.generators), list(self.lineality)
        k = len(g) + len(l)
        if k == 0:
            return all(x == 0 for x in v)
        cons = []
        for i in range(self.n):
            row = [gg[i] for gg in g] + [ll[i] for ll in l]
            cons.append((row, "=", v[i]))
        for j in range(len(g)):
            cons.append(([-int(i == j) for i in range(k)], "<=", 0))
        return not isinstance(lp_solve(LinearProgram([0] * k, cons, k)), Infeasible)

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in v) for v in self.generators + self.lineality)

    def contains_cone(self, other: "PolyCone") -> bool:
        return all(self.contains(v) for v in other.generators) and all(
            self.contains(v) and self.contains(neg(v)) for v in other.lineality
        )

    def equals(self, other: "PolyCone") -> bool:
        return self.contains_cone(other) and other.contains_cone(self)

    def lineality_space(self) -> list[Vector]:
        """Basis of ``K ∩ -K``."""
        cands = list(self.lineality) + [g for g in self.generators if self.contains(neg(g))]
        return independent_subset(cands)


def normal_cone_at(P: Polyhedron, x: Sequence) -> PolyCone:
    x = vec(x)
    if not P.contains(x):
        raise PreconditionError("normal_cone_at: point is not in the polyhedron")
    gens = tuple(a for a, b in P.ineqs if dot(a, x) == b and any(v != 0 for v in a))
    lin = tuple(a for a, _ in P.eqs if any(v != 0 for v in a))
    return PolyCone(P.n, gens, lin)


def tangent_cone_at(P: Polyhedron, x: Sequence) -> Polyhedron:
    """Cone of feasible directions ``{d : x + s d ∈ P for small s > 0}``."""
    x = vec(x)
    act = [(a, ZERO) for a, b in P.ineqs if dot(a, x) == b]
    return Polyhedron(P.n, act, [(a, ZERO) for a, _ in P.eqs])


# -- region differences ------------------------------------------------------


def _strict_feasible(n, closed, strict, eqs) -> bool:
    """Is ``{closed <=, strict: a.x > b, eqs}`` nonempty?"""
    if not strict:
        return _feasible(n, closed, eqs) is not None
    rows = [(a + (ZERO,), b) for a, b in closed]
    rows += [(neg(a) + (Fraction(1),), -b) for a, b in strict]
    rows.append(((ZERO,) * n + (Fraction(1),), Fraction(1)))
    eqrows = [(a + (ZERO,), b) for a, b in eqs]
    out = maximize((0,) * n + (1,), rows, eqrows, n + 1)
    return isinstance(out, Optimal) and out.value > 0


def region_difference(P: Polyhedron, cover: Sequence[Polyhedron]) -> Optional[Vector]:
    """Decide ``P ⊆ ⋃ cover`` exactly, in any dimension.

    Returns ``None`` when covered, otherwise a relative-interior point of a
    leftover cell of ``P`` minus the union.
    """
    if P.is_empty:
        return None
    n = P.n
    eqs = list(P.eqs)
    cells = [(list(P.ineqs), [])]
    for C in cover:
        if C.n != n:
            raise ValueError("cover element has the wrong dimension")
        if C.is_empty:
            continue
        rows = C.constraint_rows()
        nxt = []
        for closed, strict in cells:
            prefix: list[Constraint] = []
            for a, b in rows:
                cand = (closed + prefix, strict + [(a, b)])
                if _strict_feasible(n, cand[0], cand[1], eqs):
                    nxt.append(cand)
                prefix = prefix + [(a, b)]
        cells = nxt
        if not cells:
            return None
    closed, strict = cells[0]
    cell = Polyhedron(n, closed + [(neg(a), -b) for a, b in strict], eqs)
    return cell.ri_point


def region_difference_2d(P: Polyhedron, cover: Sequence[Polyhedron]) -> Optional[Vector]:
    if P.n != 2:
        raise CapabilityError("region_difference_2d only handles the plane")
    return region_difference(P, cover)


# -- overlap faces -----------------------------------------------------------

MAX_PIECES = 16


@dataclass(frozen=True, eq=False)
class OverlapFace:
    region: Polyhedron
    active: frozenset
    order: int = 0

    @property
    def dimension(self) -> int:
        return self.region.dimension

    @property
    def representative(self) -> Vector:
        return self.region.ri_point

    def __repr__(self) -> str:
        return f"OverlapFace(active={sorted(self.active)}, dim={self.dimension})"


def enumerate_overlap_faces(domains: Sequence[Polyhedron]) -> list[OverlapFace]:
    """All distinct nonempty intersections of two or more domains, each with
    its maximal active set, in order of discovery (pairs first)."""
    k = len(domains)
    if k > MAX_PIECES:
        raise CapabilityError(f"{k} pieces exceeds the face-enumeration guard of {MAX_PIECES}")
    if len({P.n for P in domains}) > 1:
        raise ValueError("domains live in different dimensions")

    faces: dict[frozenset, OverlapFace] = {}
    queue: list[frozenset] = []

    def record(members: Iterable[int], region: Polyhedron):
        members = set(members)
        rep = region.ri_point
        for j in range(k):
            if j in members:
                continue
            if domains[j].contains(rep) and contains_polyhedron(domains[j], region):
                members.add(j)
        key = frozenset(members)
        if key not in faces:
            faces[key] = OverlapFace(region, key, len(faces))
            queue.append(key)

    for i, j in itertools.combinations(range(k), 2):
        R = intersect(domains[i], domains[j])
        if not R.is_empty:
            record((i, j), R)
    while queue:
        T = queue.pop(0)
        base = faces[T].region
        for j in range(k):
            if j in T:
                continue
            R = intersect(base, domains[j])
            if not R.is_empty:
                record(T | {j}, R)
    return sorted(faces.values(), key=lambda F: F.order)


# -- unions ------------------------------------------------------------------


def union_hull(domains: Sequence[Polyhedron]) -> AffineSubspace:
    """Affine hull of a union of nonempty polyhedra."""
    from .exact.linalg import rref  # local: keeps module import light

    nonempty = [P for P in domains if not P.is_empty]
    if not nonempty:
        raise PreconditionError("union of empty sets")
    n = nonempty[0].n
    base = nonempty[0].hull.basepoint
    dirs: list[Vector] = []
    for P in nonempty:
        h = P.hull
        dirs.append(tuple(a - b for a, b in zip(h.basepoint, base)))
        dirs.extend(h.basis)
    dirs = [d for d in dirs if any(x != 0 for x in d)]
    if not dirs:
        return AffineSubspace(base, ())
    r, _ = rref(dirs, n)
    return AffineSubspace(base, tuple(independent_subset(list(r))))


def in_relative_interior_of_union(
    domains: Sequence[Polyhedron], x: Sequence, hull: AffineSubspace | None = None
) -> bool:
    """Exact test of ``x ∈ ri(⋃ domains)``.

    Near ``x`` the union agrees with ``x`` plus the union of the tangent
    cones of the domains containing ``x``; the point is relatively interior
    iff those cones cover the direction space of the hull.
    """
    x = vec(x)
    if hull is None:
        hull = union_hull(domains)
    act = [P for P in domains if not P.is_empty and P.contains(x)]
    if not act:
        return False
    n = len(x)
    dirspace = Polyhedron(n, (), [(v, ZERO) for v in hull.normals()])
    cones = [tangent_cone_at(P, x) for P in act]
    return region_difference(dirspace, cones) is None
