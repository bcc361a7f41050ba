"""Standing hypotheses of the convexity theorems.

* the pieces agree on every pairwise overlap of their domains;
* the union of the domains is convex, together with its dimension;
* segments inside the domain decompose into consecutive spans, one piece per span.

Set compatibility never needs a runtime check: every domain is a closed
polyhedron, and finitely many closed convex sets are always compatible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .exact.fourier_motzkin import fourier_motzkin
from .exact.lp import Optimal, maximize
from .exact.numbers import (
    ZERO,
    Vector,
    add,
    dot,
    lerp,
    matvec,
    neg,
    scale,
    sq_norm,
    sub,
    vec,
)
from .outcomes import ConvexityViolation
from .pieces import PiecewiseFunction, PlqPiece, evaluate, sample_in_domain
from .polyhedra import (
    Polyhedron,
    PreconditionError,
    contains_polyhedron,
    intersect,
    region_difference,
    union_hull,
)

ORACLE_VALUE_TOL = 1e-9
ORACLE_COMPAT_SAMPLES = 50


# -- function compatibility ------------------------------------------------------


@dataclass(frozen=True)
class FunctionCompat:
    compatible: bool
    exact: bool
    pair: Optional[tuple[int, int]] = None
    witness: Optional[Vector] = None
    values: Optional[tuple] = None


def _plq_diff_witness(pi: PlqPiece, pj: PlqPiece, R: Polyhedron) -> Optional[Vector]:
    """A point of R where the two quadratics differ, or ``None`` if they
    agree on all of R (equivalently on its affine hull)."""
    r = R.ri_point
    dQ = tuple(tuple(a - b for a, b in zip(ri, rj)) for ri, rj in zip(pi.Q, pj.Q))
    db = sub(pi.b, pj.b)
    dg = pi.gamma - pj.gamma

    def g(x):
        return dot(x, matvec(dQ, x)) / 2 + dot(db, x) + dg

    if g(r) != 0:
        return r
    B = list(R.hull.basis)
    dirs = list(B) + [add(u, v) for u, v in itertools.combinations(B, 2)]
    for d in dirs:
        s = _room(R, r, d)
        for sgn in (1, -1):
            x = add(r, scale(sgn * s, d))
            if g(x) != 0:
                return x
    return None


def _room(P: Polyhedron, x: Vector, d: Vector) -> Fraction:
    s = Fraction(1)
    for a, b in P.ineqs:
        ad = dot(a, d)
        if ad != 0:
            s = min(s, (b - dot(a, x)) / abs(ad))
    return s


def check_function_compatibility(f: PiecewiseFunction, seed: int = 0) -> FunctionCompat:
    exact = True
    rng = np.random.default_rng(seed)
    for i, j in itertools.combinations(range(len(f.pieces)), 2):
        pi, pj = f.pieces[i], f.pieces[j]
        R = intersect(pi.domain, pj.domain)
        if R.is_empty:
            continue
        if pi.is_plq and pj.is_plq:
            w = _plq_diff_witness(pi, pj, R)
            if w is not None:
                return FunctionCompat(False, True, (i, j), w, (pi.value(w), pj.value(w)))
            continue
        exact = False
        pts = [R.ri_point] + [vec(p.tolist()) for p in sample_in_domain(R, ORACLE_COMPAT_SAMPLES, rng)]
        for x in pts:
            vi, vj = float(pi.value(x)), float(pj.value(x))
            if abs(vi - vj) > ORACLE_VALUE_TOL:
                return FunctionCompat(False, False, (i, j), x, (vi, vj))
    return FunctionCompat(True, exact)


# -- domain dimension ------------------------------------------------------------


def domain_dimension(f: PiecewiseFunction) -> int:
    doms = [P for P in f.domains if not P.is_empty]
    if not doms:
        raise ValueError("the function has an empty domain")
    return union_hull(doms).dim


# -- domain convexity ------------------------------------------------------------


@dataclass(frozen=True)
class DomainConvexity:
    convex: bool
    exact: bool
    n_samples: int = 0
    violation: Optional[ConvexityViolation] = None
    covers_declared: Optional[bool] = None
    declared_witness: Optional[Vector] = None
    declared_verified: bool = False


def _pair_hull(P: Polyhedron, R: Polyhedron) -> Polyhedron:
    """``cl conv(P ∪ R)`` by projecting the disjunctive lifting.

    Variables are ``(x, u, lam)`` with ``u ∈ lam·P`` and ``x - u ∈ (1-lam)·R``.
    """
    n = P.n
    zero_n = (ZERO,) * n
    rows = []
    for a, b in P.constraint_rows():
        rows.append((zero_n + a + (-b,), ZERO))
    for a, b in R.constraint_rows():
        # a.(x - u) <= (1 - lam) b
        rows.append((a + neg(a) + (b,), b))
    rows.append((zero_n + zero_n + (Fraction(1),), Fraction(1)))
    rows.append((zero_n + zero_n + (Fraction(-1),), ZERO))
    proj = fourier_motzkin(rows, range(n, 2 * n + 1))
    return Polyhedron(n, proj)


def _split_hull_point(P: Polyhedron, R: Polyhedron, w: Vector):
    """Write ``w = (1-t) x + t y`` with x ∈ P, y ∈ R and t ∈ ]0,1[ if possible."""
    n = P.n
    # variables (u, lam, s) with s <= lam and s <= 1 - lam; maximise s
    ineqs = []
    zero_n = (ZERO,) * n
    for a, b in P.constraint_rows():
        ineqs.append((a + (-b, ZERO), ZERO))
    for a, b in R.constraint_rows():
        # a.(w - u) <= (1 - lam) b  ->  -a.u + b lam <= b - a.w
        ineqs.append((neg(a) + (b, ZERO), b - dot(a, w)))
    ineqs.append((zero_n + (Fraction(-1), Fraction(1)), ZERO))
    ineqs.append((zero_n + (Fraction(1), Fraction(1)), Fraction(1)))
    out = maximize((0,) * n + (0, 1), ineqs, (), n + 2)
    if not isinstance(out, Optimal) or out.value <= 0:
        return None
    u, lam = out.point[:n], out.point[n]
    x = scale(1 / lam, u)
    y = scale(1 / (1 - lam), sub(w, u))
    return x, y, 1 - lam


def _hull_violation(f: PiecewiseFunction, P: Polyhedron, R: Polyhedron, w: Vector):
    doms = f.domains
    cands = [w]
    c = lerp(P.ri_point, R.ri_point, Fraction(1, 2))
    eps = Fraction(1, 2)
    for _ in range(30):
        cands.append(lerp(w, c, eps))
        eps /= 2
    for z in cands:
        if any(D.contains(z) for D in doms):
            continue
        split = _split_hull_point(P, R, z)
        if split is None:
            continue
        x, y, t = split
        fx, fy = evaluate(f, x), evaluate(f, y)
        return ConvexityViolation(x, y, t, float("inf"), (1 - t) * fx + t * fy)
    return None


def _exact_union_convexity(f: PiecewiseFunction) -> tuple[bool, Optional[ConvexityViolation]]:
    doms = [D for D in f.domains if not D.is_empty]
    for P, R in itertools.combinations(doms, 2):
        if contains_polyhedron(P, R) or contains_polyhedron(R, P):
            continue
        H = _pair_hull(P, R)
        w = region_difference(H, doms)
        if w is not None:
            return False, _hull_violation(f, P, R, w)
    return True, None


def _sampled_union_convexity(f: PiecewiseFunction, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    doms = [D for D in f.domains if not D.is_empty]
    pools = [sample_in_domain(D, max(4, n_samples // len(doms)), rng) for D in doms]
    pts = [vec(p.tolist()) for pool in pools for p in pool]
    pts = [x for x in pts if any(D.contains(x) for D in doms)]
    order = rng.permutation(len(pts))
    tested = 0
    for k in range(0, len(order) - 1, 2):
        x, y = pts[order[k]], pts[order[k + 1]]
        tested += 1
        m = lerp(x, y, Fraction(1, 2))
        if not any(D.contains(m) for D in doms):
            fx, fy = evaluate(f, x), evaluate(f, y)
            return False, tested, ConvexityViolation(x, y, Fraction(1, 2), float("inf"), (fx + fy) / 2)
    return True, tested, None


def check_domain_convexity(f: PiecewiseFunction, n_samples: int = 2000, seed: int = 0) -> DomainConvexity:
    doms = [D for D in f.domains if not D.is_empty]
    if not doms:
        raise ValueError("the function has an empty domain")
    covers = None
    witness = None
    D = f.declared_domain
    if D is not None:
        inside = all(contains_polyhedron(D, P) for P in doms)
        witness = region_difference(D, doms)
        covers = witness is None
        if inside and covers and not D.is_empty:
            return DomainConvexity(True, True, covers_declared=True, declared_verified=True)
    if f.n <= 2:
        ok, viol = _exact_union_convexity(f)
        return DomainConvexity(ok, True, violation=viol, covers_declared=covers, declared_witness=witness)
    ok, tested, viol = _sampled_union_convexity(f, n_samples, seed)
    return DomainConvexity(ok, False, tested, viol, covers, witness)


# -- segment tracing -------------------------------------------------------------


@dataclass(frozen=True)
class SegmentDecomposition:
    breakpoints: tuple[Vector, ...]
    piece_of_segment: tuple[int, ...]  # 0-based
    params: tuple[Fraction, ...]


@dataclass(frozen=True)
class NotCovered:
    t: Fraction
    point: Vector


def _segment_interval(P: Polyhedron, x: Vector, d: Vector):
    """``{t ∈ [0,1] : x + t d ∈ P}`` as a closed interval, or ``None``."""
    lo, hi = Fraction(0), Fraction(1)
    for a, b in P.constraint_rows():
        ad, slack = dot(a, d), b - dot(a, x)
        if ad > 0:
            hi = min(hi, slack / ad)
        elif ad < 0:
            lo = max(lo, slack / ad)
        elif slack < 0:
            return None
        if lo > hi:
            return None
    return lo, hi


def trace_segment(f: PiecewiseFunction, x, y) -> Union[SegmentDecomposition, NotCovered]:
    """Greedy decomposition of ``[x, y]``: from the current point take the
    active piece that carries the segment furthest (lowest index on ties)."""
    x, y = vec(x), vec(y)
    doms = f.domains
    if not any(D.contains(x) for D in doms) or not any(D.contains(y) for D in doms):
        raise PreconditionError("segment endpoints must lie in the domain")
    d = sub(y, x)
    intervals = [_segment_interval(D, x, d) for D in doms]
    if all(v == 0 for v in d):
        i = next(k for k, D in enumerate(doms) if D.contains(x))
        return SegmentDecomposition((x, y), (i,), (Fraction(0), Fraction(1)))
    t = Fraction(0)
    pts, idx, params = [x], [], [t]
    while t < 1:
        best, best_hi = None, t
        for i, iv in enumerate(intervals):
            if iv is not None and iv[0] <= t <= iv[1] and iv[1] > best_hi:
                best, best_hi = i, iv[1]
        if best is None:
            later = [iv[0] for iv in intervals if iv is not None and iv[0] > t]
            nxt = min(later) if later else Fraction(1)
            gap = (t + nxt) / 2
            return NotCovered(gap, lerp(x, y, gap))
        t = best_hi
        idx.append(best)
        params.append(t)
        pts.append(y if t == 1 else lerp(x, y, t))
    return SegmentDecomposition(tuple(pts), tuple(idx), tuple(params))


def is_colinearly_ordered(dec: SegmentDecomposition) -> bool:
    x0 = dec.breakpoints[0]
    dists = [sq_norm(sub(p, x0)) for p in dec.breakpoints]
    return all(a <= b for a, b in zip(dists, dists[1:]))


# -- report ----------------------------------------------------------------------


@dataclass(frozen=True)
class CompatReport:
    functions: FunctionCompat
    domain: DomainConvexity
    domain_dimension: int
    sets_compatible: bool = True
    sets_justification: str = "closed-sets"

    def to_json(self) -> dict:
        from .exact.numbers import format_vector

        fc = self.functions
        out = {
            "functions_compatible": fc.compatible,
            "functions_exact": fc.exact,
            "sets_compatible": self.sets_compatible,
            "sets_justification": self.sets_justification,
            "domain_convex": {
                "kind": "exact" if self.domain.exact else "sampled",
                "value": self.domain.convex,
            },
            "domain_dimension": self.domain_dimension,
        }
        if not fc.compatible:
            out["failing_pair"] = [fc.pair[0] + 1, fc.pair[1] + 1]
            out["witness"] = format_vector(fc.witness)
        if self.domain.covers_declared is not None:
            out["covers_declared_domain"] = self.domain.covers_declared
        return out


def compat_report(f: PiecewiseFunction) -> CompatReport:
    return CompatReport(check_function_compatibility(f), check_domain_convexity(f), domain_dimension(f))
