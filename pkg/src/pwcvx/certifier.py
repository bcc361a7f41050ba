"""Decide convexity of a piecewise-defined function.

Pipeline: piece convexity, function compatibility, domain convexity and
dimension, then one of

* the 1-D breakpoint chain (dimension 1),
* gradient matching on overlaps, then exact subdifferential intersections
  on every overlap face in ``ri dom f`` (all pieces PLQ),
* gradient limits on the faces, falling back to sampled subdifferential
  intersections face by face (some oracle piece).

A failing intersection is turned into a concrete violating triple by
:func:`disprove`; without one the verdict is inconclusive, never "not convex".
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .compatibility import (
    DomainConvexity,
    check_domain_convexity,
    check_function_compatibility,
    domain_dimension,
)
from .exact.fourier_motzkin import CapabilityError, fourier_motzkin
from .exact.linalg import orthogonal_complement
from .exact.lp import Infeasible, LinearProgram, lp_solve
from .exact.numbers import (
    ZERO,
    Vector,
    add,
    dot,
    format_rational,
    format_vector,
    lerp,
    matvec,
    neg,
    scale,
    sub,
    unit,
    vec,
)
from .outcomes import Certified, ConvexityViolation, Refuted
from .pieces import PiecewiseFunction, evaluate, piece_is_convex
from .polyhedra import (
    AffineSubspace,
    OverlapFace,
    Polyhedron,
    contains_polyhedron,
    enumerate_overlap_faces,
    in_relative_interior_of_union,
    normal_cone_at,
    region_difference,
    union_hull,
)
from .sampling.oracle import Schedule, estimate_boundary_limit

LIMIT_TOL = 1e-9
ORACLE_MARGIN = 1e-7
SNAP_DENOMINATOR = 10**6

ROUTES = ("PlqGradientMatch", "SubdiffIntersection", "GradientLimits", "OneDimChain")
FULLY_EXACT = "FullyExact"
MODULO_ORACLE = "ModuloOracleSampling"
REPRESENTATIVE = "ModuloRepresentativePoints"


def _pt(x) -> str:
    return "(" + ", ".join(format_vector(x)) + ")"


# -- verdicts ------------------------------------------------------------------------


@dataclass(frozen=True)
class Hypothesis:
    name: str
    status: str  # satisfied | failed | unverified | not-applicable
    evidence: str = ""

    def to_json(self) -> dict:
        return {"hypothesis": self.name, "status": self.status, "evidence": self.evidence}


@dataclass(frozen=True)
class CertTrace:
    route: str
    hypothesis_log: tuple
    exactness: str
    exceptional_used: tuple = ()


@dataclass(frozen=True)
class Convex:
    certificate: CertTrace

    tag = "convex"


@dataclass(frozen=True)
class NotConvex:
    witness: Vector
    counterexample: ConvexityViolation
    hypothesis_log: tuple = ()
    exact: bool = True

    tag = "not_convex"


@dataclass(frozen=True)
class Inconclusive:
    reasons: tuple
    hypothesis_log: tuple = ()

    tag = "inconclusive"


Verdict = Union[Convex, NotConvex, Inconclusive]


def verdict_to_json(v: Verdict) -> dict:
    out: dict = {"verdict": v.tag, "route": None, "exactness": None, "witness": None, "counterexample": None}
    if isinstance(v, Convex):
        c = v.certificate
        out["route"] = c.route
        out["exactness"] = c.exactness
        out["hypothesis_log"] = [h.to_json() for h in c.hypothesis_log]
        out["exceptional_used"] = [format_vector(p) for p in c.exceptional_used]
    elif isinstance(v, NotConvex):
        out["exactness"] = FULLY_EXACT if v.exact else MODULO_ORACLE
        out["witness"] = format_vector(v.witness)
        out["counterexample"] = v.counterexample.to_json()
        out["hypothesis_log"] = [h.to_json() for h in v.hypothesis_log]
    else:
        out["reasons"] = list(v.reasons)
        out["hypothesis_log"] = [h.to_json() for h in v.hypothesis_log]
    return out


# -- subdifferential check outcomes ---------------------------------------------------


@dataclass(frozen=True)
class HoldsEverywhere:
    representative_only: bool = False


@dataclass(frozen=True)
class HoldsExceptPointsInE:
    points: tuple


@dataclass(frozen=True)
class Fails:
    witness: Vector
    representative_only: bool = False


SubdiffCheckOutcome = Union[HoldsEverywhere, HoldsExceptPointsInE, Fails]


@dataclass(frozen=True)
class GradHolds:
    pass


@dataclass(frozen=True)
class GradFails:
    pair: tuple
    witness: Vector


@dataclass(frozen=True)
class LimitsHold:
    exceptional_used: tuple = ()


@dataclass(frozen=True)
class LimitsFail:
    witness: Vector
    pair: tuple
    limits: tuple  # the two estimates
    face: Optional[OverlapFace] = None


@dataclass(frozen=True)
class LimitsUnreliable:
    witness: Vector
    piece: int


# -- helpers ---------------------------------------------------------------------------


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PLQ_CERTIFY_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items: Sequence):
    """Order-preserving map, threaded when ``PLQ_CERTIFY_THREADS`` > 1."""
    k = _threads()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


def _room(P: Polyhedron, x: Vector, d: Vector) -> Fraction:
    s = Fraction(1)
    for a, b in P.ineqs:
        ad = dot(a, d)
        if ad != 0:
            s = min(s, (b - dot(a, x)) / abs(ad))
    return s


def _face_coords(face: OverlapFace):
    """Parametrisation ``x = p + B s`` of the face's affine hull and the face
    itself pulled back to s-coordinates."""
    R = face.region
    h = R.hull
    p, B = h.basepoint, list(h.basis)
    k = len(B)
    rows = []
    for a, b in R.ineqs:
        rows.append((tuple(dot(a, v) for v in B), b - dot(a, p)))
    return p, B, Polyhedron(k, rows)


def _to_x(p: Vector, B: list, s: Sequence) -> Vector:
    x = p
    for c, v in zip(s, B):
        if c:
            x = add(x, scale(c, v))
    return x


def intersection_point(bases: Sequence[Vector], cones) -> Optional[Vector]:
    """A point of ``⋂ (bases[i] + cones[i])`` or ``None`` (exact LP)."""
    n = len(bases[0])
    # variables: u (n), then the multipliers of every cone
    blocks = []
    nv = n
    for K in cones:
        blocks.append((nv, K))
        nv += len(K.generators) + len(K.lineality)
    cons = []
    for (off, K), base in zip(blocks, bases):
        gens = list(K.generators) + list(K.lineality)
        for r in range(n):
            row = [ZERO] * nv
            row[r] = Fraction(1)
            for j, g in enumerate(gens):
                row[off + j] = -g[r]
            cons.append((row, "=", base[r]))
        for j in range(len(K.generators)):
            row = [ZERO] * nv
            row[off + j] = Fraction(-1)
            cons.append((row, "<=", 0))
    out = lp_solve(LinearProgram([0] * nv, cons, nv))
    if isinstance(out, Infeasible):
        return None
    return out.point[:n]


# -- gradient matching -------------------------------------------------------------------


def check_gradient_matching(f: PiecewiseFunction, faces: Optional[list] = None) -> Union[GradHolds, GradFails]:
    if not f.all_plq:
        raise CapabilityError("gradient matching needs every piece to be PLQ")
    if faces is None:
        faces = enumerate_overlap_faces(f.domains)
    for face in faces:
        r = face.representative
        B = face.region.hull.basis
        for i, j in itertools.combinations(sorted(face.active), 2):
            pi, pj = f.pieces[i], f.pieces[j]
            if pi.gradient(r) != pj.gradient(r):
                return GradFails((i, j), r)
            dQ = tuple(tuple(a - b for a, b in zip(ri, rj)) for ri, rj in zip(pi.Q, pj.Q))
            for v in B:
                if any(matvec(dQ, v)):
                    return GradFails((i, j), add(r, scale(_room(face.region, r, v), v)))
    return GradHolds()


# -- exact subdifferential intersection on a face ----------------------------------------


def check_subdiff_intersection_on_face(
    face: OverlapFace, f: PiecewiseFunction, exceptional: Sequence[Vector] = ()
) -> SubdiffCheckOutcome:
    """Region of the face where ``⋂_{i ∈ active} ∂f_i(x)`` is nonempty,
    compared with the face itself."""
    act = sorted(face.active)
    if not all(f.pieces[i].is_plq for i in act):
        raise CapabilityError("exact face check needs PLQ pieces")
    E = set(exceptional)
    r = face.representative
    p, B, Fs = _face_coords(face)
    k = len(B)
    n = f.n
    cones = [normal_cone_at(f.pieces[i].domain, r) for i in act]
    gens = [list(K.generators) for K in cones]
    lins = [list(K.lineality) for K in cones]
    n_mult = sum(len(g) + len(l) for g, l in zip(gens, lins))
    total = k + n_mult

    def pointwise(x):
        return intersection_point([f.pieces[i].gradient(x) for i in act], cones)

    if k == 0:
        if pointwise(r) is not None:
            return HoldsEverywhere()
        if tuple(r) in E:
            return HoldsExceptPointsInE((r,))
        return Fails(r)

    # grad_i(p + B s) + G_i lam_i + L_i mu_i must agree across active pieces
    offsets = []
    off = k
    for g, l in zip(gens, lins):
        offsets.append(off)
        off += len(g) + len(l)

    def expr(idx):
        """Rows (coeffs over all variables, constant) of component-wise
        gradient-plus-cone for active piece ``idx``."""
        pc = f.pieces[act[idx]]
        base = pc.gradient(p)
        QB = [matvec(pc.Q, v) for v in B]
        allg = gens[idx] + lins[idx]
        out = []
        for comp in range(n):
            row = [ZERO] * total
            for j in range(k):
                row[j] = QB[j][comp]
            for j, g in enumerate(allg):
                row[offsets[idx] + j] = g[comp]
            out.append((row, base[comp]))
        return out

    eqs = []
    e0 = expr(0)
    for idx in range(1, len(act)):
        ei = expr(idx)
        for (r0, c0), (r1, c1) in zip(e0, ei):
            eqs.append((tuple(a - b for a, b in zip(r0, r1)), c1 - c0))
    ineqs = []
    for idx, g in enumerate(gens):
        for j in range(len(g)):
            row = [ZERO] * total
            row[offsets[idx] + j] = Fraction(-1)
            ineqs.append((tuple(row), ZERO))
    # keep the projection inside the face so it is never empty for a bad reason
    for a, b in Fs.ineqs:
        ineqs.append((tuple(a) + (ZERO,) * n_mult, b))
    if not ineqs:
        ineqs.append(((ZERO,) * total, ZERO))
    try:
        proj = fourier_motzkin(ineqs, range(k, total), eqs)
    except CapabilityError:
        # too many multipliers: decide at the representative point only
        if pointwise(r) is not None:
            return HoldsEverywhere(True)
        return Fails(r, True)
    Rs = Polyhedron(k, proj)
    if contains_polyhedron(Rs, Fs):
        return HoldsEverywhere()
    w_s = region_difference(Fs, [Rs])
    assert w_s is not None
    w = _to_x(p, B, w_s)
    # move into the relative interior of the face, staying off R
    rs = Fs.ri_point
    cand = w_s
    eps = Fraction(1, 2)
    for _ in range(40):
        if Fs.in_relative_interior(cand) and not Rs.contains(cand):
            w = _to_x(p, B, cand)
            break
        cand = lerp(w_s, rs, eps)
        eps /= 2
    return Fails(w)


# -- gradient limits (oracle pieces) --------------------------------------------------------


def _face_test_points(face: OverlapFace) -> list[Vector]:
    r = face.representative
    pts = [r]
    for v in face.region.hull.basis:
        s = _room(face.region, r, v) / 2
        if s > 0:
            pts.append(add(r, scale(s, v)))
            s2 = _room(face.region, r, neg(v)) / 2
            pts.append(sub(r, scale(s2, v)))
    return pts


def _local_scale(face: OverlapFace, z: Vector) -> float:
    """Distance from z to the relative boundary of the face, capped at 1."""
    rho = 1.0
    for v in face.region.hull.basis:
        nv = float(np.linalg.norm([float(c) for c in v]))
        for d in (v, neg(v)):
            rho = min(rho, float(_room(face.region, z, d)) * nv)
    return rho


def _limit_at(f: PiecewiseFunction, i: int, z: Vector, schedule: Schedule, rho: float = 1.0):
    pc = f.pieces[i]
    if pc.is_plq:
        return estimate_boundary_limit(pc, z, (1,) * f.n, schedule)
    inward = np.array([float(c) for c in sub(pc.domain.ri_point, z)])
    dist = float(np.linalg.norm(inward))
    if dist == 0:
        return None
    inward *= min(1.0, rho / dist)
    return estimate_boundary_limit(pc, z, inward, schedule)


def _face_limits(f, face, E, schedule):
    """Per-face result of the gradient-limit comparison."""
    used = []
    for z in _face_test_points(face):
        if tuple(z) in E:
            used.append(z)
            continue
        ests = {}
        rho = _local_scale(face, z)
        for i in sorted(face.active):
            est = _limit_at(f, i, z, schedule, rho)
            if est is None or not est.converged:
                return LimitsUnreliable(z, i)
            ests[i] = est
        for i, j in itertools.combinations(sorted(face.active), 2):
            a, b = ests[i], ests[j]
            if a.exact is not None and b.exact is not None:
                same = a.exact == b.exact
            else:
                same = bool(np.all(np.abs(a.value - b.value) <= LIMIT_TOL))
            if not same:
                return LimitsFail(z, (i, j), (a.value, b.value), face)
    return LimitsHold(tuple(used))


def check_gradient_limits(
    f: PiecewiseFunction, faces: Optional[list] = None, exceptional=None, schedule: Schedule = Schedule()
):
    E = set(f.exceptional if exceptional is None else exceptional)
    if faces is None:
        faces = _interior_faces(f, enumerate_overlap_faces(f.domains), _DomainInfo.of(f))
    used: list = []
    for face in faces:
        res = _face_limits(f, face, E, schedule)
        if not isinstance(res, LimitsHold):
            return res
        used.extend(res.exceptional_used)
    return LimitsHold(tuple(dict.fromkeys(used)))


def _snap(v) -> Vector:
    return tuple(Fraction(float(c)).limit_denominator(SNAP_DENOMINATOR) for c in v)


def _sampled_face_intersection(f, face, E, schedule) -> Union[HoldsEverywhere, HoldsExceptPointsInE, Fails, LimitsUnreliable]:
    """Subdifferential intersection at the face's test points, with oracle
    gradients replaced by their (rounded) boundary limits."""
    used = []
    for z in _face_test_points(face):
        if tuple(z) in E:
            used.append(z)
            continue
        bases, cones = [], []
        rho = _local_scale(face, z)
        for i in sorted(face.active):
            pc = f.pieces[i]
            est = _limit_at(f, i, z, schedule, rho)
            if est is None or not est.converged:
                return LimitsUnreliable(z, i)
            bases.append(est.exact if est.exact is not None else _snap(est.value))
            cones.append(normal_cone_at(pc.domain, z))
        if intersection_point(bases, cones) is None:
            return Fails(z)
    if used:
        return HoldsExceptPointsInE(tuple(used))
    return HoldsEverywhere()


# -- domain information ------------------------------------------------------------------------


@dataclass
class _DomainInfo:
    hull: AffineSubspace
    declared: Optional[Polyhedron]

    @classmethod
    def of(cls, f: PiecewiseFunction, dc: Optional[DomainConvexity] = None):
        doms = [D for D in f.domains if not D.is_empty]
        declared = f.declared_domain if (dc is not None and dc.declared_verified) else None
        return cls(union_hull(doms), declared)

    def in_ri(self, f: PiecewiseFunction, x: Vector) -> bool:
        if self.declared is not None:
            return self.declared.in_relative_interior(x)
        return in_relative_interior_of_union([D for D in f.domains if not D.is_empty], x, self.hull)


def _interior_faces(f: PiecewiseFunction, faces: list, info: _DomainInfo) -> list:
    """Faces whose relative interior lies in ``ri dom f``, largest first."""
    keep = [F for F in faces if info.in_ri(f, F.representative)]
    return sorted(keep, key=lambda F: (-F.dimension, F.order))


# -- 1-D chain --------------------------------------------------------------------------------


def certify_1d(f: PiecewiseFunction, log: Sequence[Hypothesis] = ()) -> Verdict:
    log = list(log)
    if not f.all_plq:
        return Inconclusive(("1-D chain needs PLQ pieces",), tuple(log))
    doms = [(i, D) for i, D in enumerate(f.domains) if not D.is_empty]
    hull = union_hull([D for _, D in doms])
    p, v = hull.basepoint, hull.basis[0]
    vv = dot(v, v)

    def coord(x):
        return dot(sub(x, p), v) / vv

    def param(s):
        return add(p, scale(s, v))

    ivs = {}
    for i, D in doms:
        lo, hi = None, None
        for a, b in D.constraint_rows():
            av = dot(a, v)
            rhs = b - dot(a, p)
            if av > 0:
                hi = rhs / av if hi is None else min(hi, rhs / av)
            elif av < 0:
                lo = rhs / av if lo is None else max(lo, rhs / av)
        ivs[i] = (lo, hi)
    ends = sorted({e for lo, hi in ivs.values() for e in (lo, hi) if e is not None})
    glo = None if any(lo is None for lo, _ in ivs.values()) else min(lo for lo, _ in ivs.values())
    ghi = None if any(hi is None for _, hi in ivs.values()) else max(hi for _, hi in ivs.values())
    inner = [b for b in ends if (glo is None or b > glo) and (ghi is None or b < ghi)]

    def covering(a, b):
        """A piece whose interval contains the open cell ]a, b[."""
        for i, (lo, hi) in sorted(ivs.items()):
            if (lo is None or (a is not None and lo <= a)) and (hi is None or (b is not None and b <= hi)):
                return i
        return None

    def slope(i, s):
        pc = f.pieces[i]
        return dot(pc.gradient(param(s)), v)

    cells = [glo] + inner + [ghi]
    log.append(Hypothesis("consecutive intervals", "satisfied", f"{len(inner)} breakpoints"))
    for k, b in enumerate(inner):
        left = covering(cells[k], b)
        right = covering(b, cells[k + 2])
        if left is None or right is None:
            return Inconclusive((f"gap next to breakpoint s={format_rational(b)}",), tuple(log))
        dl, dr = slope(left, b), slope(right, b)
        if dl > dr:
            w = param(b)
            wl = b - cells[k] if cells[k] is not None else Fraction(1)
            wr = cells[k + 2] - b if cells[k + 2] is not None else Fraction(1)
            h = min(Fraction(1), wl, wr)
            for _ in range(64):
                x, y = param(b - h), param(b + h)
                lhs, fx, fy = evaluate(f, w), evaluate(f, x), evaluate(f, y)
                rhs = (fx + fy) / 2
                if lhs > rhs:
                    log.append(Hypothesis("breakpoint slopes", "failed", f"{format_rational(dl)} > {format_rational(dr)}"))
                    return NotConvex(w, ConvexityViolation(x, y, Fraction(1, 2), lhs, rhs), tuple(log))
                h /= 2
            return Inconclusive(("breakpoint slope condition fails but no triple verified",), tuple(log))
    log.append(Hypothesis("breakpoint slopes", "satisfied", "left slope <= right slope at every breakpoint"))
    return Convex(CertTrace("OneDimChain", tuple(log), FULLY_EXACT))


# -- disprove ------------------------------------------------------------------------------------


def _directions(f: PiecewiseFunction, face: Optional[OverlapFace]) -> list[Vector]:
    n = f.n
    dirs: list[Vector] = []
    if face is not None:
        dirs.extend(orthogonal_complement(face.region.hull.basis, n))
    dirs.extend(unit(n, i) for i in range(n))
    for i, j in itertools.combinations(range(n), 2):
        dirs.append(add(unit(n, i), unit(n, j)))
        dirs.append(sub(unit(n, i), unit(n, j)))
    seen, out = set(), []
    for d in dirs:
        for s in (d, neg(d)):
            if s not in seen and any(s):
                seen.add(s)
                out.append(s)
    return out


def disprove(f: PiecewiseFunction, witness, face: Optional[OverlapFace] = None) -> Optional[ConvexityViolation]:
    """Search ``x, y = witness ∓ h d``, ``t = 1/2`` for a verified violation."""
    w = vec(witness)
    half = Fraction(1, 2)
    lhs = evaluate(f, w)
    for d in _directions(f, face):
        h = Fraction(1)
        for _ in range(21):
            x, y = sub(w, scale(h, d)), add(w, scale(h, d))
            fx, fy = evaluate(f, x), evaluate(f, y)
            if fx != float("inf") and fy != float("inf"):
                rhs = (fx + fy) / 2
                v = ConvexityViolation(x, y, half, lhs, rhs)
                if v.exact:
                    if v.margin > 0:
                        return v
                elif float(lhs) - float(rhs) > ORACLE_MARGIN:
                    return v
            h /= 2
    return None


def _verify_violation(f: PiecewiseFunction, v: ConvexityViolation) -> Optional[ConvexityViolation]:
    fx, fy = evaluate(f, v.x), evaluate(f, v.y)
    if fx == float("inf") or fy == float("inf"):
        return None
    lhs = evaluate(f, lerp(v.x, v.y, v.t))
    w = ConvexityViolation(v.x, v.y, v.t, lhs, (1 - v.t) * fx + v.t * fy)
    if lhs == float("inf"):
        return w
    if w.exact:
        return w if w.margin > 0 else None
    return w if float(w.lhs) - float(w.rhs) > ORACLE_MARGIN else None


# -- orchestration ------------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifyOptions:
    route: str = "auto"  # auto | plq | subdiff | limits
    seed: int = 0
    schedule: Schedule = field(default_factory=Schedule)


def certify(f: PiecewiseFunction, options: CertifyOptions = CertifyOptions()) -> Verdict:
    log: list[Hypothesis] = []

    # (1) pieces convex
    sampled_piece = False
    for i, pc in enumerate(f.pieces):
        res = piece_is_convex(pc, seed=options.seed)
        if isinstance(res, Refuted):
            log.append(Hypothesis("pieces convex", "failed", f"piece {i + 1}"))
            v = _verify_violation(f, res.violation) if res.violation is not None else None
            if v is not None:
                return NotConvex(lerp(v.x, v.y, v.t), v, tuple(log), v.exact)
            return Inconclusive((f"piece {i + 1} is not convex",), tuple(log))
        if not isinstance(res, Certified):
            sampled_piece = True
    log.append(Hypothesis("pieces convex", "satisfied", "sampled" if sampled_piece else "ldlt"))

    # (2) compatibility
    fc = check_function_compatibility(f, seed=options.seed)
    log.append(Hypothesis("sets compatible", "satisfied", "closed-sets"))
    if not fc.compatible:
        log.append(Hypothesis("functions compatible", "failed", f"pieces {fc.pair[0] + 1},{fc.pair[1] + 1}"))
        v = disprove(f, fc.witness)
        if v is not None:
            return NotConvex(fc.witness, v, tuple(log), v.exact)
        return Inconclusive(
            (f"pieces {fc.pair[0] + 1} and {fc.pair[1] + 1} disagree at {_pt(fc.witness)}",),
            tuple(log),
        )
    log.append(Hypothesis("functions compatible", "satisfied", "exact" if fc.exact else "sampled"))

    # (3) domain convexity and dimension
    dc = check_domain_convexity(f, seed=options.seed)
    if not dc.convex:
        log.append(Hypothesis("dom f convex", "failed", "exact" if dc.exact else "sampled"))
        if dc.violation is not None:
            v = _verify_violation(f, dc.violation)
            if v is not None:
                return NotConvex(lerp(v.x, v.y, v.t), v, tuple(log), True)
        return Inconclusive(("domain is not convex but no triple was verified",), tuple(log))
    log.append(Hypothesis("dom f convex", "satisfied", "exact" if dc.exact else "sampled"))
    dim = domain_dimension(f)
    if dim == 0:
        log.append(Hypothesis("dim dom f", "satisfied", "0: single point"))
        return Convex(CertTrace("OneDimChain", tuple(log), FULLY_EXACT))
    if dim == 1:
        log.append(Hypothesis("dim dom f", "satisfied", "1: chain theorem"))
        out = certify_1d(f, log)
        if isinstance(out, Convex) and (sampled_piece or not dc.exact):
            c = out.certificate
            return Convex(CertTrace(c.route, c.hypothesis_log, MODULO_ORACLE))
        return out
    log.append(Hypothesis("dim dom f >= 2", "satisfied", str(dim)))

    infinite_E = f.infinite_E is not None
    if infinite_E:
        log.append(Hypothesis("E finite", "failed", "theorem inapplicable: E not finite; exceptional points ignored"))
        E: frozenset = frozenset()
    else:
        E = frozenset(f.exceptional)
        log.append(Hypothesis("E finite", "satisfied", f"{len(E)} points"))

    faces = enumerate_overlap_faces(f.domains)
    info = _DomainInfo.of(f, dc)
    inner = _interior_faces(f, faces, info)
    log.append(Hypothesis("maximal active sets", "satisfied", f"{len(inner)} of {len(faces)} overlap faces in ri dom f, each with its full active set"))
    modulo = sampled_piece or not dc.exact or not fc.exact

    if f.all_plq and options.route in ("auto", "plq", "subdiff"):
        return _certify_plq(f, faces, inner, E, log, modulo, options)
    if options.route == "plq":
        return Inconclusive(("route plq needs every piece to be PLQ",), tuple(log))
    return _certify_limits(f, inner, E, log, options)


def _failure_verdict(f, failures, log, reason):
    for face, w in failures:
        v = disprove(f, w, face)
        if v is not None:
            return NotConvex(w, v, tuple(log), v.exact)
    return Inconclusive((reason,), tuple(log))


def _certify_plq(f, faces, inner, E, log, modulo, options) -> Verdict:
    if options.route in ("auto", "plq"):
        gm = check_gradient_matching(f, faces)
        if isinstance(gm, GradHolds):
            log.append(Hypothesis("gradients match on overlaps", "satisfied", f"{len(faces)} faces, exact"))
            return Convex(CertTrace("PlqGradientMatch", tuple(log), MODULO_ORACLE if modulo else FULLY_EXACT))
        i, j = gm.pair
        log.append(Hypothesis("gradients match on overlaps", "failed", f"pieces {i + 1},{j + 1} at {_pt(gm.witness)}"))
        if options.route == "plq":
            return Inconclusive(("gradient matching fails and route plq has no fallback",), tuple(log))

    outcomes = _map(lambda F: check_subdiff_intersection_on_face(F, f, E), inner)
    used: list = []
    rep_only = False
    failures = []
    for face, res in zip(inner, outcomes):
        if isinstance(res, Fails):
            failures.append((face, res.witness))
        elif isinstance(res, HoldsExceptPointsInE):
            used.extend(res.points)
        elif res.representative_only:
            rep_only = True
    if failures:
        w = failures[0][1]
        log.append(Hypothesis("subdifferential intersection nonempty on ri dom f \\ E", "failed", f"empty at {_pt(w)}"))
        return _failure_verdict(f, failures, log, "empty subdifferential intersection but no triple verified")
    ev = f"{len(inner)} faces" + (f", exceptions at {len(used)} points of E" if used else "")
    log.append(Hypothesis("subdifferential intersection nonempty on ri dom f \\ E", "satisfied", ev))
    exactness = REPRESENTATIVE if rep_only else (MODULO_ORACLE if modulo else FULLY_EXACT)
    return Convex(CertTrace("SubdiffIntersection", tuple(log), exactness, tuple(used)))


def _certify_limits(f, inner, E, log, options) -> Verdict:
    used: list = []
    fallback = False
    failures = []
    for face in inner:
        res = _face_limits(f, face, E, options.schedule) if options.route != "subdiff" else None
        if isinstance(res, LimitsHold):
            used.extend(res.exceptional_used)
            continue
        if isinstance(res, LimitsUnreliable):
            log.append(Hypothesis("gradient limits exist", "unverified", f"piece {res.piece + 1} near {_pt(res.witness)}"))
            return Inconclusive(("gradient limit estimate did not converge",), tuple(log))
        if options.route == "limits":
            log.append(Hypothesis("gradient limits agree on int dom f \\ E", "failed", f"at {_pt(res.witness)}"))
            return Inconclusive(("gradient limits disagree; route limits forbids fallback",), tuple(log))
        fallback = True
        sub_res = _sampled_face_intersection(f, face, E, options.schedule)
        if isinstance(sub_res, LimitsUnreliable):
            log.append(Hypothesis("gradient limits exist", "unverified", f"piece {sub_res.piece + 1}"))
            return Inconclusive(("gradient limit estimate did not converge",), tuple(log))
        if isinstance(sub_res, Fails):
            failures.append((face, sub_res.witness))
        elif isinstance(sub_res, HoldsExceptPointsInE):
            used.extend(sub_res.points)
    used = list(dict.fromkeys(used))
    if failures:
        log.append(Hypothesis("subdifferential intersection nonempty on ri dom f \\ E", "failed", f"at {_pt(failures[0][1])} (sampled)"))
        return _failure_verdict(f, failures, log, "sampled subdifferential intersection empty but no triple verified")
    if fallback:
        log.append(Hypothesis("subdifferential intersection nonempty on ri dom f \\ E", "satisfied", "sampled at face test points"))
        route = "SubdiffIntersection"
    else:
        log.append(Hypothesis("gradient limits agree on int dom f \\ E", "satisfied", f"{len(inner)} faces, tolerance {LIMIT_TOL:g}"))
        route = "GradientLimits"
    return Convex(CertTrace(route, tuple(log), MODULO_ORACLE, tuple(used)))
