"""Randomised floating-point cross-checks, independent of the exact pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from ..exact.numbers import Vector, lerp, vec
from ..outcomes import ConvexityViolation
from ..pieces import PiecewiseFunction, evaluate
from ..polyhedra import Polyhedron
from . import kernels

MEMBER_TOL = 1e-12


class SamplingError(RuntimeError):
    """Too few sampled points landed in the domain."""


@dataclass(frozen=True)
class SampleConfig:
    n_samples: int = 10_000
    seed: int = 0
    tolerance: float = 1e-7
    bounding_box: Optional[tuple] = None  # (lo, hi); default [-4, 4]^n
    exact: bool = False

    def __post_init__(self):
        if self.n_samples <= 0:
            raise ValueError("n_samples must be positive")
        if self.tolerance < 0 or (self.tolerance == 0 and not self.exact):
            raise ValueError("tolerance must be positive in float mode")

    def box(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        if self.bounding_box is None:
            return np.full(n, -4.0), np.full(n, 4.0)
        lo, hi = (np.asarray(v, dtype=float) for v in self.bounding_box)
        if lo.shape != (n,) or hi.shape != (n,) or np.any(lo > hi):
            raise ValueError("bad bounding box")
        return lo, hi


@dataclass(frozen=True)
class Pass:
    n_pairs: int


@dataclass(frozen=True)
class Counterexample:
    violation: ConvexityViolation
    pair_index: int


# -- vectorised evaluation ----------------------------------------------------------


def _as_arrays(P: Polyhedron):
    n = P.n
    A = np.array([[float(v) for v in a] for a, _ in P.ineqs], dtype=float).reshape(-1, n)
    b = np.array([float(v) for _, v in P.ineqs], dtype=float)
    E = np.array([[float(v) for v in a] for a, _ in P.eqs], dtype=float).reshape(-1, n)
    e = np.array([float(v) for _, v in P.eqs], dtype=float)
    return np.ascontiguousarray(A), b, np.ascontiguousarray(E), e


def evaluate_many(f: PiecewiseFunction, X: np.ndarray, tol: float = MEMBER_TOL) -> np.ndarray:
    """Float values of f at the rows of X (``inf`` off the domain)."""
    X = np.ascontiguousarray(X, dtype=float)
    out = np.full(X.shape[0], np.inf)
    for p in f.pieces:
        A, b, E, e = _as_arrays(p.domain)
        mask = np.asarray(kernels.polyhedron_mask(A, b, E, e, X, tol), dtype=bool)
        if not mask.any():
            continue
        rows = np.ascontiguousarray(X[mask])
        if p.is_plq:
            Q = np.ascontiguousarray(np.array(p.Q, dtype=float))
            c = np.array(p.b, dtype=float)
            vals = np.asarray(kernels.quadratic_values(Q, c, float(p.gamma), rows))
        else:
            vals = np.array([p.value_float(r) for r in rows], dtype=float)
        out[mask] = np.minimum(out[mask], vals)
    return out


def _exact_margin_ok(v: ConvexityViolation, tol: float) -> bool:
    if v.lhs == float("inf"):
        return v.rhs != float("inf")
    if v.exact:
        return v.margin > 0
    return float(v.lhs) - float(v.rhs) > tol


def reverify(f: PiecewiseFunction, x, y, t, tol: float) -> Optional[ConvexityViolation]:
    x, y, t = vec(x), vec(y), Fraction(t)
    fx, fy = evaluate(f, x), evaluate(f, y)
    if fx == float("inf") or fy == float("inf"):
        return None
    v = ConvexityViolation(x, y, t, evaluate(f, lerp(x, y, t)), (1 - t) * fx + t * fy)
    return v if _exact_margin_ok(v, tol) else None


# -- midpoint convexity ---------------------------------------------------------------

_T_PASSES = ((Fraction(1, 2),), (Fraction(1, 4), Fraction(3, 4)))


def midpoint_convexity_test(f: PiecewiseFunction, cfg: SampleConfig = SampleConfig()) -> Union[Pass, Counterexample]:
    n = f.n
    lo, hi = cfg.box(n)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    X = rng.uniform(lo, hi, size=(cfg.n_samples, n))
    Y = rng.uniform(lo, hi, size=(cfg.n_samples, n))
    if cfg.exact:
        return _exact_test(f, X, Y)
    fx, fy = evaluate_many(f, X), evaluate_many(f, Y)
    accepted = np.isfinite(fx) & np.isfinite(fy)
    if int(accepted.sum()) < 10:
        raise SamplingError(f"only {int(accepted.sum())} sampled pairs landed in the domain")
    for ts in _T_PASSES:
        cands: list[tuple[int, Fraction]] = []
        for t in ts:
            Z = (1.0 - float(t)) * X + float(t) * Y
            fz = evaluate_many(f, Z)
            idx = kernels.violation_indices(fx, fy, fz, float(t), cfg.tolerance)
            cands.extend((int(i), t) for i in idx)
        for i, t in sorted(cands):
            v = reverify(f, X[i].tolist(), Y[i].tolist(), t, cfg.tolerance)
            if v is not None:
                return Counterexample(v, i)
    return Pass(int(accepted.sum()))


def _exact_test(f: PiecewiseFunction, X: np.ndarray, Y: np.ndarray):
    accepted = 0
    rows = []
    for i in range(X.shape[0]):
        x, y = vec(X[i].tolist()), vec(Y[i].tolist())
        fx, fy = evaluate(f, x), evaluate(f, y)
        if fx == float("inf") or fy == float("inf"):
            continue
        accepted += 1
        rows.append((i, x, y, fx, fy))
    if accepted < 10:
        raise SamplingError(f"only {accepted} sampled pairs landed in the domain")
    for ts in _T_PASSES:
        for i, x, y, fx, fy in rows:
            for t in ts:
                lhs = evaluate(f, lerp(x, y, t))
                rhs = (1 - t) * fx + t * fy
                if lhs > rhs:
                    return Counterexample(ConvexityViolation(x, y, t, lhs, rhs), i)
    return Pass(accepted)


# -- finite differences ----------------------------------------------------------------


@dataclass(frozen=True)
class FdPass:
    checked: int
    skipped: tuple = ()


@dataclass(frozen=True)
class FdFail:
    point: tuple
    fd: tuple
    claimed: tuple


def _clearance(P: Polyhedron, x: np.ndarray) -> float:
    c = np.inf
    for a, b in P.ineqs:
        av = np.array([float(v) for v in a])
        nrm = float(np.linalg.norm(av))
        if nrm > 0:
            c = min(c, (float(b) - float(av @ x)) / nrm)
    if P.eqs:
        return -np.inf
    return c


def fd_gradient_check(p, points: Sequence, h: float = 1e-6, tol: float = 1e-6) -> Union[FdPass, FdFail]:
    checked, skipped = 0, []
    for pt in points:
        x = np.asarray([float(v) for v in pt])
        if _clearance(p.domain, x) <= h:
            skipped.append(tuple(x))
            continue
        g = np.asarray(p.gradient_float(x), dtype=float)
        fd = np.empty_like(x)
        for k in range(x.size):
            e = np.zeros_like(x)
            e[k] = h
            fd[k] = (p.value_float(x + e) - p.value_float(x - e)) / (2 * h)
        err = np.abs(fd - g) / np.maximum(1.0, np.abs(g))
        if np.any(err > tol):
            return FdFail(tuple(x), tuple(fd), tuple(g))
        checked += 1
    return FdPass(checked, tuple(skipped))


# -- boundary gradient limits -----------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    h0: float = 1 / 8
    ratio: float = 1 / 4
    steps: int = 5
    tol: float = 1e-6  # convergence: last two extrapolants


@dataclass(frozen=True)
class LimitEstimate:
    value: np.ndarray
    converged: bool
    exact: Optional[Vector] = None
    history: tuple = field(default=(), repr=False)


def estimate_boundary_limit(p, x, inward, schedule: Schedule = Schedule()) -> LimitEstimate:
    """Limit of ``∇p`` at the boundary point x along ``x + h·inward``, h → 0.

    Gradients at ``h_k = h0·ratio^k`` are extrapolated to h = 0 with a
    Richardson table; ``converged`` compares the last two diagonal entries.
    """
    if p.is_plq:
        g = p.gradient(vec(x))
        return LimitEstimate(np.array([float(v) for v in g]), True, g)
    x = np.asarray([float(v) for v in x])
    d = np.asarray([float(v) for v in inward])
    nd = float(np.linalg.norm(d))
    if nd == 0:
        raise ValueError("inward direction must be nonzero")
    d = d / max(1.0, nd)
    r = schedule.ratio
    hs = [schedule.h0 * r**k for k in range(schedule.steps)]
    T: list[list[np.ndarray]] = []
    for k, h in enumerate(hs):
        row = [np.asarray(p.gradient_float(x + h * d), dtype=float)]
        for j in range(1, k + 1):
            rj = r**j
            row.append((row[j - 1] - rj * T[k - 1][j - 1]) / (1.0 - rj))
        T.append(row)
    diag = [T[k][k] for k in range(len(T))]
    last = diag[-1]
    ok = bool(np.all(np.isfinite(last)))
    if len(diag) > 1:
        ok = ok and bool(np.all(np.abs(diag[-1] - diag[-2]) < schedule.tol))
    return LimitEstimate(last, ok, None, tuple(diag))
