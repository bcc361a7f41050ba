"""Exact positive-semidefiniteness test by symmetric-pivoted LDL^T."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .numbers import Matrix, Vector, mat, is_symmetric, quad_form


class NotSymmetricError(ValueError):
    pass


@dataclass(frozen=True)
class LdltFactors:
    """``P M P^T = L D L^T`` where ``P`` sends row ``k`` to ``perm[k]``."""

    perm: tuple[int, ...]
    L: Matrix
    D: Vector


@dataclass(frozen=True)
class Psd:
    certificate: LdltFactors


@dataclass(frozen=True)
class NotPsd:
    witness: Vector
    value: Fraction  # <witness, M witness>, strictly negative


PsdOutcome = Union[Psd, NotPsd]


def ldlt_psd(M) -> PsdOutcome:
    M = mat(M)
    n = len(M)
    if any(len(r) != n for r in M):
        raise NotSymmetricError("matrix is not square")
    if not is_symmetric(M):
        raise NotSymmetricError("matrix is not symmetric")

    S = {(i, j): M[i][j] for i in range(n) for j in range(n)}
    remaining = list(range(n))
    steps: list[tuple[int, dict, Fraction]] = []  # (pivot, row of S at pivot time, d)
    order: list[int] = []
    lcols: dict[int, dict[int, Fraction]] = {}
    dvals: list[Fraction] = []
    witness_local = None

    while remaining:
        neg = next((i for i in remaining if S[i, i] < 0), None)
        if neg is not None:
            witness_local = {i: Fraction(int(i == neg)) for i in remaining}
            break
        p = next((i for i in remaining if S[i, i] > 0), None)
        if p is None:
            off = next(
                ((i, j) for i in remaining for j in remaining if i < j and S[i, j] != 0),
                None,
            )
            if off is not None:
                i, j = off
                s = Fraction(-1 if S[i, j] > 0 else 1)
                witness_local = {k: Fraction(0) for k in remaining}
                witness_local[i] = Fraction(1)
                witness_local[j] = s
                break
            # remaining block is identically zero
            for i in remaining:
                order.append(i)
                dvals.append(Fraction(0))
                lcols[i] = {}
            remaining = []
            break
        d = S[p, p]
        rest = [i for i in remaining if i != p]
        prow = {k: S[p, k] for k in rest}
        steps.append((p, prow, d))
        order.append(p)
        dvals.append(d)
        lcols[p] = {j: S[j, p] / d for j in rest}
        for j in rest:
            f = S[j, p] / d
            if f:
                for k in rest:
                    S[j, k] -= f * S[p, k]
        remaining = rest

    if witness_local is not None:
        w = dict(witness_local)
        for p, prow, d in reversed(steps):
            w[p] = -sum((prow[k] * w[k] for k in prow), Fraction(0)) / d
        v = tuple(w[i] for i in range(n))
        val = quad_form(M, v)
        assert val < 0
        return NotPsd(v, val)

    pos = {idx: k for k, idx in enumerate(order)}
    L = [[Fraction(0)] * n for _ in range(n)]
    for k, idx in enumerate(order):
        L[k][k] = Fraction(1)
        for j, val in lcols[idx].items():
            L[pos[j]][k] = val
    return Psd(LdltFactors(tuple(order), tuple(tuple(r) for r in L), tuple(dvals)))
