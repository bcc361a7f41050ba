"""Scalar type used inside the exact kernels.

gmpy2's ``mpq`` is a C implementation of rationals and is roughly ten
times faster than :class:`fractions.Fraction` on the small dense tableaux
the simplex and elimination routines work on. When gmpy2 is missing, or
``PWCVX_PURE_PYTHON`` is set, the kernels run on Fraction instead. Results
leaving a kernel are always converted back to Fraction.
"""

from __future__ import annotations

import os
from fractions import Fraction

BACKEND = "fraction"
Q = Fraction

if not os.environ.get("PWCVX_PURE_PYTHON"):
    try:
        import gmpy2 as _gmpy2
    except ImportError:  # pragma: no cover - depends on environment
        pass
    else:
        Q = _gmpy2.mpq
        BACKEND = "gmpy2"


def to_q(x):
    if BACKEND == "fraction" or not isinstance(x, Fraction):
        return Q(x)
    return Q(x.numerator, x.denominator)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(int(x.numerator), int(x.denominator))
