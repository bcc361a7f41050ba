"""Kernel selection: the compiled extension if built, numpy otherwise.

Set ``PWCVX_PURE_PYTHON=1`` to force the numpy kernels.
"""

import os

BACKEND = "numpy"

if os.environ.get("PWCVX_PURE_PYTHON"):
    from ._kernels_py import polyhedron_mask, quadratic_values, violation_indices
else:
    try:
        from ._kernels import polyhedron_mask, quadratic_values, violation_indices

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import polyhedron_mask, quadratic_values, violation_indices

__all__ = ["BACKEND", "polyhedron_mask", "quadratic_values", "violation_indices"]
