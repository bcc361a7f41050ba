"""Convexity certification for piecewise-defined functions.

The exact pipeline handles piecewise linear-quadratic functions on
polyhedral pieces; black-box differentiable pieces are handled by
sampling and gradient-limit estimates.
"""

from .certifier import (
    CertifyOptions,
    CertTrace,
    Convex,
    Fails,
    Hypothesis,
    HoldsEverywhere,
    HoldsExceptPointsInE,
    Inconclusive,
    NotConvex,
    certify,
    certify_1d,
    check_gradient_limits,
    check_gradient_matching,
    check_subdiff_intersection_on_face,
    disprove,
    verdict_to_json,
)
from .compatibility import (
    NotCovered,
    SegmentDecomposition,
    check_domain_convexity,
    check_function_compatibility,
    compat_report,
    domain_dimension,
    is_colinearly_ordered,
    trace_segment,
)
from .corpus import builtin
from .documents import DocumentError, dumps, load, loads, to_document
from .outcomes import ConvexityViolation
from .pieces import (
    OraclePiece,
    PiecewiseFunction,
    PlqPiece,
    SubdiffSet,
    active_indices,
    evaluate,
    piece_is_convex,
    plq_subdifferential,
)
from .polyhedra import Polyhedron, enumerate_overlap_faces

__version__ = "0.1.0"

__all__ = [
    "CertifyOptions",
    "CertTrace",
    "Convex",
    "ConvexityViolation",
    "DocumentError",
    "Fails",
    "HoldsEverywhere",
    "HoldsExceptPointsInE",
    "Hypothesis",
    "Inconclusive",
    "NotConvex",
    "NotCovered",
    "OraclePiece",
    "PiecewiseFunction",
    "PlqPiece",
    "Polyhedron",
    "SegmentDecomposition",
    "SubdiffSet",
    "active_indices",
    "builtin",
    "certify",
    "certify_1d",
    "check_domain_convexity",
    "check_function_compatibility",
    "check_gradient_limits",
    "check_gradient_matching",
    "check_subdiff_intersection_on_face",
    "compat_report",
    "disprove",
    "domain_dimension",
    "dumps",
    "enumerate_overlap_faces",
    "evaluate",
    "is_colinearly_ordered",
    "load",
    "loads",
    "piece_is_convex",
    "plq_subdifferential",
    "to_document",
    "trace_segment",
    "verdict_to_json",
]
