"""Exact enumeration of rank-3 hyperbolic generalized Cartan matrices over the
lattice of the (2, 3, infinity) hyperbolic triangle group."""

from gcm3.algebra import SingularMatrix, det, signature, solve_linear, solve_linear3
from gcm3.gcm import emit_realization, is_hyperbolic, symmetrize, twist, validate_gcm
from gcm3.lattice import A, B, C, TRIANGLE_GRAM, inner, is_root, reflect
from gcm3.search import (
    PipelineConfig,
    enumerate_triples,
    extend_polygon,
    run_pipeline,
    solve_twists,
    solve_weyl,
)

__all__ = [
    "A", "B", "C", "TRIANGLE_GRAM", "SingularMatrix", "PipelineConfig",
    "det", "emit_realization", "enumerate_triples", "extend_polygon", "inner",
    "is_hyperbolic", "is_root", "reflect", "run_pipeline", "signature",
    "solve_linear", "solve_linear3", "solve_twists", "solve_weyl", "symmetrize", "twist",
    "validate_gcm",
]
