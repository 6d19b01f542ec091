"""Stability certification for real-time equality-constrained NMPC.

The heavy lifting lives in the C++ core; this package exposes the linear-model
tooling (exact discretization, Riccati solve, LQR gain), the certification
pipeline, and coupled system-optimizer simulation.
"""

from rtnmpc._core import (
    RtnmpcError,
    aux_eigenvalues,
    certify,
    default_config_text,
    discretize_exact,
    lqr_gain,
    matrix_exponential,
    simulate,
    solve_dare,
)

__all__ = [
    "RtnmpcError",
    "aux_eigenvalues",
    "certify",
    "default_config_text",
    "discretize_exact",
    "lqr_gain",
    "matrix_exponential",
    "simulate",
    "solve_dare",
]
