"""Ultraspherical functional inequalities and flows."""

from ._core import (
    DomainError,
    Error,
    __version__,
    delta_of_beta,
    deficit,
    figure1_table,
    identity_sweep,
    interior_beta,
    m_range,
    nodes,
    run_flow,
    thresholds,
)

__all__ = [
    "DomainError",
    "Error",
    "__version__",
    "delta_of_beta",
    "deficit",
    "figure1_table",
    "identity_sweep",
    "interior_beta",
    "m_range",
    "nodes",
    "run_flow",
    "thresholds",
]
