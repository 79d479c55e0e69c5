"""Exact symbolic verification of the metric and spectral Einstein
functionals for the Witten deformation on even-dimensional manifolds."""

from .residue import (TermLedger, compute_einstein_functional,
                      compute_metric_functional, wres_density)
from .tensor import ScalarInvariantExpr

__all__ = [
    "TermLedger",
    "ScalarInvariantExpr",
    "compute_einstein_functional",
    "compute_metric_functional",
    "wres_density",
]

__version__ = "0.1.0"
