"""In-repo dense conic interior-point solver (zero/nonneg/SOC/PSD cones)."""

from .builder import LinExpr, ProblemBuilder, Var, affine_matrix_probe
from .cones import Cone, cone_margin, smat, svec, svec_len
from .solver import (
    ConicProblem,
    ConicSolution,
    SolveStatus,
    hermitian_to_real,
    kkt_residuals,
    solve,
)

__all__ = [
    "Cone",
    "ConicProblem",
    "ConicSolution",
    "LinExpr",
    "ProblemBuilder",
    "SolveStatus",
    "Var",
    "affine_matrix_probe",
    "cone_margin",
    "hermitian_to_real",
    "kkt_residuals",
    "smat",
    "solve",
    "svec",
    "svec_len",
]
