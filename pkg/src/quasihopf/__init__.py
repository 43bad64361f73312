"""Exact quasi-Hopf verification toolkit for the small quantum group of sl2
at a fourth root of unity, with singlet/triplet fusion rings."""

from .cyclo import BetaChoice, CycNum, parse_cyc
from .algebra import AlgElem, BasedAlgebra, Tensor, tensor_inv
from .presets import build_cartan, build_u
from .quasi import QuasiBialgebraData, GaugeTwist, gauge_twist, run_all_checks
from .classify import (
    CoalgebraParams,
    CoproductParams,
    StandardFormParams,
    build_coproduct,
    solve_rmatrix,
    standard_form,
)
from .fusion import FusionExpr, parse_expr, singlet_fuse, triplet_fuse
from .reports import PipelineConfig, run_pipeline, verify_preset

__version__ = "0.1.0"

__all__ = [
    "AlgElem",
    "BasedAlgebra",
    "BetaChoice",
    "CoalgebraParams",
    "CoproductParams",
    "CycNum",
    "FusionExpr",
    "GaugeTwist",
    "PipelineConfig",
    "QuasiBialgebraData",
    "StandardFormParams",
    "Tensor",
    "build_cartan",
    "build_coproduct",
    "build_u",
    "gauge_twist",
    "parse_cyc",
    "parse_expr",
    "run_all_checks",
    "run_pipeline",
    "singlet_fuse",
    "solve_rmatrix",
    "standard_form",
    "tensor_inv",
    "triplet_fuse",
    "verify_preset",
]
