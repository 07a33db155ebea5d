"""Field-of-values boundary curves by unitary block decomposition and ZNN path following."""

from .decomp import Decomposition, DecompositionSettings, decompose
from .fov import (
    BoundaryPoint,
    BoundaryPoints,
    FovResult,
    assemble_fov,
    baseline_fov,
    block_boundary_points,
    crawford_number,
    johnson_boundary_points,
    numerical_radius,
)
from .formulas import FormulaCoeffs, derive_lookahead_formula
from .hull import convex_hull, hausdorff
from .matflow import (
    DimensionError,
    HermitianFlow,
    InputError,
    NumericalError,
    flow_eval,
    is_normal,
    quadratic_form,
    random_unitary,
    split_hermitian,
)
from .znn import ZnnConfig, ZnnStepError, track_extreme_eigencurve

__all__ = [
    "BoundaryPoint", "BoundaryPoints", "Decomposition", "DecompositionSettings",
    "DimensionError", "FormulaCoeffs", "FovResult", "HermitianFlow", "InputError",
    "NumericalError", "ZnnConfig", "ZnnStepError", "assemble_fov", "baseline_fov",
    "block_boundary_points", "convex_hull", "crawford_number", "decompose",
    "derive_lookahead_formula", "flow_eval", "hausdorff", "is_normal",
    "johnson_boundary_points", "numerical_radius", "quadratic_form", "random_unitary",
    "split_hermitian", "track_extreme_eigencurve",
]
