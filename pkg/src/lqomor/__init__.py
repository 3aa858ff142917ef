"""Horizon-limited model order reduction for linear systems with quadratic outputs."""

from .errors import (
    DimensionError,
    HurwitzError,
    LqoError,
    NonFiniteError,
    NumericalError,
    RankError,
    SchemaError,
    SignalEvalError,
    SignalSyntaxError,
    SolverError,
    ValidationError,
)
from .gramians import (
    CrossGramianSet,
    GramianSet,
    HankelSpectrum,
    cross_gramians,
    hankel_singular_values,
    timelimited_gramians,
)
from .matfun import expm, expm_frechet, solve_lyapunov, solve_sylvester
from .model import (
    INFINITE,
    LqoSystem,
    TimeInterval,
    Trajectory,
    error_system,
    eval_output,
    simulate,
    validate,
)
from .norms import (
    NormReport,
    h2tau_error,
    h2tau_error_blockwise,
    h2tau_inner,
    h2tau_norm,
    h2tau_norm_quadrature,
)
from .optimality import (
    GradientReport,
    OptimalityReport,
    Theorem2Report,
    gradients,
    h2_residuals,
    objective_J,
    theorem2_check,
    tl_residuals,
)
from .reductors import (
    ProjectionPair,
    ReductionReport,
    biorthogonalize,
    bt,
    homora,
    pole_change,
    tlbt,
    tlhnoia,
)
from .signals import SignalExpr, parse_signal
from .sysio import load_system, parse_system, save_system, serialize_report, serialize_system

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "CrossGramianSet",
    "DimensionError",
    "GradientReport",
    "GramianSet",
    "HankelSpectrum",
    "HurwitzError",
    "LqoError",
    "LqoSystem",
    "NonFiniteError",
    "NormReport",
    "NumericalError",
    "OptimalityReport",
    "ProjectionPair",
    "RankError",
    "ReductionReport",
    "SchemaError",
    "SignalEvalError",
    "SignalExpr",
    "SignalSyntaxError",
    "SolverError",
    "Theorem2Report",
    "TimeInterval",
    "Trajectory",
    "ValidationError",
    "biorthogonalize",
    "bt",
    "cross_gramians",
    "error_system",
    "eval_output",
    "expm",
    "expm_frechet",
    "gradients",
    "h2_residuals",
    "h2tau_error",
    "h2tau_error_blockwise",
    "h2tau_inner",
    "h2tau_norm",
    "h2tau_norm_quadrature",
    "hankel_singular_values",
    "homora",
    "load_system",
    "objective_J",
    "parse_signal",
    "parse_system",
    "pole_change",
    "save_system",
    "serialize_report",
    "serialize_system",
    "simulate",
    "solve_lyapunov",
    "solve_sylvester",
    "theorem2_check",
    "timelimited_gramians",
    "tl_residuals",
    "tlbt",
    "tlhnoia",
    "validate",
]
