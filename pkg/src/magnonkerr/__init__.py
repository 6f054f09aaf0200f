"""Steady-state entanglement and its nonreciprocity in Kerr cavity-magnon optomechanics."""
from .entanglement import (
    EntanglementReport,
    ModeLabel,
    contangle,
    evaluate,
    log_negativity,
    min_residual_contangle,
    partial_transpose,
    reduce_modes,
    residual_contangle,
    symplectic_eigenvalues,
)
from .errors import AllPointsUnstable, ArgumentError, InstabilityError, MagnonKerrError, NumericalFailure
from .experiments import SweepResult, SweepSpec, evaluate_point, figure_preset, run_sweep
from .model import SystemParams, build_diffusion, build_drift, flip_direction, kerr_strength, thermal_occupation
from .nonreciprocity import BidirectionalReport, bidirectional_report, contrast_ratio
from .steady_state import (
    StabilityVerdict,
    check_stability,
    integrate_lyapunov,
    is_physical,
    lyapunov_residual,
    physicality_margin,
    solve_lyapunov,
    symplectic_form,
)

__version__ = "0.1.0"
