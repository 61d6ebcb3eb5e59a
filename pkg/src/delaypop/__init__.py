"""delaypop: dynamics and stability criteria for A[n+1] = A[n] * F(A[n-m])."""

from .analysis import (
    LipschitzEstimate,
    SimOptions,
    StabilityReport,
    check_hypotheses,
    classify,
    estimate_log_lipschitz,
    graef_r_max,
    liz_r_max,
    paper_L,
    persistence_envelope,
    theorem3_check,
)
from .model import GrowthModel, equilibrium_bisect, eval_F, make_bobwhite, make_pielou
from .simulate import (
    ConvergenceVerdict,
    OrbitTrace,
    TailStats,
    detect_convergence,
    detect_oscillation,
    iterate,
    tail_stats,
)
from .sweep import SweepConfig, SweepResult, load_config, run_sweep

__all__ = [
    "GrowthModel",
    "make_bobwhite",
    "make_pielou",
    "eval_F",
    "equilibrium_bisect",
    "OrbitTrace",
    "TailStats",
    "ConvergenceVerdict",
    "iterate",
    "tail_stats",
    "detect_convergence",
    "detect_oscillation",
    "LipschitzEstimate",
    "StabilityReport",
    "SimOptions",
    "check_hypotheses",
    "persistence_envelope",
    "estimate_log_lipschitz",
    "paper_L",
    "theorem3_check",
    "graef_r_max",
    "liz_r_max",
    "classify",
    "SweepConfig",
    "SweepResult",
    "load_config",
    "run_sweep",
]

__version__ = "0.1.0"
