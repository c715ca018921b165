from .calibration import CONSTANT_NAMES, Calibration, calibrate, load_calibration, parse_calibration
from .checks import (
    bernstein_ratios,
    check_bernstein,
    check_cutoff_smoothing,
    check_energy_identity,
    check_gauss_transport,
    check_gn,
    check_growth_bound,
    check_h1_balance,
    check_h1_majorants,
    check_lp_log_bound,
    check_maxwell_isometry,
    check_scalar_inequalities,
    contraction_probe,
    gn_ratio,
    ledger_residuals,
    log_report,
)
from .corpus import field_corpus, gaussian_bump, scalar_samples, state_corpus

__all__ = [
    "CONSTANT_NAMES",
    "Calibration",
    "bernstein_ratios",
    "calibrate",
    "check_bernstein",
    "check_cutoff_smoothing",
    "check_energy_identity",
    "check_gauss_transport",
    "check_gn",
    "check_growth_bound",
    "check_h1_balance",
    "check_h1_majorants",
    "check_lp_log_bound",
    "check_maxwell_isometry",
    "check_scalar_inequalities",
    "contraction_probe",
    "field_corpus",
    "gaussian_bump",
    "gn_ratio",
    "ledger_residuals",
    "load_calibration",
    "parse_calibration",
    "scalar_samples",
    "state_corpus",
]
