"""Statistics of the largest prime factor: exact scans and asymptotics."""

__version__ = "0.1.0"

from .dickman import (
    EULER_GAMMA,
    RhoTable,
    XiValue,
    build_rho_table,
    exp_integral,
    log_rho_asymptotic,
    rho_asymptotic,
    rho_derivative,
    rho_shift_ratio,
    xi,
    xi_prime,
)
from .hull import EDGE, INTERIOR, UNCONFIRMED, VERTEX, HullPoint, convex_classify, hull_summary
from .implicit_params import ImplicitSolution, nu_omega_gap, solve_nu, solve_omega
from .predictor import (
    PSI_OVER_PI,
    PSI_OVER_Y,
    ExactOptimum,
    HPrediction,
    ModePrediction,
    PeakPrediction,
    exact_optimum,
    h_asymptotic,
    predict_mode,
    predict_mode_height,
    predict_psi_over_pi_peak,
    predict_psi_over_y_peak,
)
from .primes import LpfBlock, PrimeTable, build_prime_table, lpf_of, lpf_stream
from .scanner import (
    EmpiricalStats,
    GapDiagnostic,
    PopularityRecord,
    ScanResult,
    ScanState,
    Snapshot,
    counts_consistency,
    empirical_stats,
    load_checkpoint,
    records_to_csv,
    records_to_json,
    save_checkpoint,
    scan,
    spacing_report,
)
from .smooth import PsiMemo, buchstab_check, psi_exact, psi_hildebrand, psi_saias
from .squares import EnsembleSummary, SimOutcome, run_ensemble, run_trial
