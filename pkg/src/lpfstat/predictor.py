"""Closed-form predictors for the popular prime and the smooth-count peaks.

All are driven by the implicit parameters: writing L = log x and v for
nu(x) (or w for omega(x)),

    log p*(x)    = sqrt(v L) + (1/4)(1 - (v-3)/(2v^2 - 3v + 1)),
    log C(x)     = L - (1/2) log(2 pi L) - 2 sqrt(v L) + I(v) + 3v/2 + gamma,
    Psi/y peak   = sqrt(w L) + (1/4)(1 - (w-3)/(2w^2 - 3w + 1))
                 = sqrt(v L) + 3/4 + o(1),
    Psi/pi peak  = sqrt(w L) + (3/4)(1 - (3w-5)/(6w^2 - 9w + 3))
                 = sqrt(v L) + 5/4 + o(1),

so the Psi/pi-optimal prime sits a factor e above the popular prime in the
limit.  h(x) = max_y Psi(x,y)/pi(y) admits the same closed form as C(x)
with either parameter.  The exact optimizer below aggregates one LPF
stream instead of calling the Psi recursion per candidate: Psi(x, p_k) =
1 + sum_{j<=k} #(n <= x : P(n) = p_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dickman import EULER_GAMMA, exp_integral
from .errors import CutoffError, DomainError
from .implicit_params import solve_nu, solve_omega
from .primes import build_prime_table, lpf_stream

PSI_OVER_PI = "psi_over_pi"
PSI_OVER_Y = "psi_over_y"


def _mode_correction(v: float) -> float:
    return 0.25 * (1.0 - (v - 3.0) / (2.0 * v * v - 3.0 * v + 1.0))


def _height_log(x: float, v: float) -> float:
    L = math.log(x)
    return (
        L
        - 0.5 * math.log(2.0 * math.pi * L)
        - 2.0 * math.sqrt(v * L)
        + exp_integral(v)
        + 1.5 * v
        + EULER_GAMMA
    )


@dataclass(frozen=True)
class ModePrediction:
    """Predicted location and height of the popular prime at x."""

    x: float
    nu: float
    log_p: float
    band: float  # (log log x / log x)^{1/4} uncertainty scale
    log_height: float
    log_height_double_log: float  # De Koninck-style comparator


def predict_mode(x: float) -> ModePrediction:
    """Predict log of the popular prime and its frequency at x."""
    if x < 10**4:
        raise DomainError(f"mode prediction needs x >= 1e4, got {x}")
    v = solve_nu(x).value
    L = math.log(x)
    log_p = math.sqrt(v * L) + _mode_correction(v)
    band = (math.log(L) / L) ** 0.25
    inner = math.log(L) + math.log(math.log(L)) - 2.0 - math.log(2.0)
    double_log = L - math.sqrt(2.0 * L * inner)
    return ModePrediction(x, v, log_p, band, _height_log(x, v), double_log)


def predict_mode_height(x: float) -> float:
    """log C(x), the predicted count of the popular prime."""
    if x < 10**4:
        raise DomainError(f"mode prediction needs x >= 1e4, got {x}")
    return _height_log(x, solve_nu(x).value)


@dataclass(frozen=True)
class PeakPrediction:
    """Predicted log-location of a smooth-count peak, in both parameters."""

    x: float
    objective: str
    log_y_omega_form: float
    log_y_nu_form: float


def predict_psi_over_y_peak(x: float) -> PeakPrediction:
    """Peak of Psi(x, y)/y over y."""
    if x < 10**4:
        raise DomainError(f"peak prediction needs x >= 1e4, got {x}")
    L = math.log(x)
    w = solve_omega(x).value
    v = solve_nu(x).value
    return PeakPrediction(
        x,
        PSI_OVER_Y,
        math.sqrt(w * L) + _mode_correction(w),
        math.sqrt(v * L) + 0.75,
    )


def predict_psi_over_pi_peak(x: float) -> PeakPrediction:
    """Peak of Psi(x, y)/pi(y) over y; sits a factor e above the mode."""
    if x < 10**4:
        raise DomainError(f"peak prediction needs x >= 1e4, got {x}")
    L = math.log(x)
    w = solve_omega(x).value
    v = solve_nu(x).value
    corr = 0.75 * (1.0 - (3.0 * w - 5.0) / (6.0 * w * w - 9.0 * w + 3.0))
    return PeakPrediction(x, PSI_OVER_PI, math.sqrt(w * L) + corr, math.sqrt(v * L) + 1.25)


@dataclass(frozen=True)
class HPrediction:
    """log h(x) in both parameters, h(x) = max_y Psi(x,y)/pi(y)."""

    x: float
    log_h_omega_form: float
    log_h_nu_form: float


def h_asymptotic(x: float) -> HPrediction:
    if x < 10**4:
        raise DomainError(f"h prediction needs x >= 1e4, got {x}")
    return HPrediction(x, _height_log(x, solve_omega(x).value), _height_log(x, solve_nu(x).value))


@dataclass(frozen=True)
class ExactOptimum:
    """Exact integer optimizer of Psi(x,y)/pi(y) or Psi(x,y)/y."""

    x: int
    objective: str
    y: int  # optimal prime (ties broken toward the smaller)
    value: Fraction
    psi: int
    scanned_up_to: int  # primes beyond this were excluded by the tail bound


def exact_optimum(
    x: int,
    objective: str = PSI_OVER_PI,
    cutoff: int = 1_000_000,
    block_size: int = 1 << 20,
) -> ExactOptimum:
    """Exhaustive optimizer over prime y via one LPF-stream aggregation.

    Any y between consecutive primes has the same Psi but a larger
    denominator, so only primes compete.  Primes above the cutoff are
    dominated whenever best > x / pi(cutoff) (Psi <= x always); that tail
    bound is checked exactly and a CutoffError raised if it ever fails.
    """
    if objective not in (PSI_OVER_PI, PSI_OVER_Y):
        raise DomainError(f"unknown objective {objective!r}")
    if not 4 <= x <= 10**9:
        raise DomainError(f"exact optimum needs 4 <= x <= 1e9, got {x}")
    cutoff = min(cutoff, x)
    counts = np.zeros(cutoff + 1, dtype=np.int64)
    for block in lpf_stream(x, block_size=block_size):
        small = block.lpf[block.lpf <= cutoff]
        counts += np.bincount(small, minlength=cutoff + 1)
    primes = build_prime_table(cutoff).primes
    psi = 1 + np.cumsum(counts[primes])  # Psi(x, p_k), k ascending
    best_k = -1
    best_num = 0
    best_den = 1
    for k in range(primes.size):
        num = int(psi[k])
        den = k + 1 if objective == PSI_OVER_PI else int(primes[k])
        # exact comparison num/den > best_num/best_den
        if num * best_den > best_num * den:
            best_k, best_num, best_den = k, num, den
    # tail exclusion: for prime q > cutoff, Psi(x,q)/pi(q) <= x/(pi(cutoff)+1)
    # and Psi(x,q)/q <= x/cutoff.
    tail_den = primes.size + 1 if objective == PSI_OVER_PI else cutoff
    if best_num * tail_den <= x * best_den:
        raise CutoffError(f"optimum may lie beyond cutoff {cutoff}", 4 * cutoff)
    return ExactOptimum(
        x=x,
        objective=objective,
        y=int(primes[best_k]),
        value=Fraction(best_num, best_den),
        psi=best_num,
        scanned_up_to=cutoff,
    )
