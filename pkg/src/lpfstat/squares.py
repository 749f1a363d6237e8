"""Stopping time of the random-squares process.

Draw integers uniformly from [1, x]; after each draw, reduce its squarefree
part (exponent vector mod 2) against a growing GF(2) basis.  The process
stops at the first draw whose vector is dependent on the earlier ones,
i.e. as soon as some nonempty subset of the draws has a square product.
Vectors live in GF(2)^pi(x), so pigeonhole stops every trial by draw
pi(x) + 1; drawing 1 or a perfect square stops it on the spot.

Randomness is counter-based and fully specified: the word stream is
Philox-4x64-10 keyed (seed, trial); each draw takes the next 64-bit word w,
rejects w >= floor(2^64/x)*x, and returns w mod x + 1.  Identical
(seed, trial) pairs give identical trials on any platform or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Philox

from . import _kernels
from .errors import DomainError
from .predictor import PSI_OVER_PI, exact_optimum
from .primes import build_prime_table

GENERATOR_ID = "philox4x64-10:key=(seed,trial),reject>=floor(2^64/x)*x,w mod x+1"

_CHUNK = 512  # draws factored per kernel call
_MAX_ODD = 16  # distinct odd-exponent primes of n <= 2^40 is at most 11

# Interval endpoints for the expected stopping time, around x/h(x):
# [ (pi e^-gamma / 4) x/h, e^-gamma x/h ]; the ratio is exactly 4/pi.
_E_NEG_GAMMA = math.exp(-0.5772156649015329)
INTERVAL_LO_COEFF = math.pi * _E_NEG_GAMMA / 4.0
INTERVAL_HI_COEFF = _E_NEG_GAMMA


@dataclass(frozen=True)
class SimOutcome:
    x: int
    trial: int
    stopping_time: int
    rank: int  # GF(2) rank just before the dependent draw
    smooth_fraction: float  # draws with all prime factors <= sqrt(x)
    dependent_draw: int  # the value whose vector closed the dependence


def _draws(x: int, seed: int, trial: int):
    """Uniform values in [1, x] from the documented counter-based stream."""
    bg = Philox(key=np.array([seed, trial], dtype=np.uint64))
    limit = (2**64 // x) * x
    while True:
        for w in bg.random_raw(_CHUNK):
            w = int(w)
            if w < limit:
                yield w % x + 1


def run_trial(x: int, seed: int, trial: int = 0, base: np.ndarray | None = None) -> SimOutcome:
    """One trial: draw until the first GF(2) dependence appears."""
    if not 4 <= x <= 2**40:
        raise DomainError(f"simulation needs 4 <= x <= 2^40, got {x}")
    if base is None:
        base = build_prime_table(max(2, math.isqrt(x))).primes
    isqx = math.isqrt(x)
    vals = np.empty(_CHUNK, dtype=np.int64)
    out = np.empty((_CHUNK, _MAX_ODD), dtype=np.int64)
    nout = np.empty(_CHUNK, dtype=np.int64)
    flags = np.empty(_CHUNK, dtype=np.int64)

    col_of: dict[int, int] = {}
    basis: dict[int, int] = {}
    draws = 0
    smooth = 0
    gen = _draws(x, seed, trial)
    while True:
        for i in range(_CHUNK):
            vals[i] = next(gen)
        _kernels.factor_parity_block(vals, base, isqx, out, nout, flags)
        for i in range(_CHUNK):
            f = int(flags[i])
            if f & 2:
                raise AssertionError(f"factorization of {int(vals[i])} failed its product check")
            draws += 1
            smooth += f & 1
            vec = 0
            for j in range(int(nout[i])):
                p = int(out[i, j])
                col = col_of.get(p)
                if col is None:
                    col = len(col_of)
                    col_of[p] = col
                vec |= 1 << col
            while vec:
                piv = vec.bit_length() - 1
                row = basis.get(piv)
                if row is None:
                    basis[piv] = vec
                    break
                vec ^= row
            if vec == 0:
                return SimOutcome(
                    x=x,
                    trial=trial,
                    stopping_time=draws,
                    rank=draws - 1,
                    smooth_fraction=smooth / draws,
                    dependent_draw=int(vals[i]),
                )


@dataclass(frozen=True)
class EnsembleSummary:
    x: int
    trials: int
    seed: int
    generator: str
    stopping_times: tuple[int, ...]
    mean: float
    median: float
    q25: float
    q75: float
    min: int
    max: int
    smooth_fraction_mean: float
    h_value: float
    interval_lo: float
    interval_hi: float
    mean_position: str  # below / inside / above the predicted interval


def run_ensemble(x: int, trials: int, seed: int, threads: int = 1) -> EnsembleSummary:
    """Independent trials plus the predicted stopping-time interval.

    Trials are keyed by index, so any thread count gives identical output.
    """
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    base = build_prime_table(max(2, math.isqrt(x))).primes
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_trial_task, ((x, seed, t) for t in range(trials)), chunksize=64))
    else:
        outcomes = [run_trial(x, seed, t, base) for t in range(trials)]
    times = np.array([o.stopping_time for o in outcomes], dtype=np.int64)
    h = float(exact_optimum(x, PSI_OVER_PI).value)
    scale = x / h
    lo, hi = INTERVAL_LO_COEFF * scale, INTERVAL_HI_COEFF * scale
    mean = float(times.mean())
    position = "inside"
    if mean < lo:
        position = "below"
    elif mean > hi:
        position = "above"
    return EnsembleSummary(
        x=x,
        trials=trials,
        seed=seed,
        generator=GENERATOR_ID,
        stopping_times=tuple(int(t) for t in times),
        mean=mean,
        median=float(np.median(times)),
        q25=float(np.quantile(times, 0.25)),
        q75=float(np.quantile(times, 0.75)),
        min=int(times.min()),
        max=int(times.max()),
        smooth_fraction_mean=float(np.mean([o.smooth_fraction for o in outcomes])),
        h_value=h,
        interval_lo=lo,
        interval_hi=hi,
        mean_position=position,
    )


def _trial_task(args: tuple[int, int, int]) -> SimOutcome:
    x, seed, trial = args
    return run_trial(x, seed, trial)
