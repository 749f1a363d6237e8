"""The random-squares stopping-time simulator."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from numpy.random import Philox

import lpfstat as L
from lpfstat.errors import DomainError
from lpfstat.squares import GENERATOR_ID, INTERVAL_HI_COEFF, INTERVAL_LO_COEFF

SEED = 20260814


def _draws(x: int, seed: int, trial: int):
    """The documented stream, rebuilt from its one-line contract."""
    bg = Philox(key=np.array([seed, trial], dtype=np.uint64))
    limit = (2**64 // x) * x
    while True:
        for w in bg.random_raw(512):
            w = int(w)
            if w < limit:
                yield w % x + 1


def _brute_stopping_time(x: int, seed: int, trial: int, cap: int = 64) -> int:
    """First draw count whose sequence holds a square-product subset."""
    gen = _draws(x, seed, trial)
    seq: list[int] = []
    for t in range(1, cap + 1):
        seq.append(next(gen))
        for r in range(1, t + 1):
            for combo in itertools.combinations(seq[:-1], r - 1):
                prod = math.prod(combo) * seq[-1]
                root = math.isqrt(prod)
                if root * root == prod:
                    return t
    raise AssertionError("no dependence within cap")


def test_matches_subset_brute_force():
    for trial in range(10):
        out = L.run_trial(30, seed=SEED, trial=trial)
        assert out.stopping_time == _brute_stopping_time(30, SEED, trial), trial


def test_trials_are_reproducible():
    a = L.run_trial(10**6, seed=SEED, trial=3)
    b = L.run_trial(10**6, seed=SEED, trial=3)
    assert a == b
    c = L.run_trial(10**6, seed=SEED, trial=4)
    assert c != a


def test_thread_count_is_invisible():
    one = L.run_ensemble(10**4, 64, seed=SEED, threads=1)
    two = L.run_ensemble(10**4, 64, seed=SEED, threads=2)
    assert one == two


def test_pigeonhole_bound_small():
    # vectors live in GF(2)^pi(x); dependence is forced at pi(x) + 1
    bound = 25 + 1  # pi(100) = 25
    for trial in range(500):
        out = L.run_trial(100, seed=SEED, trial=trial)
        assert out.stopping_time <= bound
        assert out.rank == out.stopping_time - 1
        assert 1 <= out.dependent_draw <= 100
        assert 0.0 <= out.smooth_fraction <= 1.0


def test_square_draw_stops_immediately():
    # hunt for trials whose very first draw is 1 or a perfect square
    found = 0
    for trial in range(400):
        first = next(_draws(49, SEED, trial))
        root = math.isqrt(first)
        if root * root == first:
            out = L.run_trial(49, seed=SEED, trial=trial)
            assert out.stopping_time == 1
            assert out.rank == 0
            found += 1
    assert found > 0


def test_ensemble_summary_fields():
    ens = L.run_ensemble(10**4, 100, seed=SEED)
    times = np.array(ens.stopping_times)
    assert times.size == 100
    assert ens.mean == pytest.approx(times.mean())
    assert ens.median == pytest.approx(np.median(times))
    assert ens.q25 == pytest.approx(np.quantile(times, 0.25))
    assert ens.q75 == pytest.approx(np.quantile(times, 0.75))
    assert (ens.min, ens.max) == (times.min(), times.max())
    assert ens.generator == GENERATOR_ID
    assert ens.h_value == pytest.approx(float(L.exact_optimum(10**4).value))
    assert ens.interval_lo == pytest.approx(INTERVAL_LO_COEFF * 10**4 / ens.h_value)
    assert ens.interval_hi == pytest.approx(INTERVAL_HI_COEFF * 10**4 / ens.h_value)
    assert ens.mean_position in ("below", "inside", "above")


def test_interval_coefficients():
    # endpoints differ by exactly 4/pi; both carry e^{-gamma}
    assert INTERVAL_HI_COEFF / INTERVAL_LO_COEFF == pytest.approx(4.0 / math.pi, rel=1e-15)
    assert INTERVAL_HI_COEFF == pytest.approx(math.exp(-0.5772156649015329), rel=1e-15)


def test_stream_matches_documented_contract():
    from lpfstat.squares import _draws as internal

    for x in (30, 1000, 999_983):
        mine = _draws(x, SEED, 5)
        theirs = internal(x, SEED, 5)
        assert [next(theirs) for _ in range(300)] == [next(mine) for _ in range(300)]


def test_domain():
    with pytest.raises(DomainError):
        L.run_trial(3, seed=1)
    with pytest.raises(DomainError):
        L.run_trial(2**40 + 1, seed=1)
    with pytest.raises(DomainError):
        L.run_ensemble(100, 0, seed=1)
