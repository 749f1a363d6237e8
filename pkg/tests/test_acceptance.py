"""Acceptance gates: eight criteria, one test per criterion.

The exact scan to 2.5e8 feeds criteria 1, 5 and 6 through a shared
module-scoped fixture (about ten seconds of sieving).  Reference rows and
values are frozen below; every count is also pinned by an independent
channel (the Psi identity, a per-integer recount, or interval bisection).
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest
from numpy.random import Philox

import lpfstat as L

SCAN_BOUND = 250_000_000
CHECKPOINTS = (10**6, 10**7, 10**8, 2 * 10**8)
TIE_X = 2_626_355

# frozen reference table for the scan of [2, 2.5e8]: six columns per prime.
# Rows through 199 close inside the bound.  283's reign is still open at
# 2.5e8, so its last two cells must render as >bound and >count-at-bound
# (count 167564 equals Psi(2.5e8 // 283, 283), checked independently below).
# The 73 row carries the reference value 2642391 for last_popular_x; the
# scan, a per-integer factorization recount, and the Psi identity all give
# 2642377 — the row is kept verbatim so any discrepancy stays visible.
REFERENCE_CSV = """\
prime,first_popular_x,first_unique_x,last_popular_x,count_at_first,count_at_last
2,2,2,17,1,4
3,3,12,119,1,14
5,45,80,279,8,25
7,70,196,1858,10,77
13,1456,1638,5471,67,151
19,4845,4864,29301,140,428
23,20332,22425,53474,344,616
31,46345,46500,117303,563,1005
43,106812,109779,220523,947,1517
47,153032,158625,611374,1197,2902
73,592760,603564,2642391,2846,7664
83,2484190,2552416,2672025,7357,7722
109,2620033,2620142,2952463,7621,8284
113,2623860,2627250,41192601,7629,48380
199,41163150,41163747,237611044,48357,161644
283,237321819,237398795,>250000000,161507,>167564
"""

SEED = 20260814


@pytest.fixture(scope="module")
def big_scan():
    return L.scan(SCAN_BOUND, sample_at=[*CHECKPOINTS, TIE_X])


def test_criterion_1_golden_table(big_scan):
    got = L.records_to_csv(big_scan.records).splitlines()
    want = REFERENCE_CSV.splitlines()
    mismatches = [f"got {g!r}, want {w!r}" for g, w in itertools.zip_longest(got, want) if g != w]
    # the four-way tie: 73, 83, 109 and 113 all hold count 7634 at 2626355
    tie = next(s for s in big_scan.snapshots if s.x == TIE_X)
    if tie.mode_primes != (73, 83, 109, 113) or tie.mode_count != 7634:
        mismatches.append(f"tie snapshot off: {tie}")
    # independent pin for the open 283 cells: count by largest factor is
    # Psi(x // q, q), evaluated by the recursion rather than the sieve
    if L.psi_exact(SCAN_BOUND // 283, 283) != 167564:
        mismatches.append("Psi(2.5e8 // 283, 283) != 167564")
    assert not mismatches, "; ".join(mismatches)


def test_criterion_2_dickman_accuracy(rho_table):
    assert rho_table.rho(2.0) == pytest.approx(1.0 - math.log(2.0), rel=1e-13)
    assert rho_table.rho(1.5) == pytest.approx(1.0 - math.log(1.5), rel=1e-13)
    rng = random.Random(SEED)
    for _ in range(100):
        u = rng.uniform(1.0, 64.0)
        lhs = u * rho_table.rho(u)
        assert rho_table.integrate(u - 1.0, u) == pytest.approx(lhs, rel=1e-10), u
    for i in range(341):
        u = 30.0 + 34.0 * i / 340.0
        exact = rho_table.rho(u)
        assert abs(L.rho_asymptotic(u) - exact) / exact <= 5.0 / u, u


def test_criterion_3_smooth_cross_validation():
    # exhaustive over every x <= 1e5 and prime y <= 100: psi_exact is a sum
    # of base cases each nondecreasing in x, so checking both ends of every
    # constancy interval [s_i, s_{i+1}-1] pins all intermediate x too
    limit = 10**5
    lpf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if lpf[p] == 0:
            lpf[p::p] = p
    table = L.build_prime_table(limit)
    memo = L.PsiMemo()
    for y in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97):
        smooth = (np.flatnonzero(lpf[1 : limit + 1] <= y) + 1).tolist()
        for i, s in enumerate(smooth):
            assert L.psi_exact(s, y, table, memo) == i + 1, (s, y)
            until = smooth[i + 1] - 1 if i + 1 < len(smooth) else limit
            assert L.psi_exact(until, y, table, memo) == i + 1, (until, y)
    # the count decomposition identity on 200 randomized instances
    rng = random.Random(SEED)
    big_table = L.build_prime_table(10**4)
    for _ in range(200):
        x = rng.randrange(10**3, 10**7)
        n = rng.randrange(1, 50)
        k = rng.randrange(1, 15)
        lhs, rhs = L.buchstab_check(x, n, k, big_table)
        assert lhs == rhs, (x, n, k)


def test_criterion_4_solver_residuals():
    for i in range(1000):
        x = 10.0 ** (2.0 + 16.0 * i / 999.0)
        for solver in (L.solve_nu, L.solve_omega):
            s = solver(x)
            assert abs(s.residual) <= 1e-12 * math.exp(s.value), (solver, x)

    def bisect(x: float, extra: float) -> float:
        lx = math.log(x)
        lo, hi = 1e-12, 50.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if math.exp(mid) - 1.0 - math.sqrt(mid * lx) + extra * mid < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    assert L.solve_nu(1e14).value == pytest.approx(bisect(1e14, 1.0), abs=0.01)
    assert L.solve_nu(1e8).value == pytest.approx(bisect(1e8, 1.0), abs=0.01)
    assert L.solve_nu(1e14).value == pytest.approx(1.9415792641926501, abs=1e-10)
    assert L.solve_nu(1e8).value == pytest.approx(1.5702752947162353, abs=1e-10)


def test_criterion_5_desk_scale_bracketing(big_scan):
    for x in CHECKPOINTS:
        snap = next(s for s in big_scan.snapshots if s.x == x)
        assert len(snap.mode_primes) == 1, snap
        predicted = L.predict_mode(float(x))
        assert abs(math.log(snap.mode_primes[0]) - predicted.log_p) <= 1.0, x
        assert abs(math.log(snap.mode_count) - predicted.log_height) <= 1.0, x


def test_criterion_6_convex_classification(big_scan):
    by_prime = {hp.prime: hp.classification for hp in L.convex_classify(1000)}
    for p in (5, 13, 23, 31, 43):
        assert by_prime[p] == L.EDGE, p
    for p in (83, 109):
        assert by_prime[p] == L.INTERIOR, p
    # every hull vertex the suppression rule confirms must already have had
    # its reign inside [2, 2.5e8]; n = 104 is the smallest point count whose
    # confirmation window reaches 283 (p_104 = 569 >= 2 * 283), and larger n
    # eventually confirm vertices whose reigns begin beyond the scan bound
    popular = {r.prime for r in big_scan.records}
    confirmed = L.hull_summary(L.convex_classify(104))[L.VERTEX]
    assert confirmed == [2, 3, 7, 19, 47, 73, 113, 199, 283]
    assert set(confirmed) <= popular


def test_criterion_7_simulator_soundness():
    # exact equality with subset brute force at x = 30
    def draws(x: int, trial: int):
        bg = Philox(key=np.array([SEED, trial], dtype=np.uint64))
        limit = (2**64 // x) * x
        while True:
            for w in bg.random_raw(512):
                w = int(w)
                if w < limit:
                    yield w % x + 1

    for trial in range(20):
        gen = draws(30, trial)
        seq: list[int] = []
        stop = None
        for t in range(1, 64):
            seq.append(next(gen))
            done = False
            for r in range(0, t):
                for combo in itertools.combinations(seq[:-1], r):
                    prod = math.prod(combo) * seq[-1]
                    root = math.isqrt(prod)
                    if root * root == prod:
                        done = True
                        break
                if done:
                    break
            if done:
                stop = t
                break
        assert L.run_trial(30, seed=SEED, trial=trial).stopping_time == stop, trial

    # pigeonhole: dependence no later than pi(x) + 1
    ens = L.run_ensemble(10**4, 10**4, seed=SEED)
    assert ens.max <= 1229 + 1

    # loose consistency band around the predicted stopping-time interval
    ens6 = L.run_ensemble(10**6, 200, seed=SEED)
    assert 0.3 * ens6.interval_lo <= ens6.mean <= 3.0 * ens6.interval_hi
    assert ens6.h_value == pytest.approx(125157.0 / 40.0)


def test_criterion_8_empirical_sanity():
    st = L.empirical_stats(10**6)
    assert 0.85 <= st.mean_ratio <= 1.15
    assert 0.55 <= st.median_exponent <= 0.67
