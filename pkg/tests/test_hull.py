"""Lower-hull classification of the points (n, p_n)."""

from __future__ import annotations

import pytest

import lpfstat as L
from lpfstat.errors import DomainError

# stable classifications, cross-checked by the chord oracle below
VERTICES_104 = [2, 3, 7, 19, 47, 73, 113, 199, 283]
EDGES_1000 = [5, 13, 23, 31, 43]
VERTICES_1000_BELOW_3000 = [2, 3, 7, 19, 47, 73, 113, 199, 283, 467, 661, 887, 1129, 1327, 1627, 2803]


def test_against_chord_oracle():
    # a point is interior iff it sits strictly above some spanning chord,
    # an edge point iff it only ever touches chords, a vertex otherwise
    n_max = 150
    got = {hp.prime: hp.classification for hp in L.convex_classify(n_max)}
    pts = [(n, int(p)) for n, p in enumerate(L.build_prime_table(10**4).primes[:n_max], start=1)]
    for n, p in pts[1:-1]:
        above = on = False
        for a in range(1, n):
            xa, ya = pts[a - 1]
            for b in range(n + 1, n_max + 1):
                xb, yb = pts[b - 1]
                s = (xb - xa) * (p - ya) - (yb - ya) * (n - xa)
                if s > 0:
                    above = True
                elif s == 0:
                    on = True
        expect = L.INTERIOR if above else (L.EDGE if on else L.VERTEX)
        if got[p] == L.UNCONFIRMED:
            assert expect == L.VERTEX, p  # suppression only hides vertices
        else:
            assert got[p] == expect, p


def test_stable_prefix_at_104():
    summary = L.hull_summary(L.convex_classify(104))
    assert summary[L.VERTEX] == VERTICES_104
    assert set(summary[L.EDGE]) >= {5, 13, 23, 31, 43}


def test_classes_at_1000():
    points = L.convex_classify(1000)
    by_prime = {hp.prime: hp.classification for hp in points}
    assert [p for p, c in by_prime.items() if c == L.EDGE and p < 3000] == EDGES_1000
    assert by_prime[83] == L.INTERIOR
    assert by_prime[109] == L.INTERIOR
    summary = L.hull_summary(points)
    assert [p for p in summary[L.VERTEX] if p < 3000] == VERTICES_1000_BELOW_3000


def test_prefix_stability():
    # enlarging the point set must not disturb confirmed classifications
    small = {hp.prime: hp.classification for hp in L.convex_classify(300)}
    large = {hp.prime: hp.classification for hp in L.convex_classify(3000)}
    for p, c in small.items():
        if c != L.UNCONFIRMED:
            assert large[p] == c, p


def test_point_bookkeeping():
    points = L.convex_classify(50)
    assert [hp.n for hp in points] == list(range(1, 51))
    assert points[0].prime == 2 and points[0].classification == L.VERTEX
    assert points[-1].classification == L.UNCONFIRMED
    classes = {hp.classification for hp in points}
    assert classes <= {L.VERTEX, L.EDGE, L.INTERIOR, L.UNCONFIRMED}


def test_suppression_rule():
    # vertices whose prime exceeds half the right endpoint stay unconfirmed
    for n_max in (104, 500):
        points = L.convex_classify(n_max)
        p_last = points[-1].prime
        for hp in points:
            if hp.classification == L.VERTEX:
                assert 2 * hp.prime <= p_last
            if hp.classification == L.UNCONFIRMED and hp.n < n_max:
                assert 2 * hp.prime > p_last


def test_domain():
    with pytest.raises(DomainError):
        L.convex_classify(1)
