"""Lower convex hull of the points (n, p_n), with exact classification.

A prime is a VERTEX when it is a strict corner of the hull, EDGE when it
lies exactly on a hull segment without being a corner, INTERIOR otherwise.
The right edge of any finite prefix is unstable (more points can only pull
the hull down there), so the final vertex and every vertex with
2 p_n > p_N are reported UNCONFIRMED instead.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from .errors import DomainError
from .primes import PrimeTable, build_prime_table

VERTEX = "VERTEX"
EDGE = "EDGE"
INTERIOR = "INTERIOR"
UNCONFIRMED = "UNCONFIRMED"


@dataclass(frozen=True)
class HullPoint:
    n: int  # 1-based prime ordinal
    prime: int
    classification: str


def _cross(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    # exact integer orientation of o -> a -> b
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _table_for(n_max: int) -> PrimeTable:
    # p_n < n (log n + log log n) for n >= 6; pad generously below that
    import math

    if n_max < 6:
        return build_prime_table(13)
    bound = int(n_max * (math.log(n_max) + math.log(math.log(n_max)))) + 10
    return build_prime_table(bound)


def convex_classify(n_max: int, table: PrimeTable | None = None) -> list[HullPoint]:
    """Classify (n, p_n) for n = 1..n_max against their lower convex hull."""
    if n_max < 3:
        raise DomainError(f"need n_max >= 3, got {n_max}")
    if table is None or len(table) < n_max:
        table = _table_for(n_max)
    pts = [(n, int(table.primes[n - 1])) for n in range(1, n_max + 1)]

    hull: list[tuple[int, int]] = []
    for pt in pts:
        # keep only strict left turns: collinear middles are popped
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)

    vertex_ns = {pt[0] for pt in hull}
    hull_xs = [pt[0] for pt in hull]
    p_last = pts[-1][1]
    out = []
    for pt in pts:
        n, p = pt
        if n in vertex_ns:
            cls = VERTEX
            if n == n_max or 2 * p > p_last:
                cls = UNCONFIRMED
        else:
            i = bisect_right(hull_xs, n) - 1
            s = _cross(hull[i], hull[i + 1], pt)
            if s < 0:
                raise AssertionError(f"point ({n},{p}) below its own hull")
            cls = EDGE if s == 0 else INTERIOR
        out.append(HullPoint(n, p, cls))
    return out


def hull_summary(points: list[HullPoint]) -> dict[str, list[int]]:
    """Primes per class, INTERIOR left out (it is almost everything)."""
    summary: dict[str, list[int]] = {VERTEX: [], EDGE: [], UNCONFIRMED: []}
    for hp in points:
        if hp.classification != INTERIOR:
            summary[hp.classification].append(hp.prime)
    return summary
