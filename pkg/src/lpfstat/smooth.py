"""Exact and approximate counts of smooth numbers.

Psi(x, y) counts 1 <= n <= x whose prime factors are all <= y (so 1 is
always counted).  The exact recursion descends over the prime list,

    Psi(x, p_k) = Psi(x, p_{k-1}) + Psi(x // p_k, p_k),

with Psi(x, 2) = floor(log2 x) + 1.  All division is integer floor
division, which composes exactly: floor(floor(x/p)/q) = floor(x/(pq)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dickman import EULER_GAMMA, RhoTable, rho_derivative
from .errors import CapacityError, DomainError
from .primes import PrimeTable, build_prime_table

MEMO_CAP = 10**7


class PsiMemo:
    """Shared memo for the Psi recursion, keyed (floor(x), prime ordinal)."""

    def __init__(self, cap: int = MEMO_CAP):
        self.cap = cap
        self.table: dict[tuple[int, int], int] = {}
        self.hits = 0

    def __len__(self) -> int:
        return len(self.table)

    def get(self, key: tuple[int, int]) -> int | None:
        v = self.table.get(key)
        if v is not None:
            self.hits += 1
        return v

    def put(self, key: tuple[int, int], value: int) -> None:
        if len(self.table) >= self.cap:
            raise CapacityError(f"Psi memo exceeded hard cap of {self.cap} entries")
        self.table[key] = value


def _psi(x: int, k: int, primes, memo: PsiMemo) -> int:
    # k = number of allowed primes (prefix of the table)
    if x < 1:
        return 0
    if k == 0:
        return 1  # only n = 1
    if k == 1:
        return x.bit_length()  # floor(log2 x) + 1
    p = int(primes[k - 1])
    if p >= x:
        return x  # every n <= x is made of primes <= p
    key = (x, k)
    got = memo.get(key)
    if got is not None:
        return got
    # the descent over the prime index is unrolled into a sum so that the
    # recursion depth is bounded by successive divisions of x alone
    val = 1
    for j in range(1, k + 1):
        q = x // int(primes[j - 1])
        if q < 1:
            break
        val += _psi(q, j, primes, memo)
    memo.put(key, val)
    return val


def psi_exact(x: int, y: int, table: PrimeTable | None = None, memo: PsiMemo | None = None) -> int:
    """Exact Psi(x, y) for integer x >= 0, y >= 2."""
    if x < 0:
        raise DomainError(f"Psi needs x >= 0, got {x}")
    if y < 2:
        raise DomainError(f"Psi needs y >= 2, got {y}")
    x = int(x)
    if x < 2:
        return x
    if table is None or table.limit < y:
        table = build_prime_table(max(2, y))
    if memo is None:
        memo = PsiMemo()
    return _psi(x, table.pi(y), table.primes, memo)


def buchstab_check(x: int, n: int, k: int, table: PrimeTable | None = None) -> tuple[int, int]:
    """Both sides of the Buchstab identity

    Psi(x/p_{n+k}, p_{n+k}) = Psi(x/p_{n+k}, p_n)
                              + sum_{i=1..k} Psi(x/(p_{n+k} p_{n+i}), p_{n+i})

    evaluated with exact floor division; returns (lhs, rhs).
    """
    if n < 1 or k < 1:
        raise DomainError(f"buchstab_check needs n >= 1, k >= 1, got n={n}, k={k}")
    if x < 2:
        raise DomainError(f"buchstab_check needs x >= 2, got {x}")
    if table is None:
        table = build_prime_table(max(100, 4 * (n + k) * (int(math.log(n + k + 2)) + 2)))
    memo = PsiMemo()
    pnk = table.nth(n + k)
    lhs = _psi(x // pnk, n + k, table.primes, memo)
    rhs = _psi(x // pnk, n, table.primes, memo)
    for i in range(1, k + 1):
        pni = table.nth(n + i)
        rhs += _psi(x // (pnk * pni), n + i, table.primes, memo)
    return lhs, rhs


def psi_hildebrand(x: float, y: float, table: RhoTable) -> float:
    """Leading smooth-count approximation x rho(u), u = log x / log y."""
    if x < 2 or y < 2:
        raise DomainError(f"approximation needs x >= 2, y >= 2, got x={x}, y={y}")
    u = math.log(x) / math.log(y)
    return x * table.rho(u)


def psi_saias(x: float, y: float, table: RhoTable) -> float:
    """Second-order form x (rho(u) + (gamma - 1) rho'(u) / log y)."""
    if x < 2 or y < 2:
        raise DomainError(f"approximation needs x >= 2, y >= 2, got x={x}, y={y}")
    ly = math.log(y)
    u = math.log(x) / ly
    if u <= 1.0:
        return float(math.floor(x))  # all of [1,x] is y-smooth
    return x * (table.rho(u) + (EULER_GAMMA - 1.0) * rho_derivative(u, table) / ly)
