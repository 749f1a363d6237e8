"""Prime tables and segmented largest-prime-factor sieving.

The LPF sieve works block by block: every entry keeps a running cofactor,
each base prime p <= sqrt(x) divides out all its powers from its multiples,
and whatever survives is a single prime larger than every divided one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import ConfigError, DomainError

MAX_SCAN_BOUND = 1 << 40
MIN_BLOCK = 1 << 16
MAX_BLOCK = 1 << 24

_SEGMENT = 1 << 24  # sieve segment for large prime tables


class PrimeTable:
    """Ascending primes up to a limit, with ordinal and counting lookups."""

    def __init__(self, limit: int, primes: np.ndarray):
        self.limit = int(limit)
        self.primes = primes

    def __len__(self) -> int:
        return int(self.primes.size)

    def pi(self, y: float) -> int:
        """Number of primes <= y."""
        if y > self.limit:
            raise DomainError(f"pi({y}) beyond table limit {self.limit}")
        return int(np.searchsorted(self.primes, math.floor(y), side="right"))

    def nth(self, n: int) -> int:
        """The n-th prime, 1-based: nth(1) = 2."""
        if not 1 <= n <= len(self):
            raise DomainError(f"prime ordinal {n} outside table of {len(self)}")
        return int(self.primes[n - 1])

    def index(self, p: int) -> int:
        """Ordinal of prime p (inverse of nth)."""
        i = int(np.searchsorted(self.primes, p))
        if i >= len(self) or int(self.primes[i]) != p:
            raise DomainError(f"{p} is not a prime within table limit {self.limit}")
        return i + 1

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise DomainError(f"is_prime({n}) beyond table limit {self.limit}")
        i = int(np.searchsorted(self.primes, n))
        return i < len(self) and int(self.primes[i]) == n

    def next_prime(self, n: int) -> int:
        """Smallest table prime strictly greater than n."""
        i = int(np.searchsorted(self.primes, n, side="right"))
        if i >= len(self):
            raise DomainError(f"no prime beyond {n} within table limit {self.limit}")
        return int(self.primes[i])


def _sieve_dense(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def build_prime_table(limit: int) -> PrimeTable:
    """Sieve all primes <= limit (segmented above 2^27)."""
    if limit < 2:
        raise DomainError(f"prime table limit must be >= 2, got {limit}")
    if limit > 10**9:
        raise ConfigError(f"prime table limit capped at 1e9, got {limit}")
    if limit <= (1 << 27):
        return PrimeTable(limit, _sieve_dense(limit))
    base = _sieve_dense(math.isqrt(limit))
    chunks = [base]
    lo = int(base[-1]) + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo :: p] = False
        chunks.append((np.flatnonzero(flags) + lo).astype(np.int64))
        lo = hi
    return PrimeTable(limit, np.concatenate(chunks))


@dataclass(frozen=True)
class LpfBlock:
    """Largest prime factors for a contiguous run of integers.

    lpf[i] = P(lo + i); the block covers [lo, lo + len(lpf)).
    """

    lo: int
    lpf: np.ndarray

    @property
    def hi(self) -> int:
        return self.lo + int(self.lpf.size)


def lpf_stream(
    x_max: int,
    block_size: int = 1 << 20,
    start: int = 2,
    base: np.ndarray | None = None,
) -> Iterator[LpfBlock]:
    """Yield LpfBlocks covering [start, x_max] in ascending order."""
    if x_max < 2:
        raise DomainError(f"x_max must be >= 2, got {x_max}")
    if x_max > MAX_SCAN_BOUND:
        raise ConfigError(f"bounds above 2^40 rejected, got {x_max}")
    if not MIN_BLOCK <= block_size <= MAX_BLOCK:
        raise ConfigError(f"block_size must lie in [2^16, 2^24], got {block_size}")
    if start < 2:
        raise DomainError(f"start must be >= 2, got {start}")
    if base is None:
        base = build_prime_table(max(2, math.isqrt(x_max))).primes
    cof = np.empty(block_size, dtype=np.int64)
    lpf = np.empty(block_size, dtype=np.int64)
    for lo in range(start, x_max + 1, block_size):
        n = min(block_size, x_max + 1 - lo)
        _kernels.lpf_fill(lo, base, cof[:n], lpf[:n])
        yield LpfBlock(lo, lpf[:n].copy())  # blocks must outlive the loop


def lpf_of(n: int, base: np.ndarray | None = None) -> int:
    """Largest prime factor of a single integer n >= 2 (trial division)."""
    if n < 2:
        raise DomainError(f"largest prime factor needs n >= 2, got {n}")
    if base is None:
        base = build_prime_table(max(2, math.isqrt(n))).primes
    best = 1
    for p in base:
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            best = p
    return n if n > 1 else best
