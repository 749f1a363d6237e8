"""Hot inner loops, compiled with numba when available.

Every kernel has plain-Python semantics; the @njit wrapper only makes it
fast.  If numba is missing the same code runs interpreted (slow but exact),
so nothing in the package depends on compilation for correctness.
"""

from __future__ import annotations

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


@njit(cache=True)
def lpf_fill(lo, base, cof, lpf):
    """Fill lpf[i] with the largest prime factor of lo+i.

    base must hold all primes <= sqrt(lo + n - 1).  cof is scratch of the
    same length as lpf.  Work per block is sum(n/p) ~ n log log, since each
    prime only touches its own multiples.
    """
    n = lpf.shape[0]
    for i in range(n):
        cof[i] = lo + i
        lpf[i] = 1
    hi_minus_1 = lo + n - 1
    for bi in range(base.shape[0]):
        p = base[bi]
        if p * p > hi_minus_1:
            break
        start = (p - lo % p) % p
        for j in range(start, n, p):
            c = cof[j] // p
            while c % p == 0:
                c //= p
            cof[j] = c
            lpf[j] = p
    # Whatever survives the divide-out is a single prime > sqrt(n).
    for i in range(n):
        if cof[i] > 1:
            lpf[i] = cof[i]


@njit(cache=True)
def scan_block(lpf, lo, cutoff, counts, state, events):
    """Advance mode tracking over one block of largest prime factors.

    counts is indexed by prime value (<= cutoff).  state = [mode_count,
    mode_size].  A row (x, p, c) is appended to events when the popular set
    changes at x: p > 0 means p joined a tie at count c, p < 0 means -p took
    sole possession at count c.  Silent increments (the unique holder simply
    growing) emit nothing.  Returns the number of events written.
    """
    m = state[0]
    size = state[1]
    ne = 0
    for i in range(lpf.shape[0]):
        p = lpf[i]
        if p <= cutoff:
            c = counts[p] + 1
            counts[p] = c
            if c > m:
                m = c
                if size != 1:
                    events[ne, 0] = lo + i
                    events[ne, 1] = -p
                    events[ne, 2] = c
                    ne += 1
                    size = 1
            elif c == m:
                events[ne, 0] = lo + i
                events[ne, 1] = p
                events[ne, 2] = c
                ne += 1
                size += 1
    state[0] = m
    state[1] = size
    return ne


@njit(cache=True)
def factor_parity_block(vals, primes, isqx, out, nout, flags):
    """Trial-divide each value; record primes of odd exponent.

    out[i, :nout[i]] lists the odd-exponent primes of vals[i] ascending.
    flags[i] bit 0: all prime factors <= isqx (smooth w.r.t. sqrt(x));
    bit 1: reconstruction mismatch (never expected, checked anyway).
    """
    for i in range(vals.shape[0]):
        v = vals[i]
        recon = 1
        k = 0
        leftover = 1
        for j in range(primes.shape[0]):
            p = primes[j]
            if p * p > v:
                break
            parity = 0
            while v % p == 0:
                v //= p
                recon *= p
                parity ^= 1
            if parity == 1:
                out[i, k] = p
                k += 1
        if v > 1:
            out[i, k] = v
            k += 1
            leftover = v
            recon *= v
        nout[i] = k
        f = 0
        if leftover <= isqx:
            f |= 1
        if recon != vals[i]:
            f |= 2
        flags[i] = f
