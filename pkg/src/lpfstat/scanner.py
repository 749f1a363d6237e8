"""Streaming scan for the most popular largest prime factor.

For each n in [2, x] the count of its largest prime factor is bumped; the
"popular" set at x is every prime attaining the maximal count (ties are
popular too).  Membership of that set only changes when a count reaches or
exceeds the maximum, so the compiled block kernel emits just those rare
events and Python-side bookkeeping replays them into per-prime records.

Primes above the tracking cutoff B cannot matter as long as the running
maximum exceeds floor(x/B), since a prime q > B divides at most x/q <= x/B
of the integers in [2, x]; the scan enforces that margin as it goes.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass, field
from io import StringIO

import numpy as np

from . import _kernels
from .dickman import RhoTable
from .errors import CheckpointError, ConfigError, CutoffError, DomainError
from .primes import MAX_SCAN_BOUND, PrimeTable, build_prime_table, lpf_stream

CSV_HEADER = "prime,first_popular_x,first_unique_x,last_popular_x,count_at_first,count_at_last"

_MAGIC = b"LPFSCN01"
_CKPT_VERSION = 1


@dataclass
class PopularityRecord:
    """Life of one prime in the popular set.

    last_popular_x is the scan bound (and open_ended is True) when the
    prime still attains the maximum there.
    """

    prime: int
    first_popular_x: int
    first_unique_x: int | None
    last_popular_x: int
    count_at_first: int
    count_at_last: int
    open_ended: bool = False


@dataclass(frozen=True)
class Snapshot:
    """State of the popular set right after processing n = x."""

    x: int
    mode_count: int
    mode_primes: tuple[int, ...]


@dataclass
class ScanState:
    x_max: int
    cutoff: int
    x_current: int
    counts: np.ndarray  # indexed by prime value, length cutoff + 1
    mode_count: int
    mode_set: set[int]
    records: dict[int, PopularityRecord] = field(default_factory=dict)

    @property
    def untracked_max_possible(self) -> int:
        return self.x_current // self.cutoff


@dataclass
class ScanResult:
    records: list[PopularityRecord]
    state: ScanState
    snapshots: list[Snapshot]


def _apply_events(events: np.ndarray, n_events: int, st: ScanState) -> None:
    records, mode_set = st.records, st.mode_set
    for row in range(n_events):
        x = int(events[row, 0])
        ps = int(events[row, 1])
        c = int(events[row, 2])
        if ps < 0:
            p = -ps
            for q in mode_set:
                if q != p:
                    r = records[q]
                    r.last_popular_x = x - 1
                    r.count_at_last = c - 1
            mode_set.clear()
            mode_set.add(p)
            r = records.get(p)
            if r is None:
                records[p] = PopularityRecord(p, x, x, x, c, c)
            elif r.first_unique_x is None:
                r.first_unique_x = x
        else:
            mode_set.add(ps)
            if ps not in records:
                records[ps] = PopularityRecord(ps, x, None, x, c, c)


def _check_cutoff(mode_count: int, x: int, cutoff: int) -> None:
    if mode_count <= x // cutoff:
        required = 2 * (x // max(1, mode_count)) if mode_count else 2 * x
        raise CutoffError(
            f"mode count {mode_count} not above floor({x}/{cutoff}) = {x // cutoff}; "
            "primes beyond the cutoff could be popular",
            required,
        )


def _finalize(st: ScanState) -> list[PopularityRecord]:
    for q in sorted(st.mode_set):
        r = st.records[q]
        r.last_popular_x = st.x_current
        r.count_at_last = st.mode_count
        r.open_ended = True
    return sorted(st.records.values(), key=lambda r: r.first_popular_x)


def scan(
    x_max: int,
    cutoff: int = 100_000,
    block_size: int = 1 << 20,
    sample_at: list[int] | None = None,
    checkpoint_path: str | None = None,
    checkpoint_every: int = 0,
    resume_from: str | None = None,
) -> ScanResult:
    """Scan [2, x_max] and return popularity records, state and snapshots.

    sample_at asks for Snapshots exactly at those x.  checkpoint_every > 0
    writes a resumable checkpoint to checkpoint_path roughly that often
    (aligned to block ends).  resume_from continues a previous checkpoint;
    cutoff and parameters come from the file in that case.
    """
    if x_max > MAX_SCAN_BOUND:
        raise ConfigError(f"scan bounds above 2^40 rejected, got {x_max}")
    if x_max < 2:
        raise DomainError(f"x_max must be >= 2, got {x_max}")
    if cutoff < 10_000:
        raise ConfigError(f"cutoff must be >= 1e4, got {cutoff}")
    if cutoff > 10**8:
        raise ConfigError(f"cutoff above 1e8 would need >800MB of counters")

    if resume_from is not None:
        st = load_checkpoint(resume_from)
        if x_max < st.x_current:
            raise ConfigError(f"checkpoint already at {st.x_current}, beyond x_max={x_max}")
        st.x_max = x_max
        start = st.x_current + 1
    else:
        st = ScanState(
            x_max=x_max,
            cutoff=cutoff,
            x_current=1,
            counts=np.zeros(cutoff + 1, dtype=np.int64),
            mode_count=0,
            mode_set=set(),
        )
        start = 2

    samples = sorted(set(int(s) for s in (sample_at or [])))
    for s in samples:
        if not 2 <= s <= x_max:
            raise DomainError(f"sample point {s} outside [2, {x_max}]")
    samples = [s for s in samples if s >= start]

    snapshots: list[Snapshot] = []
    if start > x_max:
        return ScanResult(_finalize(st), st, snapshots)

    kstate = np.array([st.mode_count, len(st.mode_set)], dtype=np.int64)
    events = np.empty((block_size, 3), dtype=np.int64)
    since_ckpt = 0

    for block in lpf_stream(x_max, block_size=block_size, start=start):
        cuts = [s for s in samples if block.lo <= s < block.hi]
        edges = cuts + ([] if cuts and cuts[-1] == block.hi - 1 else [block.hi - 1])
        lo = block.lo
        for edge in edges:
            part = block.lpf[lo - block.lo : edge + 1 - block.lo]
            ne = _kernels.scan_block(part, lo, st.cutoff, st.counts, kstate, events)
            st.mode_count = int(kstate[0])
            _apply_events(events, ne, st)
            st.x_current = edge
            if edge in samples:
                _check_cutoff(st.mode_count, st.x_current, st.cutoff)
                snapshots.append(Snapshot(edge, st.mode_count, tuple(sorted(st.mode_set))))
            lo = edge + 1
        _check_cutoff(st.mode_count, st.x_current, st.cutoff)
        since_ckpt += int(block.lpf.size)
        if checkpoint_every > 0 and checkpoint_path and since_ckpt >= checkpoint_every and st.x_current < x_max:
            save_checkpoint(st, checkpoint_path)
            since_ckpt = 0

    if checkpoint_path and checkpoint_every >= 0:
        save_checkpoint(st, checkpoint_path)
    return ScanResult(_finalize(st), st, snapshots)


# ---------------------------------------------------------------------------
# checkpoints

def _records_payload(st: ScanState) -> list[list[int]]:
    rows = []
    for r in sorted(st.records.values(), key=lambda r: r.prime):
        rows.append([
            r.prime,
            r.first_popular_x,
            -1 if r.first_unique_x is None else r.first_unique_x,
            r.last_popular_x,
            r.count_at_first,
            r.count_at_last,
        ])
    return rows


def save_checkpoint(st: ScanState, path: str) -> None:
    header = {
        "x_max": st.x_max,
        "cutoff": st.cutoff,
        "x_current": st.x_current,
        "mode_count": st.mode_count,
        "mode_set": sorted(st.mode_set),
        "records": _records_payload(st),
    }
    hb = json.dumps(header, separators=(",", ":")).encode()
    counts = np.ascontiguousarray(st.counts, dtype="<i8").tobytes()
    body = _MAGIC + struct.pack("<II", _CKPT_VERSION, len(hb)) + hb
    body += struct.pack("<Q", len(counts)) + counts
    digest = hashlib.sha256(body).digest()
    with open(path, "wb") as fh:
        fh.write(body + digest)


def load_checkpoint(path: str) -> ScanState:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(_MAGIC) + 8 + 32 or blob[: len(_MAGIC)] != _MAGIC:
        raise CheckpointError(f"{path}: not a scan checkpoint")
    body, digest = blob[:-32], blob[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CheckpointError(f"{path}: digest mismatch, refusing to resume")
    off = len(_MAGIC)
    version, hlen = struct.unpack_from("<II", body, off)
    if version != _CKPT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    off += 8
    header = json.loads(body[off : off + hlen].decode())
    off += hlen
    (clen,) = struct.unpack_from("<Q", body, off)
    off += 8
    counts = np.frombuffer(body[off : off + clen], dtype="<i8").astype(np.int64)
    if counts.size != header["cutoff"] + 1:
        raise CheckpointError(f"{path}: counter block truncated")
    records = {}
    for p, fp, fu, lp, cf, cl in header["records"]:
        records[p] = PopularityRecord(p, fp, None if fu == -1 else fu, lp, cf, cl)
    return ScanState(
        x_max=header["x_max"],
        cutoff=header["cutoff"],
        x_current=header["x_current"],
        counts=counts,
        mode_count=header["mode_count"],
        mode_set=set(header["mode_set"]),
        records=records,
    )


# ---------------------------------------------------------------------------
# rendering

def records_to_csv(records: list[PopularityRecord]) -> str:
    """CSV table; a reign still open at the bound renders >bound and >count."""
    out = StringIO()
    out.write(CSV_HEADER + "\n")
    for r in records:
        last = str(r.last_popular_x)
        count_last = str(r.count_at_last)
        if r.open_ended:
            last, count_last = ">" + last, ">" + count_last
        first_u = "" if r.first_unique_x is None else str(r.first_unique_x)
        out.write(f"{r.prime},{r.first_popular_x},{first_u},{last},{r.count_at_first},{count_last}\n")
    return out.getvalue()


def records_to_json(result: ScanResult) -> dict:
    return {
        "x_max": result.state.x_max,
        "cutoff": result.state.cutoff,
        "mode_count": result.state.mode_count,
        "popular_now": sorted(result.state.mode_set),
        "records": [
            {
                "prime": r.prime,
                "first_popular_x": r.first_popular_x,
                "first_unique_x": r.first_unique_x,
                "last_popular_x": r.last_popular_x,
                "count_at_first": r.count_at_first,
                "count_at_last": r.count_at_last,
                "open_ended": r.open_ended,
            }
            for r in result.records
        ],
        "snapshots": [
            {"x": s.x, "mode_count": s.mode_count, "mode_primes": list(s.mode_primes)}
            for s in result.snapshots
        ],
    }


# ---------------------------------------------------------------------------
# verification and companion statistics

def counts_consistency(st: ScanState, block_size: int = 1 << 20) -> tuple[int, int]:
    """Second pass: tracked + untracked must partition [2, x_current].

    Returns (tracked_total, untracked_total); raises on mismatch.
    """
    tracked = int(st.counts.sum())
    untracked = 0
    for block in lpf_stream(st.x_current, block_size=block_size):
        untracked += int(np.count_nonzero(block.lpf > st.cutoff))
    if tracked + untracked != st.x_current - 1:
        raise AssertionError(
            f"count partition broken: {tracked} tracked + {untracked} untracked != {st.x_current - 1}"
        )
    return tracked, untracked


@dataclass(frozen=True)
class GapDiagnostic:
    """Spacing diagnostics for consecutive popular primes p < q."""

    p: int
    q: int
    primes_between: int  # number of primes in (p, q]
    alpha: float  # log(q - p) / log p
    mean_gap: float  # (q - p) / primes_between
    rho_bound: float  # rho(2 - alpha) log p / (2 - alpha)
    ratio: float  # mean_gap / rho_bound
    next_prime_gap: int  # nextprime(p) - p
    exclusion_threshold: float  # 0.153... log p
    exclusion_ok: bool  # next_prime_gap >= threshold


RHO2_HALF = (1.0 - math.log(2.0)) / 2.0  # rho(2)/2 = 0.15342640972002733


def spacing_report(records: list[PopularityRecord], rho: RhoTable, table: PrimeTable | None = None) -> list[GapDiagnostic]:
    """Gap diagnostics between consecutive popular primes."""
    ps = sorted({r.prime for r in records})
    if len(ps) < 2:
        return []
    if table is None or table.limit < 2 * ps[-1]:
        table = build_prime_table(max(100, 2 * ps[-1]))
    out = []
    for p, q in zip(ps, ps[1:]):
        k = table.pi(q) - table.pi(p)
        alpha = math.log(q - p) / math.log(p)
        bound = rho.rho(2.0 - alpha) * math.log(p) / (2.0 - alpha)
        gap_next = table.next_prime(p) - p
        threshold = RHO2_HALF * math.log(p)
        out.append(
            GapDiagnostic(
                p=p,
                q=q,
                primes_between=k,
                alpha=alpha,
                mean_gap=(q - p) / k,
                rho_bound=bound,
                ratio=(q - p) / k / bound,
                next_prime_gap=gap_next,
                exclusion_threshold=threshold,
                exclusion_ok=gap_next >= threshold,
            )
        )
    return out


@dataclass(frozen=True)
class EmpiricalStats:
    """Moments of the largest-prime-factor sample on [2, x]."""

    x: int
    mean: float
    median: int
    mode_count: int
    mean_prediction: float  # pi^2 x / (12 log x)
    median_prediction: float  # e^{(gamma-1)/sqrt(e)} x^{1/sqrt(e)}
    mean_ratio: float
    median_exponent: float  # log(median)/log(x), -> 1/sqrt(e)


def empirical_stats(x: int, cutoff: int = 100_000, block_size: int = 1 << 20) -> EmpiricalStats:
    """Stream [2, x] once for the mean, median and mode of P(n)."""
    if x < 100:
        raise DomainError(f"stats need x >= 100, got {x}")
    counts = np.zeros(cutoff + 1, dtype=np.int64)
    total = 0
    for block in lpf_stream(x, block_size=block_size):
        total += int(block.lpf.sum(dtype=np.int64))
        small = block.lpf[block.lpf <= cutoff]
        counts += np.bincount(small, minlength=cutoff + 1)
    n_vals = x - 1
    mean = total / n_vals
    # median: k-th smallest value of P(n), k = ceil(n_vals / 2) = x // 2.
    # every untracked prime exceeds the cutoff, so the cumulative counts of
    # tracked primes are exact below it.
    k = x // 2
    csum = np.cumsum(counts)
    if csum[-1] < k:
        raise CutoffError(f"median beyond tracking cutoff {cutoff}", 2 * cutoff)
    median = int(np.searchsorted(csum, k))
    mode_count = int(counts.max())
    _check_cutoff(mode_count, x, cutoff)
    L = math.log(x)
    from .dickman import EULER_GAMMA

    mean_pred = math.pi**2 * x / (12.0 * L)
    inv_sqrt_e = 1.0 / math.sqrt(math.e)
    median_pred = math.exp((EULER_GAMMA - 1.0) * inv_sqrt_e) * x**inv_sqrt_e
    return EmpiricalStats(
        x=x,
        mean=mean,
        median=median,
        mode_count=mode_count,
        mean_prediction=mean_pred,
        median_prediction=median_pred,
        mean_ratio=mean / mean_pred,
        median_exponent=math.log(median) / L,
    )
