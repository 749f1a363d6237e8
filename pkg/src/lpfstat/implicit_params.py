"""The implicit parameters nu and omega.

nu solves  e^v = 1 + sqrt(v log x) - v,
omega      e^w = 1 + sqrt(w log x);

both grow like (1/2) log log x + (1/2) log log log x - (1/2) log 2, and
nu < omega with nu - omega ~ -sqrt(nu / log x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AccuracyError, DomainError

_RES_TOL = 1e-13  # target; the published contract is 1e-12 * e^v


@dataclass(frozen=True)
class ImplicitSolution:
    x: float
    kind: str  # "nu" or "omega"
    value: float
    residual: float
    iterations: int
    approx: float  # leading double-log approximation


def _solve(x: float, kind: str) -> ImplicitSolution:
    if x < 16:
        raise DomainError(f"implicit parameters need x >= 16, got {x}")
    extra = 1.0 if kind == "nu" else 0.0
    L = math.log(x)
    ll = math.log(L)
    approx = 0.5 * (ll + math.log(ll) - math.log(2.0))
    half = 0.5 * ll
    lo, hi = 0.1 * half, 10.0 * half

    def f(v: float) -> float:
        return math.exp(v) - 1.0 - math.sqrt(v * L) + extra * v

    # The bracket is comfortable in theory; repair defensively anyway.
    tries = 0
    while f(lo) >= 0.0 and tries < 60:
        lo *= 0.5
        tries += 1
    while f(hi) <= 0.0 and tries < 120:
        hi *= 2.0
        tries += 1
    if not f(lo) < 0.0 < f(hi):
        raise AccuracyError(f"no sign change bracketing {kind}({x})", math.inf)

    v = approx if lo < approx < hi else 0.5 * (lo + hi)
    fv = f(v)
    it = 0
    while abs(fv) > _RES_TOL * math.exp(v) and it < 60:
        it += 1
        if fv < 0.0:
            lo = v
        else:
            hi = v
        d = math.exp(v) - 0.5 * math.sqrt(L / v) + extra
        vn = v - fv / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo < vn < hi:
            vn = 0.5 * (lo + hi)
        if vn == v:
            break
        v = vn
        fv = f(v)
    return ImplicitSolution(x, kind, v, fv, it, approx)


def solve_nu(x: float) -> ImplicitSolution:
    """nu(x): e^v = 1 + sqrt(v log x) - v."""
    return _solve(x, "nu")


def solve_omega(x: float) -> ImplicitSolution:
    """omega(x): e^w = 1 + sqrt(w log x)."""
    return _solve(x, "omega")


def nu_omega_gap(x: float) -> float:
    """nu(x) - omega(x), negative and ~ -sqrt(nu / log x)."""
    return solve_nu(x).value - solve_omega(x).value
