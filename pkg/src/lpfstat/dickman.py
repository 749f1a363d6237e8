"""Dickman's rho and its saddle-point companions.

rho solves the delay equation u rho'(u) = -rho(u-1) with rho = 1 on [0,1],
so rho(u) = 1 - log u on [1,2].  The table below stores one Taylor
expansion per unit interval about its midpoint; since the expansions of
rho(u) and rho(u-1) share the local variable t = u - (k + 1/2), each new
interval follows from the previous one by a power-series division by
(m + t) and a term-wise integration.

rho(u) ~ u^{-u} dies far below double range (underflow near u = 120), so
coefficients are stored against a per-interval log scale and every routine
has a log-valued form; the plain accessors are safe for u <= 100.

Stepping interval to interval is badly conditioned: the delay equation also
admits slowly varying solutions ~ C/u, so any absolute error picked up early
rides along essentially undamped while rho itself collapses by a factor
e^{-xi} per interval.  The table is therefore built in extended precision
with a series degree high enough that the truncated tail of the *first*
intervals (~ 3^-degree in absolute terms) stays below the target accuracy
at the far end; only the finished coefficients are rounded to doubles.

The saddle point xi(u) is the positive root of e^xi = 1 + u xi, and the
de Bruijn-style expansion

    rho(u) ~ sqrt(xi'(u)/2 pi) exp(gamma - u xi(u) + I(xi(u))),
    I(t) = integral_0^t (e^s - 1)/s ds,

takes over past the table, with the order-1 correction factor (1 - 1/(12u)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import AccuracyError, ConfigError, DomainError

EULER_GAMMA = 0.5772156649015329

_TAIL_TOL = 1e-12  # construction refuses tables whose truncation tail is worse
_LOG_TINY = -700.0  # below this, exp() underflows; force the log-valued API


def exp_integral(t: float) -> float:
    """I(t) = integral_0^t (e^s - 1)/s ds = sum_{k>=1} t^k / (k k!)."""
    if not 0.0 <= t <= 500.0:
        raise DomainError(f"exp_integral needs 0 <= t <= 500, got {t}")
    if t == 0.0:
        return 0.0
    total = 0.0
    term = 1.0  # t^k / k!
    k = 0
    while True:
        k += 1
        term *= t / k
        contrib = term / k
        total += contrib
        if k > t and contrib < 1e-16 * total:
            return total


@dataclass(frozen=True)
class XiValue:
    """Root of e^xi = 1 + u xi together with solve diagnostics."""

    u: float
    value: float
    residual: float
    iterations: int


def xi(u: float) -> XiValue:
    """Unique positive saddle point for u > 1 (safeguarded Newton)."""
    if not u > 1.0:
        raise DomainError(f"xi(u) requires u > 1, got {u}")
    # Quadratic truncation of the functional equation, good near xi = 0.
    small = 3.0 * (math.sqrt(0.25 + 2.0 * (u - 1.0) / 3.0) - 0.5)
    if u - 1.0 < 1e-9:
        return XiValue(u, small, math.exp(small) - 1.0 - u * small, 0)
    lo = max(1e-9, math.log(u))
    hi = 2.0 * math.log(u + 2.0)
    x = math.log(u * math.log(u + 2.0) + 1.0) if u >= math.e else small
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    fx = math.exp(x) - 1.0 - u * x
    it = 0
    while abs(fx) > 1e-14 * (1.0 + u * abs(x)) and it < 60:
        it += 1
        if fx < 0.0:
            lo = x
        else:
            hi = x
        d = math.exp(x) - u
        xn = x - fx / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        if xn == x:
            break
        x = xn
        fx = math.exp(x) - 1.0 - u * x
    return XiValue(u, x, fx, it)


def xi_prime(u: float) -> float:
    """d xi / du = xi / (1 + u xi - u), by implicit differentiation."""
    x = xi(u).value
    return x / (1.0 + u * x - u)


def log_rho_asymptotic(u: float, order: int = 1) -> float:
    """log of the saddle-point approximation to rho(u).

    order 0 is the bare expansion; order 1 multiplies by (1 - 1/(12u)),
    the only correction coefficient carried here.
    """
    if u < 5.0:
        raise DomainError(f"asymptotic form needs u >= 5, got {u}")
    if order not in (0, 1):
        raise ConfigError(f"order must be 0 or 1, got {order}")
    x = xi(u).value
    xp = x / (1.0 + u * x - u)
    out = 0.5 * math.log(xp / (2.0 * math.pi)) + EULER_GAMMA - u * x + exp_integral(x)
    if order == 1:
        out += math.log1p(-1.0 / (12.0 * u))
    return out


def rho_asymptotic(u: float, order: int = 1) -> float:
    """Plain-double saddle-point value; raises where it would underflow."""
    lv = log_rho_asymptotic(u, order)
    if lv < _LOG_TINY:
        raise DomainError(f"rho({u}) underflows a double; use log_rho_asymptotic")
    return math.exp(lv)


def _horner(coef: list[float], t: float) -> float:
    acc = coef[-1]
    for j in range(len(coef) - 2, -1, -1):
        acc = acc * t + coef[j]
    return acc


class RhoTable:
    """Piecewise Taylor model of rho on [0, max_u].

    Interval k spans [k, k+1); its polynomial lives in t = u - (k + 1/2),
    is normalised to value 1 at the midpoint, and is scaled back by
    exp(log_scale[k]).  log_scaled is always True: the representation
    never stores raw values, so underflow cannot corrupt the table.
    """

    log_scaled = True

    def __init__(self, max_u: int, degree: int, log_scale: list[float], coeffs: list[list[float]], tail: float):
        self.max_u = max_u
        self.degree = degree
        self.log_scale = log_scale
        self.coeffs = coeffs
        self.worst_tail = tail  # estimated relative accuracy floor at u = max_u

    def _piece(self, u: float) -> tuple[int, float]:
        k = min(int(u), self.max_u - 1)
        return k, u - (k + 0.5)

    def log_rho(self, u: float) -> float:
        """log rho(u); delegates to the order-1 asymptotic past max_u."""
        if u < 0.0:
            raise DomainError(f"rho is defined for u >= 0, got {u}")
        if u <= 1.0:
            return 0.0
        if u > self.max_u:
            return log_rho_asymptotic(u, order=1)
        k, t = self._piece(u)
        return self.log_scale[k] + math.log(_horner(self.coeffs[k], t))

    def rho(self, u: float) -> float:
        """Plain-double rho(u) (valid while representable, so u <= 100 always)."""
        if u < 0.0:
            raise DomainError(f"rho is defined for u >= 0, got {u}")
        if u <= 1.0:
            return 1.0
        if u > self.max_u:
            return rho_asymptotic(u, order=1)
        k, t = self._piece(u)
        ls = self.log_scale[k]
        if ls < _LOG_TINY:
            raise DomainError(f"rho({u}) underflows a double; use log_rho")
        return math.exp(ls) * _horner(self.coeffs[k], t)

    def integrate(self, a: float, b: float) -> float:
        """integral_a^b rho dt, Gauss-Legendre per piece (node count matched
        to the stored degree, so exact up to roundoff)."""
        if not 0.0 <= a <= b <= self.max_u:
            raise DomainError(f"integrate needs 0 <= a <= b <= {self.max_u}")
        nodes, weights = np.polynomial.legendre.leggauss(self.degree // 2 + 2)
        total = 0.0
        lo = a
        while lo < b:
            hi = min(b, math.floor(lo) + 1.0)
            k = min(int(lo), self.max_u - 1)
            ls = self.log_scale[k]
            if ls >= _LOG_TINY:  # pieces below double range contribute < 1e-300
                mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
                t = mid + half * nodes - (k + 0.5)
                vals = np.polynomial.polynomial.polyval(t, np.asarray(self.coeffs[k]))
                total += half * math.exp(ls) * float(weights @ vals)
            lo = hi
        return total


def build_rho_table(max_u: int = 64, degree: int = 330) -> RhoTable:
    """Construct the piecewise table in extended precision.

    A truncated tail at interval k persists as an *absolute* error for every
    later interval, so after converting to doubles the builder compares the
    worst injected tail, max_k scale_k * tail_k, against the scale at the far
    end and raises AccuracyError (with the achieved floor) if the 1e-12
    contract fails there.  The default degree holds a ~1e-31 floor at u=64.
    """
    if not 4 <= max_u <= 256:
        raise ConfigError(f"max_u must lie in [4, 256], got {max_u}")
    if degree < 20:
        raise ConfigError(f"degree must be >= 20, got {degree}")
    ncoef = degree + 1
    with mpmath.workdps(60 + 3 * degree // 4):
        one = mpmath.mpf(1)
        half = one / 2
        pieces = [[one] + [mpmath.mpf(0)] * degree]  # [0,1): rho = 1
        # [1,2): 1 - log(3/2 + t) = (1 - log 3/2) + sum_j (-1)^j t^j / (j (3/2)^j)
        c1 = [1 - mpmath.log(3 * half)]
        for j in range(1, ncoef):
            c1.append((-one) ** j / (j * (3 * half) ** j))
        pieces.append(c1)
        for k in range(2, max_u):
            m = k + half
            d = pieces[k - 1]
            # g = (previous polynomial) / (m + t), truncated to degree-1
            g = [d[0] / m]
            for i in range(1, degree):
                g.append((d[i] - g[i - 1]) / m)
            # integrate rho' = -g term by term; constant fixed by continuity at u=k
            e = [mpmath.mpf(0)] * ncoef
            for j in range(1, ncoef):
                e[j] = -g[j - 1] / j
            e[0] = mpmath.polyval(d[::-1], half) - mpmath.polyval(e[::-1], -half)
            pieces.append(e)
        log_scale = [0.0]
        coeffs = [[1.0] + [0.0] * degree]
        log_inject = -math.inf
        for k in range(1, max_u):
            c0 = pieces[k][0]
            log_scale.append(float(mpmath.log(c0)))
            coeffs.append([float(cj / c0) for cj in pieces[k]])
            tail = abs(coeffs[k][degree]) * 0.5**degree + abs(coeffs[k][degree - 1]) * 0.5 ** (degree - 1)
            if tail > 0.0:
                log_inject = max(log_inject, log_scale[k] + math.log(tail))
    floor = math.exp(min(log_inject - log_scale[max_u - 1], 700.0))
    if floor > _TAIL_TOL:
        raise AccuracyError(f"degree {degree} cannot hold the table contract out to u={max_u}", floor)
    return RhoTable(max_u, degree, log_scale, coeffs, floor)


def rho_shift_ratio(u: float, v: float) -> float:
    """Second-order shift estimate around the saddle point.

    For general v this approximates rho(u+v) e^{v xi(u)} / rho(u) as
    1 - (v/2u)(1 + v xi/(xi-1) + 1/(xi-1)^2); the v = -1 case returns the
    absorbed form rho(u-1)/rho(u) ~ u xi + 1/2 + 1/(2 (xi-1)^2).
    """
    if u < 4.0:
        raise DomainError(f"shift estimate needs u >= 4, got {u}")
    if abs(v) > u / 2.0:
        raise DomainError(f"shift |v| <= u/2 required, got v={v}")
    x = xi(u).value
    if v == -1.0:
        return u * x + 0.5 + 0.5 / (x - 1.0) ** 2
    return 1.0 - (v / (2.0 * u)) * (1.0 + v * x / (x - 1.0) + 1.0 / (x - 1.0) ** 2)


def rho_derivative(u: float, table: RhoTable) -> float:
    """rho'(u): exactly -rho(u-1)/u inside the table, saddle form beyond."""
    if not u > 1.0:
        raise DomainError(f"rho' computed for u > 1 only, got {u}")
    if u <= table.max_u:
        return -table.rho(u - 1.0) / u
    x = xi(u).value
    slope = x + (0.5 / u) * (1.0 + 1.0 / (x - 1.0) ** 2)
    return -rho_asymptotic(u, order=1) * slope
