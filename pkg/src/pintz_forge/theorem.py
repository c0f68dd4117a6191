"""Explicit lower bound for the mean of |A(x)| from a simple zero of G.

Given |A(x)| <= c_A x^C, a Mellin transform F/G with growth envelopes for F
and G, and a simple zero rho0 = beta0 + i gamma0 of G, :func:`lower_bound`
evaluates

    (1/Y) int_1^Y |A(x)| dx
        >= ((|F(rho0)| Yt^beta0 / (beta0+2)^(B_G+2) - E(Yt))
            / (e^(C+2) (1+|gamma0|)^B_G D2))
           - c_A D1(log Yt) e^((C+1)(C+2)) / ((log Yt - C - 1) D2)

with Yt = Y e^-(C+2), valid for Y > e^(2C+4). All large quantities are
carried as :class:`~pintz_forge.extreal.ExtReal`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidParams, QuadratureFailure, TailDivergence, YTooSmall
from .extreal import ExtReal, ctx, mpf, round_down, round_up
from .zeta_bounds import GrowthBound

QUAD_TOL = 1e-12
GAUSS_CUTOFF = 1e-30
MAX_INTERVALS = 200_000


@dataclass(frozen=True)
class TheoremParams:
    pointwise_coeff: float
    pointwise_power: float
    numerator_growth: GrowthBound
    denominator_growth: GrowthBound
    beta0: float
    gamma0: ExtReal
    c0: float
    F_rho0_abs: ExtReal

    def __post_init__(self):
        if not (self.pointwise_coeff > 0 and self.pointwise_power > 0):
            raise InvalidParams("need c_A > 0 and C > 0")
        if not 0 < self.c0 < self.beta0 <= 1:
            raise InvalidParams(f"need 0 < c0 < beta0 <= 1, got c0={self.c0}, beta0={self.beta0}")
        if not (self.numerator_growth.coeff > 0 and self.denominator_growth.coeff > 0 and self.numerator_growth.power > 0 and self.denominator_growth.power > 0):
            raise InvalidParams("growth constants must be positive")
        if self.denominator_growth.power - self.numerator_growth.power < 0:
            raise InvalidParams("B_G >= B_F is required by the tail bound")
        if self.F_rho0_abs.sign <= 0:
            raise InvalidParams("|F(rho0)| must be positive (F(rho0) != 0)")


@dataclass(frozen=True)
class BoundBreakdown:
    Ytilde: ExtReal
    main_term: ExtReal
    calE: ExtReal
    tail_term: ExtReal
    scale: ExtReal
    total: ExtReal
    quadrature_abs_error: float
    d1: float
    d2: float

    def to_dict(self) -> dict:
        return {
            "Ytilde": self.Ytilde.serialize(),
            "main_term": self.main_term.serialize(),
            "calE": self.calE.serialize(),
            "tail_term": self.tail_term.serialize(),
            "scale": self.scale.serialize(),
            "total": self.total.serialize(),
            "quadrature_abs_error": self.quadrature_abs_error,
            "d1": self.d1,
            "d2": self.d2,
        }


def d1(lam: float, c_G: float, B_G: float) -> float:
    """c_G/(pi e) * (1/2 + 1/((y-2)(y+1)^(B_G+2))), for y > 2."""
    lam = float(lam)
    if not lam > 2:
        raise InvalidParams(f"d1 needs an argument > 2, got {lam}")
    small = math.exp(-math.log(lam - 2) - (B_G + 2) * math.log(lam + 1))
    return c_G / (math.pi * math.e) * (0.5 + small)


def d2(beta0: float, c_G: float, B_G: float) -> float:
    """c_G e/pi * ((1 - 2^(-B_G-1/2))/(B_G+1) + 1/(1+beta0))."""
    if not 0 < beta0 <= 1:
        raise InvalidParams("beta0 must lie in (0, 1]")
    return c_G * math.e / math.pi * ((1 - 2 ** (-B_G - 0.5)) / (B_G + 1) + 1 / (1 + beta0))


# ---------------------------------------------------------------------------
# the error integral

def integrand(height: float, lam: float, beta0: float, c0: float, B_F: float, B_G: float) -> float:
    a = 2 + beta0 - c0
    return (math.exp(-height * height / lam) * max(1.0, abs(height) ** B_F)
            / (math.hypot(c0, height) * math.hypot(a, height) ** (B_G + 2)))


def tail_bound(cutoff: float, B_F: float, B_G: float) -> float:
    """Upper bound for the integrand's integral over [T, inf), T >= max(1, 2+beta0).

    Drops the Gaussian and uses |c0+it|, |2+beta0-c0+it| >= t, leaving
    t^(B_F-B_G-3), whose integral is T^-k / k with k = B_G + 2 - B_F.
    """
    k = B_G + 2 - B_F
    if k <= 1:
        raise TailDivergence(f"B_G + 2 - B_F = {k} <= 1: the error integral diverges")
    return cutoff ** -k / k


def adaptive_simpson(f, a: float, b: float, tol: float,
                     max_intervals: int = MAX_INTERVALS) -> tuple[float, float]:
    """Integral of f over [a, b] with an absolute error target ``tol``.

    Iterative, depth-first, left to right, so the summation order (and the
    result) is deterministic. Returns (value, error estimate).
    """
    def simpson(fa, fm, fb, h):
        return h / 6 * (fa + 4 * fm + fb)

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol)]
    total = err = 0.0
    used = 0
    while stack:
        a, b, fa, fm, fb, whole, eps = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        used += 1
        if abs(delta) <= 15 * eps or b - a < 1e-12 * max(1.0, abs(a)):
            if abs(delta) > 15 * eps:
                raise QuadratureFailure(f"interval [{a}, {b}] cannot meet tolerance {eps}")
            total += left + right + delta / 15
            err += abs(delta) / 15
            continue
        if used > max_intervals:
            raise QuadratureFailure(f"tolerance {tol} not reached in {max_intervals} subdivisions")
        # right pushed first so the left half is summed first
        stack.append((m, b, fm, frm, fb, right, eps / 2))
        stack.append((a, m, fa, flm, fm, left, eps / 2))
    return total, err


@dataclass(frozen=True)
class IntegralResult:
    value: float  # quadrature on [0, T] + tail, for the half line
    quad: float
    abs_error: float
    tail: float
    cutoff: float


def error_integral(lam: float, beta0: float, c0: float, B_F: float, B_G: float,
                   tol: float = QUAD_TOL, cutoff: float | None = None) -> IntegralResult:
    """Upper bound for the integral over t >= 0 in the definition of E."""
    user_T = cutoff
    f = lambda height: integrand(height, lam, beta0, c0, B_F, B_G)  # noqa: E731
    a = 2 + beta0 - c0
    if cutoff is not None and cutoff < max(1.0, a):
        raise InvalidParams(f"truncation point T={cutoff} must be >= max(1, 2+beta0-c0)")
    first = 8.0 if cutoff is None else cutoff
    # panel breaks at the scale of each factor; almost all mass sits below 8
    pts = sorted({0.0, c0, 1.0, a} | {first})
    pts = [x for x in pts if x <= first]
    panels = list(zip(pts, pts[1:]))
    rough = sum(adaptive_simpson(f, lo, hi, 1e-6, 10_000)[0] for lo, hi in panels)
    eps = tol * abs(rough) / len(panels)

    val = err = 0.0
    for lo, hi in panels:
        v, e = adaptive_simpson(f, lo, hi, eps)
        val += v
        err += e
    cutoff = first
    tail = tail_bound(cutoff, B_F, B_G)
    if user_T is None:
        # double T until the Gaussian is negligible or the power tail is tiny
        while not (-cutoff * cutoff / lam < math.log(GAUSS_CUTOFF) or tail < tol * val):
            if cutoff > 2 ** 40:
                raise QuadratureFailure("no truncation point found")
            v, e = adaptive_simpson(f, cutoff, 2 * cutoff, eps)
            val += v
            err += e
            cutoff *= 2
            tail = tail_bound(cutoff, B_F, B_G)
    return IntegralResult(val + tail, val, err, tail, cutoff)


@lru_cache(maxsize=4096)
def _cached_integral(lam: float, beta0: float, c0: float, B_F: float, B_G: float,
                     tol: float, cutoff: float | None) -> IntegralResult:
    return error_integral(lam, beta0, c0, B_F, B_G, tol, cutoff)


def calE(log_y, p: TheoremParams, tol: float = QUAD_TOL,
         cutoff: float | None = None) -> tuple[ExtReal, float]:
    """Upper bound for E(y) given log y, and the quadrature error bound.

    The even integrand is integrated as twice the half line; the returned
    value includes the analytic tail and the quadrature error estimate.
    """
    lam = mpf(log_y)
    if lam <= p.pointwise_power + 2:
        raise YTooSmall(f"the error term needs log y > C + 2, got {ctx.nstr(lam, 10)}")
    if p.denominator_growth.power + 2 - p.numerator_growth.power <= 1:
        raise TailDivergence("B_G + 2 - B_F must exceed 1")
    r = _cached_integral(float(lam), p.beta0, p.c0, p.numerator_growth.power, p.denominator_growth.power, tol, cutoff)
    integral = 2 * (r.value + r.abs_error)
    b = mpf(repr(p.beta0)) - mpf(repr(p.c0))
    log_val = (ctx.log(mpf(repr(p.numerator_growth.coeff))) + b - ctx.log(2 * ctx.pi) + 4 / lam
               + b * lam + ctx.log(mpf(integral)))
    return ExtReal(1, log_val), 2 * r.abs_error


def lower_bound(horizon: ExtReal, p: TheoremParams, tol: float = QUAD_TOL,
                extra_log_factor: bool = False) -> BoundBreakdown:
    """Evaluate the theorem at Y.

    ``extra_log_factor`` multiplies the tail term by log Yt, the alternative
    reading of the printed statement, for sensitivity checks only.
    """
    if horizon.sign != 1:
        raise YTooSmall("Y must be positive")
    pointwise_power = mpf(repr(float(p.pointwise_power)))
    lnY = horizon.lnmag
    if not lnY > 2 * pointwise_power + 4:
        raise YTooSmall(f"need Y > e^(2C+4) = e^{ctx.nstr(2 * pointwise_power + 4, 10)}")
    lam = lnY - (pointwise_power + 2)
    Yt = ExtReal(1, lam)
    beta0 = mpf(repr(p.beta0))
    B_G = mpf(repr(p.denominator_growth.power))

    main = p.F_rho0_abs * Yt ** beta0 / ExtReal.from_number(beta0 + 2) ** (B_G + 2)
    main = round_down(main)
    err_term, qerr = calE(lam, p, tol)
    err_term = round_up(err_term)

    D1 = d1(float(lam), p.denominator_growth.coeff, p.denominator_growth.power)
    D2 = d2(p.beta0, p.denominator_growth.coeff, p.denominator_growth.power)
    scale = (ExtReal(1, pointwise_power + 2) * (1 + abs(p.gamma0)) ** B_G * D2)
    tail = (ExtReal.from_number(p.pointwise_coeff) * D1 * ExtReal(1, (pointwise_power + 1) * (pointwise_power + 2))
            / (ExtReal.from_number(lam - pointwise_power - 1) * D2))
    if extra_log_factor:
        tail = tail * ExtReal.from_number(lam)
    tail = round_up(tail)
    total = (main - err_term) / scale - tail
    return BoundBreakdown(Yt, main, err_term, tail, scale, total, qerr, D1, D2)


def mean_lower_constant(Y0: ExtReal, p: TheoremParams, tol: float = QUAD_TOL) -> float:
    """c with lower_bound(Y).total >= c Y^beta0 for Y >= Y0.

    c is total(Y0)/Y0^beta0 once sampling confirms the ratio does not dip
    over Y0 x {2, 10, 1e2, 1e6}; otherwise the minimum over a geometric grid
    is returned with a warning about grid resolution.
    """
    beta0 = mpf(repr(p.beta0))

    def ratio(lnY) -> float:
        b = lower_bound(ExtReal(1, lnY), p, tol)
        return (b.total / ExtReal(1, beta0 * lnY)).to_double()

    ln0 = Y0.lnmag
    c0 = ratio(ln0)
    samples = [ratio(ln0 + ctx.log(k)) for k in (2, 10, 100, 10 ** 6)]
    if all(s >= c0 for s in samples):
        return c0
    grid = [ratio(ln0 + ctx.log(10) * 6 * k / 256) for k in range(257)]
    warnings.warn("total/Y^beta0 is not monotone in Y; constant is a grid minimum "
                  "(resolution 10^(6/256) in Y)", RuntimeWarning, stacklevel=2)
    return min(grid)


def cache_info():
    return _cached_integral.cache_info()
