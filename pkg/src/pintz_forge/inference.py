"""Zero-exclusion verdicts for simple zeta zeros from |M(x)| <= d sqrt(x).

A simple zero beta0 + i gamma0 forces the mean of |M| over [1, Y] above the
theorem's lower bound; a verified pointwise bound caps it at (2d/3) sqrt(Y).
When the lower bound exceeds the cap, no such zero exists.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, InvalidParams, NoExclusion
from .extreal import ExtReal, ctx, mpf, round_up
from .mobius import pointwise_upper_mean
from .theorem import BoundBreakdown, TheoremParams, lower_bound
from .zeta_bounds import f_at_zero, growth_bound_F, growth_bound_G

log = logging.getLogger(__name__)

DEFAULT_C0 = 0.1
MAX_BISECT = 200
GAMMA_FLOOR = 14.0  # below the first zero nothing is claimed


def zeta_mertens_params(beta0: float, gamma0: ExtReal, c0: float = DEFAULT_C0) -> TheoremParams:
    """Theorem inputs for A = M, F(s) = s - 1, G(s) = s(s-1)zeta(s)."""
    return TheoremParams(pointwise_coeff=1.0, pointwise_power=1.0, numerator_growth=growth_bound_F(), denominator_growth=growth_bound_G(),
                         beta0=beta0, gamma0=gamma0, c0=c0,
                         F_rho0_abs=f_at_zero(beta0, gamma0))


@dataclass(frozen=True)
class ExclusionQuery:
    horizon: ExtReal
    sqrt_coeff: float
    beta0: float
    gamma0: ExtReal
    c0: float = DEFAULT_C0

    def __post_init__(self):
        if self.horizon.sign != 1 or not self.horizon.lnmag > 6:
            raise InvalidParams("Y must exceed e^6")
        if not self.sqrt_coeff > 0:
            raise InvalidParams("d must be positive")
        if not 0 < self.c0 < self.beta0 <= 1:
            raise InvalidParams("need 0 < c0 < beta0 <= 1")


@dataclass(frozen=True)
class ExclusionResult:
    verdict: str  # "Excluded" or "Inconclusive"
    lower: ExtReal
    upper: ExtReal
    breakdown: BoundBreakdown

    @property
    def excluded(self) -> bool:
        return self.verdict == "Excluded"

    @property
    def margin(self) -> float:
        """ln(lower) - ln(upper); -inf when the lower bound is not positive."""
        if self.lower.sign <= 0:
            return -math.inf
        return float(self.lower.lnmag - self.upper.lnmag)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "lower": self.lower.serialize(),
            "upper": self.upper.serialize(),
            "margin": self.margin,
            "breakdown": self.breakdown.to_dict(),
        }


def exclusion_check(query: ExclusionQuery) -> ExclusionResult:
    p = zeta_mertens_params(query.beta0, query.gamma0, query.c0)
    b = lower_bound(query.horizon, p)
    upper = round_up(pointwise_upper_mean(query.sqrt_coeff, query.horizon))
    verdict = "Excluded" if b.total > upper else "Inconclusive"
    return ExclusionResult(verdict, b.total, upper, b)


def _margin(horizon, sqrt_coeff, beta0, gamma0, c0) -> float:
    return exclusion_check(ExclusionQuery(horizon, sqrt_coeff, beta0, gamma0, c0)).margin


def c0_grid(beta0: float, points: int = 16) -> list[float]:
    """Midpoints of an even grid on (0.01, beta0 - 0.01)."""
    lo, hi = 0.01, beta0 - 0.01
    if hi <= lo:
        return [min(DEFAULT_C0, beta0 / 2)]
    return [lo + (hi - lo) * (k + 0.5) / points for k in range(points)]


def best_c0(horizon: ExtReal, sqrt_coeff: float, beta0: float, gamma0: ExtReal, points: int = 16) -> float:
    """c0 maximising the margin over :func:`c0_grid`."""
    return max(c0_grid(beta0, points), key=lambda c: _margin(horizon, sqrt_coeff, beta0, gamma0, c))


def _nonincreasing(values) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def exclusion_region_gamma(horizon: ExtReal, sqrt_coeff: float, beta0: float, c0: float = DEFAULT_C0,
                           tol_rel: float = 1e-3) -> ExtReal:
    """Largest gamma* with every simple zero at (beta0, gamma <= gamma*) excluded.

    Bisects on log gamma over [log 14, log Y] once a 64-point grid confirms
    the margin is nonincreasing; otherwise returns the largest grid point
    whose whole prefix is excluded.
    """
    if not 0 < tol_rel <= 0.1:
        raise InvalidParams("tol_rel must lie in (0, 0.1]")

    def m(lng) -> float:
        return _margin(horizon, sqrt_coeff, beta0, ExtReal(1, lng), c0)

    lo = ctx.log(GAMMA_FLOOR)
    top = horizon.lnmag
    if m(lo) <= 0:
        raise NoExclusion(f"no exclusion even at gamma = {GAMMA_FLOOR}")
    grid = [lo + (top - lo) * k / 63 for k in range(64)]
    margins = [m(g) for g in grid]
    excluded = [v > 0 for v in margins]
    if not _nonincreasing(margins):
        log.warning("margin not monotone in gamma; falling back to grid scan")
        k = excluded.index(False) if False in excluded else len(grid)
        return ExtReal(1, grid[k - 1])
    if all(excluded):
        return ExtReal(1, top)
    k = excluded.index(False)
    a, b = grid[k - 1], grid[k]
    for _ in range(MAX_BISECT):
        if b - a <= tol_rel * abs(a):
            break
        mid = (a + b) / 2
        if m(mid) > 0:
            a = mid
        else:
            b = mid
    return ExtReal(1, a)


def exclusion_region_beta(horizon: ExtReal, sqrt_coeff: float, gamma0: ExtReal, c0: float = DEFAULT_C0,
                          tol_abs: float = 1e-4) -> float:
    """Smallest beta* with every simple zero at (beta >= beta*, gamma0) excluded.

    Bisects on beta0 in (c0, 1] once a 32-point grid confirms the margin is
    nondecreasing; otherwise returns the smallest grid point whose whole
    suffix is excluded.
    """
    if not 0 < tol_abs <= 0.01:
        raise InvalidParams("tol_abs must lie in (0, 0.01]")

    def m(b) -> float:
        return _margin(horizon, sqrt_coeff, b, gamma0, c0)

    if m(1.0) <= 0:
        raise NoExclusion("no exclusion even at beta0 = 1")
    grid = [c0 + (1 - c0) * k / 32 for k in range(1, 33)]
    grid[-1] = 1.0
    margins = [m(b) for b in grid]
    excluded = [v > 0 for v in margins]
    if not all(x <= y for x, y in zip(margins, margins[1:])):
        log.warning("margin not monotone in beta; falling back to grid scan")
        k = len(grid)
        while k > 0 and excluded[k - 1]:
            k -= 1
        return grid[k]
    k = excluded.index(True)
    a = grid[k - 1] if k > 0 else c0  # c0 itself is never evaluated
    b = grid[k]
    for _ in range(MAX_BISECT):
        if b - a <= tol_abs:
            break
        mid = (a + b) / 2
        if m(mid) > 0:
            b = mid
        else:
            a = mid
    return b


def pintz87_bound(horizon: ExtReal, beta0: float, gamma0: ExtReal) -> Optional[ExtReal]:
    """Y^beta0 / |gamma0|^5 when Y >= |gamma0|^5, else None.

    The comparison bound for zeros off the critical line (beta0 > 1/2), with
    no simplicity assumption.
    """
    if not beta0 > 0.5:
        raise DomainError("needs beta0 > 1/2")
    g = abs(gamma0)
    if g.sign == 0:
        raise DomainError("needs gamma0 != 0")
    g5 = g ** 5
    if horizon < g5:
        return None
    return horizon ** mpf(repr(float(beta0))) / g5
