import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pintz_forge.errors import DomainError, InvalidParams, NoExclusion
from pintz_forge.extreal import ExtReal, mpf
from pintz_forge.inference import (ExclusionQuery, best_c0, c0_grid, exclusion_check,
                                   exclusion_region_beta, exclusion_region_gamma,
                                   pintz87_bound)

parse = ExtReal.parse


def check(horizon, sqrt_coeff, beta0, gamma0, c0=0.1):
    return exclusion_check(ExclusionQuery(parse(horizon), sqrt_coeff, beta0, parse(gamma0), c0))


def test_exclusion_examples():
    assert check("1e80", 1, 0.99, "1e13").verdict == "Excluded"
    assert check("exp:1e19", 1, 0.51, "exp:1e16").verdict == "Excluded"
    r = check("1e3", 1, 0.51, "14.134725")
    assert r.verdict == "Inconclusive" and not r.excluded


def test_result_fields():
    r = check("1e80", 1, 0.99, "1e13")
    assert r.lower > r.upper and r.margin > 0
    assert r.upper.log10() == pytest.approx(40 + math.log10(2 / 3), abs=1e-9)
    sqrt_coeff = r.to_dict()
    assert sqrt_coeff["verdict"] == "Excluded" and sqrt_coeff["breakdown"]["total"] == r.lower.serialize()


def test_query_validation():
    with pytest.raises(InvalidParams):
        ExclusionQuery(ExtReal(1, 6), 1, 0.5, parse("14"))
    with pytest.raises(InvalidParams):
        ExclusionQuery(parse("1e20"), 0, 0.5, parse("14"))
    with pytest.raises(InvalidParams):
        ExclusionQuery(parse("1e20"), 1, 0.5, parse("14"), c0=0.5)


def test_0571_up_to_1e16_is_weak():
    # d = 0.571 up to 1e16 excludes beta0 = 0.99 only for very small gamma0,
    # below the first zero's height
    assert check("1e16", 0.571, 0.99, "5").excluded
    assert not check("1e16", 0.571, 0.99, "14").excluded
    with pytest.raises(NoExclusion):
        exclusion_region_gamma(parse("1e16"), 0.571, 0.99)


def test_gamma_region_1e80():
    g = exclusion_region_gamma(parse("1e80"), 1, 0.99)
    assert 13 <= g.log10() <= 17
    assert check("1e80", 1, 0.99, g.serialize()).excluded
    above = ExtReal(1, g.lnmag * mpf("1.002"))
    assert not check("1e80", 1, 0.99, above.serialize()).excluded


def test_gamma_region_exp_1e19():
    g = exclusion_region_gamma(parse("exp:1e19"), 1, 0.51)
    assert g.lnmag >= mpf("1e16")


def test_beta_region_examples():
    assert exclusion_region_beta(parse("1e80"), 1, parse("1e13")) <= 0.99
    assert exclusion_region_beta(parse("exp:1e19"), 1, parse("exp:1e16")) <= 0.51


@given(st.floats(min_value=25, max_value=400), st.floats(min_value=0.02, max_value=0.3),
       st.floats(min_value=0.5, max_value=2.0))
@settings(max_examples=8)
def test_beta_boundary_consistency(log10Y, gamma_frac, sqrt_coeff):
    tol = 1e-4
    horizon = ExtReal(1, mpf(repr(log10Y)) * mpf(math.log(10)))
    g = ExtReal(1, horizon.lnmag * mpf(repr(gamma_frac)))
    try:
        b = exclusion_region_beta(horizon, sqrt_coeff, g, tol_abs=tol)
    except NoExclusion:
        return
    assert exclusion_check(ExclusionQuery(horizon, sqrt_coeff, b, g)).excluded
    lower = b - 2 * tol
    if lower > 0.1:
        assert not exclusion_check(ExclusionQuery(horizon, sqrt_coeff, lower, g)).excluded


def test_beta_star_monotone_in_d():
    horizon, g = parse("1e80"), parse("1e13")
    values = [exclusion_region_beta(horizon, sqrt_coeff, g) for sqrt_coeff in (4.0, 1.0, 0.25)]
    assert values[0] >= values[1] >= values[2]


@given(st.floats(min_value=14, max_value=1e30), st.floats(min_value=0.2, max_value=1.0))
@settings(max_examples=40)
def test_verdict_sign_symmetry(g, beta0):
    horizon = parse("1e60")
    a = exclusion_check(ExclusionQuery(horizon, 1, beta0, ExtReal.from_number(g)))
    b = exclusion_check(ExclusionQuery(horizon, 1, beta0, ExtReal.from_number(-g)))
    assert a.verdict == b.verdict and a.margin == b.margin


def test_margin_monotone_on_grids():
    for horizon in (parse("1e20"), parse("1e80"), parse("exp:1e5")):
        logs = np.linspace(math.log(100), float(horizon.lnmag), 12)
        m = [check(horizon.serialize(), 1, 0.75, f"exp:{float(x)!r}").margin for x in logs]
        assert all(b <= a for a, b in zip(m, m[1:]))
        betas = np.linspace(0.2, 1, 17)
        m = [check(horizon.serialize(), 1, float(b), "1e3").margin for b in betas]
        finite = [v for v in m if v != -math.inf]
        assert all(b >= a for a, b in zip(finite, finite[1:]))


def test_asymptotic_slope():
    xs, ys = [], []
    for k in (100, 200, 400, 800):
        horizon = ExtReal(1, mpf(k) * mpf(math.log(10)))
        g = exclusion_region_gamma(horizon, 1, 0.999)
        xs.append(float(horizon.lnmag))
        ys.append(float(g.lnmag))
    slope = np.polyfit(xs, ys, 1)[0]
    assert 0.17 <= slope <= 0.23


def test_best_c0():
    grid = c0_grid(0.99)
    assert len(grid) == 16 and 0.01 < min(grid) < max(grid) < 0.98
    c = best_c0(parse("1e80"), 1, 0.99, parse("1e13"))
    best = check("1e80", 1, 0.99, "1e13", c).margin
    assert best >= check("1e80", 1, 0.99, "1e13", 0.1).margin - 1e-12 or c in grid
    assert best >= max(check("1e80", 1, 0.99, "1e13", x).margin for x in grid) - 1e-12


def test_pintz87():
    v = pintz87_bound(parse("1e80"), 0.99, parse("1e13"))
    assert v.log10() == pytest.approx(14.2, abs=1e-12)
    assert pintz87_bound(parse("1e10"), 0.99, parse("1e13")) is None
    with pytest.raises(DomainError):
        pintz87_bound(parse("1e80"), 0.5, parse("1e13"))
    with pytest.raises(DomainError):
        pintz87_bound(parse("1e80"), 0.6, ExtReal.zero())


def test_theorem_sharper_than_pintz87_for_large_gamma():
    # theorem decays like gamma^-2.5, the comparison bound like gamma^-5
    horizon = parse("1e200")
    ratios = []
    for lg in (20, 30):
        g = ExtReal(1, mpf(lg) * mpf(math.log(10)))
        ours = check("1e200", 1, 0.9, g.serialize()).lower
        theirs = pintz87_bound(horizon, 0.9, g)
        ratios.append(float(ours.lnmag - theirs.lnmag))
    assert ratios[1] > ratios[0] > 0
