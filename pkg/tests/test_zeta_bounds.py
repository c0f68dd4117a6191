import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from pintz_forge.errors import DomainError
from pintz_forge.extreal import ExtReal, mpf
from pintz_forge.zeta_bounds import (GrowthBound, f_at_zero, g_abs, growth_bound_F,
                                     growth_bound_G, log_gamma, verify_lemma_chain, zeta_spot)


def test_growth_constants():
    numerator_growth, denominator_growth = growth_bound_F(), growth_bound_G()
    assert numerator_growth.coeff == pytest.approx(1.41421356, abs=1e-8) and numerator_growth.power == 1 and numerator_growth.sigma_min == 0
    assert (denominator_growth.coeff, denominator_growth.power, denominator_growth.sigma_min) == (13.38, 3.5, -1)
    with pytest.raises(DomainError):
        GrowthBound(0, 1, 0)


def test_envelope_examples():
    numerator_growth, denominator_growth = growth_bound_F(), growth_bound_G()
    assert abs(1 - 1) <= numerator_growth.envelope(1)
    assert 2 <= numerator_growth.envelope(3) == pytest.approx(math.sqrt(2) * math.e ** 3)
    assert 2 * math.pi ** 2 / 6 <= denominator_growth.envelope(2) == pytest.approx(13.38 * math.e ** 2)
    assert g_abs(0) == 0 <= denominator_growth.envelope(0)


def test_lemma_chain_all_pass():
    r = verify_lemma_chain()
    assert r.passed
    assert all(c.slack > 0 for c in r.checks)


def test_lemma_chain_values():
    r = verify_lemma_chain()
    # independent direct evaluation
    assert r["(c) 4/(2 pi)^(1/4) <= 2.53"].lhs == pytest.approx(2.52648, abs=1e-5)
    d = r["(d) 2.53 * 2^(9/8) <= 5.52"]
    assert d.lhs == pytest.approx(float(mpmath.mpf("2.53") * mpmath.mpf(2) ** 1.125), rel=1e-14)
    assert d.slack == pytest.approx(0.002, abs=5e-4)
    f = r["(f) 5.52 (7/(2e))^(7/2) <= 13.38"]
    assert f.lhs == pytest.approx(float(5.52 * (7 / (2 * mpmath.e)) ** 3.5), rel=1e-14)
    # direct evaluation gives 13.3705, slack 0.0095
    assert f.slack == pytest.approx(0.009534, abs=1e-5)
    b = r["(b) sup 0.595 t^(1/6) log t / (2.53 t^(1/4)), 3<=t<=200"]
    assert b.lhs == pytest.approx(0.595 * 200 ** (1 / 6) * math.log(200) / (2.53 * 200 ** 0.25))


def test_report_dict():
    d = verify_lemma_chain().to_dict()
    assert d["passed"] is True
    assert {"label", "lhs", "rhs", "slack", "passed"} <= set(d["checks"][0])
    with pytest.raises(KeyError):
        verify_lemma_chain()["(z)"]


def test_f_at_zero():
    assert f_at_zero(1, ExtReal.zero()).sign == 0
    assert f_at_zero(0.5, ExtReal.from_number(14.134725)).to_double() == pytest.approx(
        math.sqrt(0.25 + 14.134725 ** 2), rel=1e-14)
    big = f_at_zero(0.51, ExtReal.parse("exp:1e16"))
    assert abs(big.lnmag - mpf("1e16")) < mpf("1e-20")


@given(st.floats(min_value=1e-6, max_value=1.0))
def test_f_at_zero_on_real_axis(beta0):
    assert f_at_zero(beta0, ExtReal.zero()).to_double() == pytest.approx(1 - beta0, rel=1e-14)


def test_zeta_spot_examples():
    assert zeta_spot(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-13)
    assert zeta_spot(0.5).real == pytest.approx(-1.4603545088, abs=1e-10)
    assert abs(zeta_spot(complex(0.5, 14.134725))) < 1e-4


@pytest.mark.parametrize("point", [complex(0.3, 7), complex(3, -40), complex(0.9, 99),
                               complex(10, 0), complex(0.01, 0.5)])
def test_zeta_spot_vs_mpmath(point):
    ref = complex(mpmath.zeta(point))
    assert abs(zeta_spot(point) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_zeta_spot_domain():
    for point in (1, complex(0, 3), complex(11, 0), complex(1, 200)):
        with pytest.raises(DomainError):
            zeta_spot(point)
    # 1 - 2^(1-s) vanishes at s = 1 + 2 pi i k / log 2
    with pytest.raises(DomainError):
        zeta_spot(complex(1, 2 * math.pi / math.log(2)))


@pytest.mark.parametrize("z", [complex(0.5, 0), complex(3.2, -1), complex(-0.5, 25),
                               complex(1, -25), complex(0.25, 0.1)])
def test_log_gamma_vs_mpmath(z):
    assert abs(complex(mpmath.exp(mpmath.loggamma(z))) - complex(math.e ** log_gamma(z))
               ) <= 1e-12 * abs(complex(mpmath.gamma(z)))


def test_g_abs_matches_mpmath_including_reflection():
    for point in (complex(-1, 20), complex(-0.5, 5), complex(0.2, 1), complex(2, 50)):
        ref = abs(complex(point * (point - 1) * mpmath.zeta(point)))
        assert g_abs(point) == pytest.approx(ref, rel=1e-9)


def test_sampled_envelope_of_G():
    denominator_growth = growth_bound_G()
    for sigma in (-1, -0.5, 0, 0.5, 1, 2):
        for t in (0, 1, 5, 20, 50):
            point = complex(sigma, t)
            assert g_abs(point) <= denominator_growth.envelope(point) * (1 + 1e-6), point


@given(st.floats(min_value=-1, max_value=3), st.floats(min_value=-60, max_value=60))
@settings(max_examples=60)
def test_random_envelope_of_G(sigma, t):
    point = complex(sigma, t)
    if abs(point - 1) < 1e-3 or (sigma <= 0 and abs(t) < 1e-9):
        return
    assert g_abs(point) <= growth_bound_G().envelope(point) * (1 + 1e-6)


def test_g_abs_near_pole():
    for point in (1, complex(1, 1e-8), complex(1 - 1e-7, 0), complex(1e-9, 1e-9)):
        z = mpmath.mpc(point)
        ref = abs(z * (z - 1) * mpmath.zeta(z)) if z != 1 else 1
        assert g_abs(point) == pytest.approx(float(ref), rel=1e-10, abs=1e-15)
