"""Exact transform-domain algebra for the exponential closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordstat import laplace_terms as lt
from ordstat.distributions import Exponential
from ordstat.errors import DomainError, MixedPoleError

S_POINTS = [complex(0.3, 0.0), complex(0.1, 1.7), complex(1.2, -0.4)]


def ref_kernels(gamma_bar):
    d = Exponential(gamma_bar)
    return (lambda g, s: complex(d.kernel_c(g, -s)),
            lambda g, s: complex(d.kernel_e(g, -s)),
            lambda ga, gb, s: complex(d.kernel_mu(ga, gb, -s)))


@pytest.mark.parametrize("s", S_POINTS)
@pytest.mark.parametrize("m", [1, 2, 4])
def test_kernel_powers_match_closed_kernels(s, m):
    gb = 1.4
    kc, ke, kmu = ref_kernels(gb)
    assert lt.exp_kernel_c_pow(gb, 0.9, m).eval_at(s) == pytest.approx(
        kc(0.9, s) ** m, rel=1e-12)
    assert lt.exp_kernel_e_pow(gb, 0.9, m).eval_at(s) == pytest.approx(
        ke(0.9, s) ** m, rel=1e-12)
    assert lt.exp_kernel_mu_pow(gb, 0.4, 1.5, m).eval_at(s) == pytest.approx(
        kmu(0.4, 1.5, s) ** m, rel=1e-12)


def test_c_pow_infinite_gamma_is_mgf_power():
    gb = 0.8
    ts = lt.exp_kernel_c_pow(gb, math.inf, 3)
    a = 1.0 / gb
    s = complex(0.5, 0.9)
    assert ts.eval_at(s) == pytest.approx((a / (s + a)) ** 3, rel=1e-13)
    assert len(ts) == 1


def test_multiply_matches_pointwise_product():
    gb = 1.1
    a = lt.exp_kernel_c_pow(gb, 0.7, 2)
    b = lt.exp_kernel_e_pow(gb, 0.7, 3)
    prod = lt.multiply(a, b)
    for s in S_POINTS:
        assert prod.eval_at(s) == pytest.approx(a.eval_at(s) * b.eval_at(s),
                                                rel=1e-12)


def test_multiply_rejects_mixed_poles():
    with pytest.raises(MixedPoleError):
        lt.multiply(lt.exp_kernel_c_pow(1.0, 0.5, 1),
                    lt.exp_kernel_c_pow(2.0, 0.5, 1))


def test_identity_and_zero():
    one = lt.LaplaceTermSum.identity(2.0)
    zero = lt.LaplaceTermSum.zero(2.0)
    other = lt.exp_kernel_e_pow(0.5, 0.3, 2)
    assert lt.multiply(one, other) == other
    assert len(lt.multiply(zero, other)) == 0
    assert one.eval_at(complex(0.2, 0.4)) == 1.0


def test_equal_endpoints_cancel_exactly():
    # mu with z_a == z_b is the zero transform; the binomial sum must
    # cancel term by term, not leave float residue.
    ts = lt.exp_kernel_mu_pow(1.0, 0.8, 0.8, 3)
    assert len(ts) == 0


def test_scaled_multiplies_coefficients():
    ts = lt.exp_kernel_c_pow(1.0, 0.6, 2).scaled(3)
    base = lt.exp_kernel_c_pow(1.0, 0.6, 2)
    s = complex(0.4, 0.2)
    assert ts.eval_at(s) == pytest.approx(3.0 * base.eval_at(s), rel=1e-14)


def test_invert_erlang():
    # c(inf)^K inverts to the K-stage Erlang density.
    K, gb = 4, 1.3
    a = 1.0 / gb
    poly = lt.exp_kernel_c_pow(gb, math.inf, K).invert()
    for z in (0.2, 1.1, 4.6):
        want = a ** K * z ** (K - 1) * math.exp(-a * z) / math.factorial(K - 1)
        assert poly.eval(z) == pytest.approx(want, rel=1e-13)


def test_invert_c_power_vanishes_outside_support():
    poly = lt.exp_kernel_c_pow(1.0, 0.7, 3).invert()
    assert poly.eval(-0.1) == 0.0
    assert poly.eval(3 * 0.7 + 1e-9) == pytest.approx(0.0, abs=1e-12)
    assert poly.eval(1.0) > 0.0


def test_invert_e_power_support_and_mass():
    gb, g, m = 1.2, 0.9, 3
    poly = lt.exp_kernel_e_pow(gb, g, m).invert()
    assert poly.support_min == pytest.approx(m * g)
    assert poly.eval(m * g - 1e-9) == 0.0
    from scipy import integrate
    mass, _ = integrate.quad(poly.eval, m * g, m * g + 80.0 * gb, limit=300)
    want = Exponential(gb).kernel_e(g, 0.0) ** m
    assert mass == pytest.approx(want, rel=1e-9)


def test_order0_term_cannot_invert():
    with pytest.raises(DomainError):
        lt.LaplaceTermSum.identity(1.0).invert()


def test_term_validation():
    with pytest.raises(DomainError):
        lt.LaplaceTermSum(0.0)
    with pytest.raises(DomainError):
        lt.LaplaceTermSum(1.0, {(0.5, 0): 1})
    with pytest.raises(DomainError):
        lt.exp_kernel_mu_pow(1.0, 1.5, 0.5, 2)
    with pytest.raises(DomainError):
        lt.exp_kernel_c_pow(-1.0, 0.5, 2)


def test_piecewise_poly_json_round_trip():
    poly = lt.exp_kernel_mu_pow(1.1, 0.3, 1.4, 3).invert()
    back = lt.PiecewisePoly.from_json(poly.to_json())
    assert back.terms == poly.terms
    zs = np.linspace(0.0, 5.0, 40)
    assert np.array_equal(back.eval_many(zs), poly.eval_many(zs))


def test_eval_many_matches_scalar_eval():
    poly = lt.exp_kernel_e_pow(1.0, 0.5, 2).invert()
    zs = np.linspace(0.0, 8.0, 60)
    many = poly.eval_many(zs)
    for z, v in zip(zs, many):
        assert v == poly.eval(z)


def test_eval_with_scale_reports_cancellation_magnitude():
    poly = lt.exp_kernel_c_pow(1.0, 0.9, 4).invert()
    val, scale = poly.eval_with_scale(2.0)
    assert val == pytest.approx(poly.eval(2.0))
    assert scale >= abs(val)


@settings(max_examples=60, deadline=None)
@given(ma=st.integers(0, 3), mb=st.integers(0, 3),
       za=st.floats(0.1, 2.0), zb=st.floats(0.1, 2.0))
def test_product_evaluates_as_product(ma, mb, za, zb):
    gb = 1.0
    a = lt.exp_kernel_c_pow(gb, za, ma)
    b = lt.exp_kernel_e_pow(gb, zb, mb)
    prod = lt.multiply(a, b)
    s = complex(0.37, 0.81)
    assert prod.eval_at(s) == pytest.approx(a.eval_at(s) * b.eval_at(s),
                                            rel=1e-11, abs=1e-13)
