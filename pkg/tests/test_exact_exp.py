"""Closed-form exponential densities: normalization, marginals, invariances."""

import math

import pytest
from scipy import integrate

from ordstat import exact_exp
from ordstat.distributions import Exponential
from ordstat.errors import DomainError

GB = 1.0


def rank_marginal(K, m, z, gb=GB):
    # Textbook density of the m-th largest of K iid exponentials.
    d = Exponential(gb)
    F = d.cdf1(z)
    comb = math.comb(K, m) * m
    return comb * d.pdf1(z) * F ** (K - m) * (1.0 - F) ** (m - 1)


def test_sum_all_is_erlang():
    K, gb = 4, 1.3
    pdf = exact_exp.pdf_sum_all(K, gb)
    a = 1.0 / gb
    for x in (0.3, 2.0, 7.5):
        want = a ** K * x ** (K - 1) * math.exp(-a * x) / math.factorial(K - 1)
        assert pdf(x) == pytest.approx(want, rel=1e-12)
    assert pdf(-0.1) == 0.0


def test_sum_all_cdf_matches_quadrature():
    pdf = exact_exp.pdf_sum_all(3, 0.8)
    for x in (0.5, 2.4, 6.0):
        mass, _ = integrate.quad(pdf, 0.0, x, limit=200)
        assert pdf.cdf(x) == pytest.approx(mass, rel=1e-10)
    assert pdf.cdf(0.0) == 0.0


def test_gsc_with_full_selection_is_erlang():
    gsc = exact_exp.pdf_gsc_sum(4, 4, 1.1)
    erl = exact_exp.pdf_sum_all(4, 1.1)
    for x in (0.4, 1.7, 5.2):
        assert gsc(x) == pytest.approx(erl(x), rel=1e-11)


def test_gsc_best1_is_max_density():
    K, gb = 5, 0.9
    gsc = exact_exp.pdf_gsc_sum(K, 1, gb)
    d = Exponential(gb)
    for x in (0.2, 1.0, 3.1):
        want = K * d.pdf1(x) * d.cdf1(x) ** (K - 1)
        assert gsc(x) == pytest.approx(want, rel=1e-11)


def test_gsc_normalizes():
    gsc = exact_exp.pdf_gsc_sum(5, 3, 1.0)
    mass, _ = integrate.quad(gsc, 0.0, 70.0, limit=300)
    assert mass == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("K,m", [(3, 1), (4, 2), (5, 5)])
def test_one_vs_rest_recovers_rank_marginal(K, m):
    jd = exact_exp.jpdf_one_vs_rest_allK(K, m, GB)
    for z1 in (0.6, 1.4):
        if m == 1:
            got, _ = integrate.quad(lambda y: jd(z1, y), 0.0, (K - 1) * z1,
                                    points=[j * z1 for j in range(1, K)],
                                    limit=200)
        else:
            got, _ = integrate.quad(lambda y: jd(z1, y), (m - 1) * z1,
                                    (m - 1) * z1 + 50.0, limit=200)
        assert got == pytest.approx(rank_marginal(K, m, z1), rel=1e-8)


def test_head_tail_mass():
    K, m = 3, 2
    jd = exact_exp.jpdf_headsum_vs_tailsum_allK(K, m, GB)

    def inner(x):
        hi = (K - m) * x / m
        val, _ = integrate.quad(lambda y: jd(x, y), 0.0, hi, limit=150)
        return val

    mass, _ = integrate.quad(inner, 0.0, 55.0, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("factory,args,pt", [
    (exact_exp.jpdf_one_vs_rest_allK, (4, 2), (0.9, 3.1)),
    (exact_exp.jpdf_headsum_vs_tailsum_allK, (5, 2), (3.0, 1.4)),
    (exact_exp.jpdf_one_vs_rest_bestKs, (5, 4, 2), (0.8, 2.9)),
    (exact_exp.jpdf_headsum_vs_tailsum_bestKs, (5, 4, 2), (2.6, 1.1)),
])
def test_scale_equivariance(factory, args, pt):
    gb = 1.7
    x, y = pt
    base = factory(*args, 1.0)
    scaled = factory(*args, gb)
    assert scaled(x * gb, y * gb) * gb * gb == pytest.approx(base(x, y),
                                                             rel=1e-10)


CASE_POINTS = {
    "a": ((5, 4, 1), (1.0, 2.0)),
    "b": ((6, 5, 3), (0.5, 2.0)),
    "c": ((5, 4, 3), (0.6, 2.2)),
    "d": ((5, 4, 4), (0.5, 2.0)),
}


@pytest.mark.parametrize("case", sorted(CASE_POINTS))
def test_best_ks_reduction_orders_agree(case):
    (K, Ks, m), (x, y) = CASE_POINTS[case]
    jd = exact_exp.jpdf_one_vs_rest_bestKs(K, Ks, m, GB)
    vals = [jd.reduce_to_2d(x, y, order=k) for k in (0, 1, 2)]
    assert jd(x, y) == pytest.approx(vals[0], rel=1e-12)
    for v in vals[1:]:
        assert v == pytest.approx(vals[0], rel=1e-6)
    assert vals[0] > 0.0


def test_best_ks_swapped_pair_case():
    # (rank-1, rank-2) of the best 2: the rank-Ks decomposition with the
    # coordinates exchanged.
    jd = exact_exp.jpdf_one_vs_rest_bestKs(4, 2, 1, GB)
    fine = exact_exp.FineLastHead(4, 2, GB)
    assert jd(1.7, 0.6) == pytest.approx(fine(0.6, 1.7), rel=1e-12)
    assert jd(0.6, 1.7) == 0.0


def test_best_ks_support_boundaries():
    jd = exact_exp.jpdf_one_vs_rest_bestKs(5, 4, 4, GB)
    assert jd.support(0.5, 2.0)
    assert not jd.support(0.5, 1.0)   # rest-sum below (Ks-1)*x
    assert jd(0.5, 1.0) == 0.0
    assert jd(-0.1, 2.0) == 0.0


def test_fine_last_head_mass():
    fine = exact_exp.FineLastHead(3, 2, GB)

    def inner(v):
        val, _ = integrate.quad(lambda w: fine(v, w), v, v + 50.0, limit=150)
        return val

    mass, _ = integrate.quad(inner, 0.0, 40.0, limit=150)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_fine_density_zero_outside_support():
    fine = exact_exp.FineHeadMidLast(6, 5, 2, GB)
    assert fine.support(3.0, 1.0, 1.5, 0.5)
    assert fine(3.0, 1.0, 1.5, 0.5) > 0.0
    assert not fine.support(0.5, 1.0, 1.5, 0.5)   # head below (m-1)*z2
    assert fine(0.5, 1.0, 1.5, 0.5) == 0.0
    assert fine(3.0, 1.0, 1.5, 1.2) == 0.0        # z4 above z2


def test_density_meta():
    jd = exact_exp.jpdf_one_vs_rest_bestKs(5, 3, 2, GB)
    meta = jd.meta
    assert meta["K"] == 5 and meta["Ks"] == 3 and meta["m"] == 2
    assert meta["path"] == "exact"


def test_k_cap_enforced():
    with pytest.raises(DomainError):
        exact_exp.pdf_sum_all(exact_exp.K_CAP + 1, 1.0)
    with pytest.raises(DomainError):
        exact_exp.jpdf_one_vs_rest_allK(exact_exp.K_CAP + 1, 2, 1.0)


def test_shape_validation():
    with pytest.raises(DomainError):
        exact_exp.jpdf_one_vs_rest_allK(3, 4, 1.0)
    with pytest.raises(DomainError):
        exact_exp.jpdf_headsum_vs_tailsum_allK(3, 3, 1.0)
    with pytest.raises(DomainError):
        exact_exp.jpdf_one_vs_rest_bestKs(3, 4, 1, 1.0)
    with pytest.raises(DomainError):
        exact_exp.pdf_sum_all(2, -1.0)


def test_large_k_nonnegative_spot():
    # Alternating-sum cancellation must not push densities negative.
    jd = exact_exp.jpdf_one_vs_rest_allK(20, 10, 1.0)
    for z1 in (0.4, 1.0, 2.2):
        for z2 in (9.5, 12.0, 20.0, 31.0):
            val, scale = jd.eval_with_scale(z1, z2)
            assert val >= -1e-9 * max(scale, 1.0)
