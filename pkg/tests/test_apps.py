"""Minimum-selection combiner: stage probabilities, output CDF, simulation."""

import math

import numpy as np
import pytest

from ordstat import apps
from ordstat.apps import MsGscConfig, msgsc_output_cdf, msgsc_stage_probability
from ordstat.errors import DomainError
from ordstat.exact_exp import pdf_sum_all

BIG = 200.0


def cfg(L=3, gt=1.0, gb=1.0, **kw):
    return MsGscConfig(L, gt, gb, **kw)


def test_config_validation():
    with pytest.raises(DomainError):
        MsGscConfig(0, 1.0, 1.0)
    with pytest.raises(DomainError):
        MsGscConfig(3, 0.0, 1.0)
    with pytest.raises(DomainError):
        MsGscConfig(3, 1.0, -2.0)
    with pytest.raises(DomainError):
        MsGscConfig(3, 1.0, 1.0, m=4)
    with pytest.raises(DomainError):
        MsGscConfig(3, 1.0, 1.0, below_threshold="drop")


def test_stage_needs_m():
    with pytest.raises(DomainError):
        msgsc_stage_probability(cfg(), 2.0)
    assert msgsc_stage_probability(cfg(m=2), 2.0) == \
        msgsc_stage_probability(cfg(), 2.0, m=2)


def test_stage_one_closed_form():
    c = cfg(L=4, gt=0.8, gb=1.3)
    for x in (1.0, 2.0, 5.0):
        want = apps._cdf_max(c, x) - apps._cdf_max(c, 0.8)
        assert msgsc_stage_probability(c, x, m=1) == pytest.approx(want,
                                                                   rel=1e-12)
    assert msgsc_stage_probability(c, 0.8, m=1) == 0.0


def test_stage_output_confined_to_window():
    # Stage m >= 2 stops exactly when the threshold is crossed, so the
    # output cannot exceed gamma_T times m/(m-1).
    c = cfg(L=4, gt=1.0)
    m = 3
    cap = c.gamma_T * m / (m - 1)
    full = msgsc_stage_probability(c, BIG, m=m)
    assert msgsc_stage_probability(c, cap, m=m) == pytest.approx(full,
                                                                 rel=1e-9)


def test_law_of_total_probability():
    for L, gt in [(2, 0.5), (3, 1.0), (4, 2.0)]:
        c = cfg(L=L, gt=gt)
        shortfall = pdf_sum_all(L, 1.0).cdf(gt)
        stages = sum(msgsc_stage_probability(c, BIG, m=m)
                     for m in range(1, L + 1))
        assert stages + shortfall == pytest.approx(1.0, abs=1e-9)


def test_output_cdf_reaches_one_and_is_monotone():
    for conv in ("sum", "outage"):
        c = cfg(L=3, gt=1.5, below_threshold=conv)
        grid = np.linspace(0.05, 25.0, 120)
        vals = [msgsc_output_cdf(c, x) for x in grid]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.0, abs=1e-8)
        assert msgsc_output_cdf(c, -1.0) == 0.0


def test_conventions_agree_above_threshold():
    gt = 1.2
    cs = cfg(L=3, gt=gt, below_threshold="sum")
    co = cfg(L=3, gt=gt, below_threshold="outage")
    for x in (1.3, 2.0, 4.0):
        assert msgsc_output_cdf(cs, x) == pytest.approx(
            msgsc_output_cdf(co, x), rel=1e-12)


def test_below_threshold_conventions():
    gt = 2.0
    c = cfg(L=3, gt=gt, below_threshold="outage")
    shortfall = pdf_sum_all(3, 1.0).cdf(gt)
    for x in (0.3, 1.0, 1.9):
        assert msgsc_output_cdf(c, x) == pytest.approx(shortfall, rel=1e-12)
    c2 = cfg(L=3, gt=gt, below_threshold="sum")
    for x in (0.3, 1.0, 1.9):
        assert msgsc_output_cdf(c2, x) == pytest.approx(
            pdf_sum_all(3, 1.0).cdf(x), rel=1e-12)


def test_vanishing_threshold_recovers_best_branch():
    c = cfg(L=3, gt=1e-7)
    for x in (0.5, 1.0, 2.5):
        assert msgsc_output_cdf(c, x) == pytest.approx(
            apps._cdf_max(c, x), abs=1e-4)


def test_simulation_matches_cdf():
    n = 200_000
    for conv in ("sum", "outage"):
        c = cfg(L=3, gt=1.0, below_threshold=conv)
        out = apps.simulate_output(c, n, seed=17)
        for x in (0.6, 1.2, 2.0, 4.0):
            p = msgsc_output_cdf(c, x)
            phat = np.mean(out < x)
            se = math.sqrt(max(p * (1 - p), 1e-12) / n)
            assert abs(phat - p) <= 4.0 * se


def test_simulation_deterministic():
    c = cfg()
    a = apps.simulate_output(c, 1000, seed=5)
    b = apps.simulate_output(c, 1000, seed=5)
    assert np.array_equal(a, b)
