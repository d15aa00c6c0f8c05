"""Minimum-selection combining statistics built on the exact joint densities.

A minimum-selection combiner ranks the L branch values decreasingly and
adds them one by one until the running sum reaches the threshold gamma_T,
so it combines the fewest best branches that suffice.  The stage where m
branches end up combined is the event {sum of best m-1 < gamma_T <= sum
of best m}, whose probability comes from the closed joint density of
(rank-m value, sum of the m-1 larger ones).

When even all L branches together stay below gamma_T the combiner has
nothing left to add; what the output "is" in that event is a modelling
choice exposed as ``below_threshold``:

* ``"sum"``: the output is the full sum of all L branches (the combiner
  still forwards what it has), so the output CDF below gamma_T follows
  the plain L-fold sum.
* ``"outage"``: the output is declared zero (an outage indicator), so the
  whole shortfall probability sits as a CDF jump at 0+.

Both conventions agree for x > gamma_T up to where the shortfall mass is
booked, and coincide in the gamma_T -> 0 limit (best branch only).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ordstat.distributions import Exponential
from ordstat.errors import DomainError
from ordstat.exact_exp import FineLastHead, pdf_sum_all
from ordstat.mc_oracle import sample_sorted

__all__ = [
    "MsGscConfig",
    "msgsc_stage_probability",
    "msgsc_output_cdf",
    "simulate_output",
]

_EPSABS = 1e-11
_EPSREL = 1e-9


@dataclass(frozen=True)
class MsGscConfig:
    """Combiner setup: L branches, threshold gamma_T, mean branch value.

    ``m`` selects a stage for :func:`msgsc_stage_probability` and is
    ignored by the output-CDF assembly; ``below_threshold`` picks the
    all-branches-short convention described in the module docstring.
    """

    L: int
    gamma_T: float
    gamma_bar: float
    m: int = None
    below_threshold: str = "sum"

    def __post_init__(self):
        if self.L < 1:
            raise DomainError("need L >= 1")
        if not self.gamma_T > 0:
            raise DomainError("need gamma_T > 0")
        if not self.gamma_bar > 0:
            raise DomainError("need gamma_bar > 0")
        if self.m is not None and not 1 <= self.m <= self.L:
            raise DomainError("need 1 <= m <= L")
        if self.below_threshold not in ("sum", "outage"):
            raise DomainError("below_threshold must be 'sum' or 'outage'")


def _cdf_max(cfg, x):
    if x <= 0:
        return 0.0
    return (-math.expm1(-x / cfg.gamma_bar)) ** cfg.L


def msgsc_stage_probability(cfg, x, m=None):
    """P(best m-1 sum < gamma_T and gamma_T <= best m sum < x).

    The stage-m event: the combiner stops after adding its m-th branch
    and the output lands below x.
    """
    m = cfg.m if m is None else m
    if m is None:
        raise DomainError("stage probability needs m (in cfg or argument)")
    if not 1 <= m <= cfg.L:
        raise DomainError("need 1 <= m <= L")
    gt = cfg.gamma_T
    if x <= gt:
        return 0.0
    if m == 1:
        return _cdf_max(cfg, x) - _cdf_max(cfg, gt)
    fine = FineLastHead(cfg.L, m, cfg.gamma_bar)

    def outer(w):
        # w: sum of the m-1 larger branches; v: the m-th one.
        lo = gt - w
        hi = min(x - w, w / (m - 1))
        if not hi > lo:
            return 0.0
        val, _ = integrate.quad(lambda v: fine(v, w), lo, hi,
                                epsabs=_EPSABS, epsrel=_EPSREL, limit=100)
        return val

    wlo = gt * (m - 1) / m
    pts = [p for p in (x * (m - 1) / m,) if wlo < p < gt]
    val, _ = integrate.quad(outer, wlo, gt, epsabs=_EPSABS, epsrel=_EPSREL,
                            limit=100, points=pts or None)
    return val


def msgsc_output_cdf(cfg, x):
    """P(combiner output < x) under the configured shortfall convention."""
    if x <= 0:
        return 0.0
    gt = cfg.gamma_T
    shortfall = pdf_sum_all(cfg.L, cfg.gamma_bar).cdf(gt)
    if cfg.below_threshold == "outage":
        below = shortfall
    else:
        below = pdf_sum_all(cfg.L, cfg.gamma_bar).cdf(min(x, gt))
    if x <= gt:
        return below
    stages = sum(msgsc_stage_probability(cfg, x, m=m)
                 for m in range(1, cfg.L + 1))
    if cfg.below_threshold == "outage":
        return shortfall + stages
    return below + stages


def simulate_output(cfg, n_samples, seed):
    """Monte Carlo combiner outputs for exponential branches.

    Applies the minimum-selection rule draw by draw: sort decreasingly,
    accumulate until the running sum reaches gamma_T.  Shortfall draws
    yield the full sum or 0.0 per ``below_threshold``.  Equality with the
    threshold stops the combiner (closed event side).
    """
    x = sample_sorted(Exponential(cfg.gamma_bar), cfg.L, n_samples, seed)
    cs = np.cumsum(x, axis=1)
    met = cs >= cfg.gamma_T
    first = np.argmax(met, axis=1)
    out = cs[np.arange(cs.shape[0]), first]
    reached = met[:, -1]
    fallback = cs[:, -1] if cfg.below_threshold == "sum" else 0.0
    return np.where(reached, out, fallback)
