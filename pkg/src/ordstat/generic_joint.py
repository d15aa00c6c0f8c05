"""Joint densities of ordered partial sums for arbitrary distributions.

Each evaluator composes powers of the source distribution's kernel
transforms, inverts one Laplace variable numerically on a Bromwich line,
and finishes with at most one or two finite quadratures over an order
statistic.  Multidimensional numerical inversion is never attempted: the
error budget stays one-dimensional by construction.

Two structural facts keep the inversion tractable:

* A kernel power's inverse has known support for any distribution on
  [0, inf): ``e(g, -s)^j`` carries ``exp(-j*g*s)`` so its inverse vanishes
  below ``j*g``; the inverses of ``c(g, -s)^j`` and ``mu(ga, gb, -s)^j``
  live on ``[0, j*g]`` and ``[j*ga, j*gb]``.  Evaluators return 0 outside
  these regions without touching the inverter.
* A power-1 kernel is itself a finite Laplace transform of a pdf
  restriction, so its inverse is ``pdf(t)`` times the support indicator
  and needs no numeric inversion.  Higher powers reduce to it through the
  convolution theorem: a power splits as a product of two lower powers,
  so its inverse is a finite convolution of theirs, recursively, with the
  pdf restriction at the base.  This matters beyond speed: an inverse of
  power ``j`` is only ``C^(j-2)`` at its support edges, where Bromwich-line
  summation converges worst in exactly the absolute terms that a relative
  error target cannot afford, and the reduction quadratures both place
  nodes arbitrarily close to those edges and probe regions where the
  density is orders of magnitude below its scale.

The Bromwich-line inverter therefore handles only the total-sum density,
whose transform is an entire MGF power with no support edge in sight; every
kernel-power inverse inside the reductions is a short stack of finite
quadratures with relative error control end to end.
"""

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from ordstat.distributions import Distribution
from ordstat.errors import ConvergenceError, DomainError
from ordstat.ilt import TransformFn, invert_numeric
from ordstat.partition import match_theorem

__all__ = [
    "TheoremCase",
    "t1_pdf",
    "t2_jpdf",
    "t3_jpdf",
    "t4_pdf",
    "t5_jpdf",
    "t6_jpdf",
]

# No useful absolute floor exists here: reduction integrals can be many
# orders below the density's scale at valid support points, and a floor
# would silently cap their relative accuracy.
_EPSABS = 1e-12
_EPSREL = 1e-6


def _quad(f, lo, hi, knots=(), limit=80):
    if not hi > lo:
        return 0.0
    pts = sorted({float(p) for p in knots if lo < p < hi})
    with warnings.catch_warnings():
        # Integrand kinks between knots can stall the subdivision at the
        # roundoff level; the abort warning then reports an error already
        # far inside the evaluators' tolerance.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, lo, hi, epsabs=_EPSABS, epsrel=_EPSREL,
                                limit=limit, points=pts or None)
    return val


def _tf_abscissa(dist):
    # Kernel transforms in s are analytic right of -abscissa; entire when
    # the MGF exists everywhere.
    absc = -dist.abscissa
    return absc if math.isfinite(absc) else 0.0


# The inverter's convergence flag demands ~10^-digits absolute; deep in a
# tail the total-sum density sits below that, so an unconverged attempt is
# still accepted when its estimate is small absolutely or relative to the
# value itself.
_ILT_ACCEPT_ABS = 1e-6
_ILT_ACCEPT_REL = 1e-5


def _ilt(dist, f, t, digits, scale):
    tf = TransformFn(f, abscissa=_tf_abscissa(dist), scale_hint=scale)
    res = invert_numeric(tf, t, target_digits=digits)
    if not res.converged:
        est = res.error_estimate
        if est > _ILT_ACCEPT_ABS and est > _ILT_ACCEPT_REL * abs(res.value):
            raise ConvergenceError(
                f"inverse transform did not converge at t={t!r} "
                f"(method {res.method}, error estimate {est:.2e})")
    return res.value


def _conv_self(dist, lo, hi, t):
    """Integral of pdf(x) * pdf(t - x) over [lo, hi], the power-2 inverse."""
    if not hi > lo:
        return 0.0
    p = dist.pdf1
    val, _ = integrate.quad(lambda x: p(x) * p(t - x), lo, hi,
                            epsabs=1e-13, epsrel=1e-11, limit=60)
    return val


def _conv_pair(fa, fb, sup_a, sup_b, t, knots_a=(), knots_b=()):
    """Inverse of a transform product at t: the convolution of the factor
    inverses over the overlap of their supports.

    ``knots_a``/``knots_b`` list interior points where a factor is not
    smooth (power inverses are piecewise on a lattice of support-edge
    sums); handing them to the integrator keeps the kinks from eating the
    accuracy budget.
    """
    lo = max(sup_a[0], t - sup_b[1])
    hi = min(sup_a[1], t - sup_b[0])
    if not hi > lo:
        return 0.0
    pts = sorted({p for p in knots_a if lo < p < hi} |
                 {t - q for q in knots_b if lo < t - q < hi})
    val, _ = integrate.quad(lambda u: fa(u) * fb(t - u), lo, hi,
                            epsabs=1e-13, epsrel=1e-11, limit=60,
                            points=pts or None)
    return val


def _lattice(step, n):
    """Interior kink lattice of an n-fold power inverse with edge ``step``."""
    return tuple(j * step for j in range(1, n))


def _mu_lattice(ga, gb, n):
    return tuple(j * ga + (n - j) * gb for j in range(1, n))


def _inv_c_pow(dist, gamma, n, t):
    """Inverse of c(gamma, -s)^n at t; supported on [0, n*gamma]."""
    if t < 0 or t > n * gamma:
        return 0.0
    if n == 1:
        return dist.pdf1(t)
    if n == 2:
        return _conv_self(dist, max(0.0, t - gamma), min(gamma, t), t)
    h = n // 2
    return _conv_pair(lambda u: _inv_c_pow(dist, gamma, h, u),
                      lambda v: _inv_c_pow(dist, gamma, n - h, v),
                      (0.0, h * gamma), (0.0, (n - h) * gamma), t,
                      knots_a=_lattice(gamma, h),
                      knots_b=_lattice(gamma, n - h))


def _inv_e_pow(dist, gamma, n, t):
    """Inverse of e(gamma, -s)^n at t; supported on [n*gamma, inf)."""
    if t < n * gamma:
        return 0.0
    if n == 1:
        return dist.pdf1(t)
    if n == 2:
        return _conv_self(dist, gamma, t - gamma, t)
    h = n // 2
    return _conv_pair(lambda u: _inv_e_pow(dist, gamma, h, u),
                      lambda v: _inv_e_pow(dist, gamma, n - h, v),
                      (h * gamma, math.inf), ((n - h) * gamma, math.inf), t)


def _inv_mu_pow(dist, ga, gb, n, t):
    """Inverse of mu(ga, gb, -s)^n at t; supported on [n*ga, n*gb]."""
    if t < n * ga or t > n * gb:
        return 0.0
    if n == 1:
        return dist.pdf1(t)
    if n == 2:
        return _conv_self(dist, max(ga, t - gb), min(gb, t - ga), t)
    h = n // 2
    return _conv_pair(lambda u: _inv_mu_pow(dist, ga, gb, h, u),
                      lambda v: _inv_mu_pow(dist, ga, gb, n - h, v),
                      (h * ga, h * gb), ((n - h) * ga, (n - h) * gb), t,
                      knots_a=_mu_lattice(ga, gb, h),
                      knots_b=_mu_lattice(ga, gb, n - h))


def t1_pdf(dist, K, z, digits=8):
    """Density of the sum of all ``K`` variables."""
    if K < 1:
        raise DomainError("need K >= 1")
    if z < 0:
        return 0.0
    if K == 1:
        return dist.pdf1(z)

    def f(s):
        return dist.kernel_c(math.inf, -s) ** K

    return _ilt(dist, f, z, digits, K * dist.mean)


def t2_jpdf(dist, K, m, z1, z2, digits=8):
    """Joint density of (rank-m variable, sum of the other K-1)."""
    if not 1 <= m <= K or K < 2:
        raise DomainError("need K >= 2 and 1 <= m <= K")
    if z1 < 0 or z2 < 0:
        return 0.0
    if m == 1 and z2 > (K - 1) * z1:
        return 0.0
    if m >= 2 and z2 < (m - 1) * z1:
        return 0.0
    pref = math.factorial(K) / (math.factorial(K - m) * math.factorial(m - 1))
    if m == 1:
        inv = _inv_c_pow(dist, z1, K - 1, z2)
    elif m == K:
        inv = _inv_e_pow(dist, z1, K - 1, z2)
    else:
        nc, ne = K - m, m - 1
        inv = _conv_pair(lambda u: _inv_c_pow(dist, z1, nc, u),
                         lambda v: _inv_e_pow(dist, z1, ne, v),
                         (0.0, nc * z1), (ne * z1, math.inf), z2,
                         knots_a=_lattice(z1, nc))
    return pref * dist.pdf1(z1) * inv


def t3_jpdf(dist, K, m, z1, z2, digits=8):
    """Joint density of (sum of the m largest, sum of the K-m smallest)."""
    if not 1 <= m <= K - 1:
        raise DomainError("need 1 <= m <= K-1")
    if z1 < 0 or z2 < 0 or m * z2 > (K - m) * z1:
        return 0.0
    if m == 1:
        # The head is one variable; exp(-s*g) collapses the outer integral
        # and the pair is the rank-1 one-vs-rest joint.
        return t2_jpdf(dist, K, 1, z1, z2, digits=digits)
    pref = math.factorial(K) / (math.factorial(K - m) * math.factorial(m - 1))

    def integrand(g):
        # exp(-s*g) is the combined variable itself; shift the inversion
        # point instead of carrying the factor into the transform.
        head = _inv_e_pow(dist, g, m - 1, z1 - g)
        if head == 0.0:
            return 0.0
        tail = _inv_c_pow(dist, g, K - m, z2)
        return dist.pdf1(g) * head * tail

    knots = [z2 / j for j in range(1, K - m + 1)]
    return pref * _quad(integrand, z2 / (K - m), z1 / m, knots)


def t4_pdf(dist, K, Ks, x, digits=8):
    """Density of the sum of the ``Ks`` largest of ``K``."""
    if not 1 <= Ks <= K:
        raise DomainError("need 1 <= Ks <= K")
    if x < 0:
        return 0.0
    if Ks == 1:
        return K * dist.pdf1(x) * dist.cdf1(x) ** (K - 1)

    def integrand(v):
        return _fine_d(dist, K, Ks, v, x - v, digits)

    return _quad(integrand, 0.0, x / Ks)


def _cdf_weight(dist, K, Ks, z4):
    return dist.cdf1(z4) ** (K - Ks) if Ks < K else 1.0


def _fine_d(dist, K, Ks, v, w, digits):
    """Joint density of (rank-Ks variable v, sum of ranks 1..Ks-1 w)."""
    if Ks < 2:
        raise DomainError("rank decomposition needs Ks >= 2")
    if v < 0 or w < (Ks - 1) * v:
        return 0.0
    pref = math.factorial(K) / (math.factorial(K - Ks) * math.factorial(Ks - 1))
    weight = _cdf_weight(dist, K, Ks, v) * dist.pdf1(v)
    if weight == 0.0:
        return 0.0
    return pref * weight * _inv_e_pow(dist, v, Ks - 1, w)


def t5_jpdf(dist, K, Ks, m, x, y, digits=8):
    """Joint density of (rank-m variable, sum of the other best Ks-1)."""
    if not (2 <= Ks <= K and 1 <= m <= Ks):
        raise DomainError("need Ks >= 2 and 1 <= m <= Ks <= K")
    if x < 0 or y < 0:
        return 0.0
    if m == Ks:
        return _fine_d(dist, K, Ks, x, y, digits)
    if m == 1 and Ks == 2:
        # (rank-1, rank-2) is the rank-Ks decomposition with swapped args.
        return _fine_d(dist, K, Ks, y, x, digits)
    if m == 1:
        return _t5_case_a(dist, K, Ks, x, y, digits)
    if m == Ks - 1:
        return _t5_case_c(dist, K, Ks, x, y, digits)
    return _t5_case_b(dist, K, Ks, m, x, y, digits)


def _t5_case_a(dist, K, Ks, x, y, digits):
    if y > (Ks - 1) * x:
        return 0.0
    pref = math.factorial(K) / (math.factorial(K - Ks) * math.factorial(Ks - 2))
    px = dist.pdf1(x)

    def integrand(z4):
        w = _cdf_weight(dist, K, Ks, z4) * dist.pdf1(z4)
        if w == 0.0:
            return 0.0
        return w * _inv_mu_pow(dist, z4, x, Ks - 2, y - z4)

    lo = max(0.0, y - (Ks - 2) * x)
    hi = y / (Ks - 1)
    knots = [(y - j * x) / (Ks - 1 - j) for j in range(1, Ks - 1)]
    return pref * px * _quad(integrand, lo, hi, knots)


def _t5_case_c(dist, K, Ks, x, y, digits):
    if y < (Ks - 2) * x:
        return 0.0
    pref = math.factorial(K) / (math.factorial(K - Ks) * math.factorial(Ks - 2))
    px = dist.pdf1(x)

    def integrand(z4):
        w = _cdf_weight(dist, K, Ks, z4) * dist.pdf1(z4)
        if w == 0.0:
            return 0.0
        return w * _inv_e_pow(dist, x, Ks - 2, y - z4)

    hi = min(x, y - (Ks - 2) * x)
    return pref * px * _quad(integrand, 0.0, hi)


def _t5_case_b(dist, K, Ks, m, x, y, digits):
    if y < (m - 1) * x:
        return 0.0
    nm = Ks - m
    pref = math.factorial(K) / (math.factorial(K - Ks) * math.factorial(m - 1)
                                * math.factorial(nm - 1))
    px = dist.pdf1(x)

    def outer(z4):
        wz4 = _cdf_weight(dist, K, Ks, z4) * dist.pdf1(z4)
        if wz4 == 0.0:
            return 0.0

        def inner(z1):
            head = _inv_e_pow(dist, x, m - 1, z1)
            if head == 0.0:
                return 0.0
            return head * _inv_mu_pow(dist, z4, x, nm - 1, y - z1 - z4)

        lo1 = max((m - 1) * x, y - z4 - (nm - 1) * x)
        hi1 = y - nm * z4
        knots = [y - (nm - j) * z4 - j * x for j in range(1, nm)]
        return wz4 * _quad(inner, lo1, hi1, knots, limit=50)

    hi4 = min(x, (y - (m - 1) * x) / nm)
    outer_knots = [(y - (m + j - 1) * x) / (nm - j) for j in range(1, nm)]
    outer_knots.append(y - (Ks - 2) * x)
    return pref * px * _quad(outer, 0.0, hi4, outer_knots, limit=50)


def t6_jpdf(dist, K, Ks, m, x, y, digits=8):
    """Joint density of (sum of ranks 1..m, sum of ranks m+1..Ks)."""
    if not (1 <= m < Ks <= K):
        raise DomainError("need 1 <= m < Ks <= K")
    if x < 0 or y < 0 or m * y > (Ks - m) * x:
        return 0.0
    if m == 1:
        return t5_jpdf(dist, K, Ks, 1, x, y, digits=digits)
    if m == Ks - 1:
        return _fine_d(dist, K, Ks, y, x, digits)
    nt = Ks - m
    pref = math.factorial(K) / (math.factorial(K - Ks) * math.factorial(m - 1)
                                * math.factorial(nt - 1))

    def outer(z4):
        wz4 = _cdf_weight(dist, K, Ks, z4) * dist.pdf1(z4)
        if wz4 == 0.0:
            return 0.0

        def inner(z2):
            head = _inv_e_pow(dist, z2, m - 1, x - z2)
            if head == 0.0:
                return 0.0
            mid = _inv_mu_pow(dist, z4, z2, nt - 1, y - z4)
            return dist.pdf1(z2) * head * mid

        lo2 = (y - z4) / (nt - 1)
        hi2 = x / m
        knots = [(y - (nt - j) * z4) / j for j in range(1, nt)]
        return wz4 * _quad(inner, lo2, hi2, knots, limit=50)

    lo4 = max(0.0, y - (nt - 1) * x / m)
    hi4 = y / nt
    outer_knots = [(y - j * x / m) / (nt - j) for j in range(1, nt)]
    return pref * _quad(outer, lo4, hi4, outer_knots, limit=50)


_T5_IDS = ("T5a", "T5b", "T5c", "T5d")


@dataclass(frozen=True)
class TheoremCase:
    """A resolved evaluator family bound to a distribution.

    ``swap`` means the caller's coordinate order is the reverse of the
    evaluator's canonical order (one-vs-rest and head-vs-tail evaluators
    take the singleton/head coordinate first).
    """

    id: str
    K: int
    Ks: int
    m: int
    dist: Distribution
    swap: bool = False

    @classmethod
    def from_partition(cls, part, dist):
        """Resolve a partition; raises UnsupportedShapeError when uncovered."""
        mt = match_theorem(part)
        return cls(mt.id, mt.K, mt.Ks, mt.m, dist, mt.swap)

    @property
    def dim(self):
        return 1 if self.id in ("T1", "T4") else 2

    def pdf(self, *coords, digits=8):
        """Evaluate the density at the caller-ordered coordinates."""
        if len(coords) != self.dim:
            raise DomainError(f"{self.id} expects {self.dim} coordinate(s)")
        if self.dim == 1:
            x, = coords
            if self.id == "T1":
                return t1_pdf(self.dist, self.K, x, digits=digits)
            return t4_pdf(self.dist, self.K, self.Ks, x, digits=digits)
        x, y = coords[::-1] if self.swap else coords
        if self.id == "T2":
            return t2_jpdf(self.dist, self.K, self.m, x, y, digits=digits)
        if self.id == "T3":
            return t3_jpdf(self.dist, self.K, self.m, x, y, digits=digits)
        if self.id in _T5_IDS:
            return t5_jpdf(self.dist, self.K, self.Ks, self.m, x, y,
                           digits=digits)
        if self.id == "T6":
            return t6_jpdf(self.dist, self.K, self.Ks, self.m, x, y,
                           digits=digits)
        raise DomainError(f"unknown evaluator id {self.id!r}")
