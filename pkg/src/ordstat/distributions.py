"""Source distributions and their moment-kernel evaluations.

Everything downstream is built from three integrals of a nonnegative
random variable with density ``p``:

* ``kernel_c(gamma, lam)``  = int_0^gamma p(x) exp(lam*x) dx
* ``kernel_e(gamma, lam)``  = int_gamma^inf p(x) exp(lam*x) dx
* ``kernel_mu(ga, gb, lam)`` = int_ga^gb p(x) exp(lam*x) dx

``lam`` may be complex; with an unbounded upper limit the integral exists
only for ``Re(lam) < abscissa``, the distribution's declared convergence
abscissa.  :class:`Exponential` and :class:`HalfNormal` carry closed forms;
:class:`CustomDistribution` evaluates the kernels by adaptive quadrature and
exists so that any density/CDF pair can be plugged into the generic
machinery (and so the closed forms can be tested against an independent
route).
"""

import math

import numpy as np
from scipy import integrate
from scipy import special

from ordstat.errors import DivergentIntegralError, DomainError

__all__ = ["Distribution", "Exponential", "HalfNormal", "CustomDistribution"]

_SQRT2 = math.sqrt(2.0)

# Adaptive quadrature targets for the generic kernel path.
_QUAD_ABS = 1e-10
_QUAD_REL = 1e-8


def _is_complex(lam):
    return isinstance(lam, complex) and lam.imag != 0.0


def _as_scalar(lam):
    """Collapse complex ``lam`` with zero imaginary part to a float so the
    real-argument code paths apply (contour nodes can land on the axis)."""
    if isinstance(lam, complex):
        return lam.real if lam.imag == 0.0 else lam
    return float(lam)


class Distribution:
    """A nonnegative random variable with moment-kernel evaluations.

    Subclasses must set ``name``, ``mean``, ``abscissa`` (supremum of
    ``Re(lam)`` for which ``E[exp(lam*X)]`` is finite; ``inf`` if entire)
    and ``support_upper`` (``inf`` unless the density has bounded support),
    and implement ``pdf`` and ``cdf`` (vectorized over numpy arrays).
    """

    name = "distribution"
    mean = None
    abscissa = None
    support_upper = math.inf

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    # Scalar fast paths: quadrature and inversion loops evaluate the
    # density millions of times at single points, where the vectorized
    # entry points pay an order of magnitude in numpy dispatch.

    def pdf1(self, x):
        return float(self.pdf(x))

    def cdf1(self, x):
        return float(self.cdf(x))

    def sample(self, rng, size):
        """Draw ``size`` variates using the numpy generator ``rng``."""
        raise NotImplementedError(f"{self.name} does not define a sampler")

    # -- kernels (generic quadrature implementations; subclasses override) --

    def kernel_c(self, gamma, lam=0.0):
        """int_0^gamma p(x) exp(lam*x) dx; CDF blended with the MGF."""
        if gamma < 0:
            raise DomainError("gamma must be nonnegative")
        return self._quad_kernel(0.0, gamma, lam)

    def kernel_e(self, gamma, lam=0.0):
        """int_gamma^inf p(x) exp(lam*x) dx; tail blended with the MGF."""
        if gamma < 0:
            raise DomainError("gamma must be nonnegative")
        return self._quad_kernel(gamma, math.inf, lam)

    def kernel_mu(self, gamma_a, gamma_b, lam=0.0):
        """int_ga^gb p(x) exp(lam*x) dx over an ordered interval."""
        if gamma_a < 0 or gamma_b < gamma_a:
            raise DomainError("need 0 <= gamma_a <= gamma_b")
        return self._quad_kernel(gamma_a, gamma_b, lam)

    # -- shared quadrature plumbing --

    def _check_convergence(self, lam):
        re = lam.real if isinstance(lam, complex) else float(lam)
        if re >= self.abscissa:
            raise DivergentIntegralError(
                f"kernel of {self.name} diverges for Re(lam)={re} >= "
                f"abscissa {self.abscissa}"
            )

    def _quad_kernel(self, lo, hi, lam):
        hi = min(hi, self.support_upper)
        if math.isinf(hi):
            self._check_convergence(lam)
        if lo >= hi:
            return 0j if _is_complex(lam) else 0.0
        re = lam.real if isinstance(lam, complex) else float(lam)
        im = lam.imag if isinstance(lam, complex) else 0.0

        def damped(x):
            # pdf first: in the far tail it underflows to 0 where the
            # bare exponential factor would overflow.
            p = self.pdf1(x)
            return p * math.exp(re * x) if p > 0.0 else 0.0
        if im == 0.0:
            val = _quad(damped, lo, hi)
            return complex(val) if _is_complex(lam) else val
        # Complex lam: real and imaginary parts integrated separately.
        if math.isinf(hi):
            # Fourier-weighted quadrature is the robust route on [lo, inf).
            rp = integrate.quad(damped, lo, hi, weight="cos", wvar=im,
                                epsabs=_QUAD_ABS, limit=300)[0]
            ip = integrate.quad(damped, lo, hi, weight="sin", wvar=im,
                                epsabs=_QUAD_ABS, limit=300)[0]
        else:
            rp = _quad(lambda x: damped(x) * math.cos(im * x), lo, hi)
            ip = _quad(lambda x: damped(x) * math.sin(im * x), lo, hi)
        return complex(rp, ip)


def _quad(f, lo, hi, points=None):
    if points is not None and not math.isinf(hi):
        pts = sorted(p for p in points if lo < p < hi)
        return integrate.quad(f, lo, hi, epsabs=_QUAD_ABS, epsrel=_QUAD_REL,
                              limit=300, points=pts or None)[0]
    return integrate.quad(f, lo, hi, epsabs=_QUAD_ABS, epsrel=_QUAD_REL,
                          limit=300)[0]


class Exponential(Distribution):
    """Exponential with mean ``gamma_bar`` (rate ``1/gamma_bar``)."""

    def __init__(self, gamma_bar):
        if gamma_bar <= 0:
            raise DomainError("gamma_bar must be positive")
        self.gamma_bar = float(gamma_bar)
        self.rate = 1.0 / self.gamma_bar
        self.mean = self.gamma_bar
        self.abscissa = self.rate
        self.name = f"exponential(mean={self.gamma_bar:g})"

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)
        return out if out.ndim else float(out)

    def pdf1(self, x):
        return self.rate * math.exp(-self.rate * x) if x >= 0 else 0.0

    def cdf1(self, x):
        return -math.expm1(-self.rate * x) if x >= 0 else 0.0

    def sample(self, rng, size):
        # Inverse CDF on u uniform in (0, 1].
        u = 1.0 - rng.random(size)
        return -self.gamma_bar * np.log(u)

    # d = rate - lam below; every kernel is an expression in exp(-d*gamma).

    def kernel_c(self, gamma, lam=0.0):
        if gamma < 0:
            raise DomainError("gamma must be nonnegative")
        lam = _as_scalar(lam)
        a = self.rate
        d = a - lam
        if math.isinf(gamma):
            self._check_convergence(lam)
            return a / d
        return a * gamma * _em1_ratio(-d * gamma)

    def kernel_e(self, gamma, lam=0.0):
        if gamma < 0:
            raise DomainError("gamma must be nonnegative")
        lam = _as_scalar(lam)
        self._check_convergence(lam)
        a = self.rate
        d = a - lam
        if math.isinf(gamma):
            return 0j if _is_complex(lam) else 0.0
        if _is_complex(lam):
            return a * _cexp(-d * gamma) / d
        return a * math.exp(-d * gamma) / d

    def kernel_mu(self, gamma_a, gamma_b, lam=0.0):
        if gamma_a < 0 or gamma_b < gamma_a:
            raise DomainError("need 0 <= gamma_a <= gamma_b")
        if math.isinf(gamma_b):
            return self.kernel_e(gamma_a, lam)
        return self.kernel_c(gamma_b, lam) - self.kernel_c(gamma_a, lam)


def _cexp(z):
    return complex(math.exp(z.real) * math.cos(z.imag),
                   math.exp(z.real) * math.sin(z.imag)) if isinstance(z, complex) else math.exp(z)


def _em1_ratio(w):
    """(exp(w) - 1) / w, stable near w = 0, for real or complex w."""
    if isinstance(w, complex):
        if abs(w) < 1e-8:
            return 1.0 + w / 2.0 + w * w / 6.0
        return (_cexp(w) - 1.0) / w
    if abs(w) < 1e-8:
        return 1.0 + w / 2.0 + w * w / 6.0
    return math.expm1(w) / w


class HalfNormal(Distribution):
    """|N(0, sigma^2)|; the MGF is entire so every kernel converges."""

    def __init__(self, sigma):
        if sigma <= 0:
            raise DomainError("sigma must be positive")
        self.sigma = float(sigma)
        self.mean = self.sigma * math.sqrt(2.0 / math.pi)
        self.abscissa = math.inf
        self.name = f"halfnormal(sigma={self.sigma:g})"
        self._pdf_norm = math.sqrt(2.0 / math.pi) / self.sigma

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        s = self.sigma
        out = np.where(x >= 0,
                       math.sqrt(2.0 / math.pi) / s * np.exp(-np.square(np.maximum(x, 0.0)) / (2 * s * s)),
                       0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, special.erf(np.maximum(x, 0.0) / (self.sigma * math.sqrt(2))), 0.0)
        return out if out.ndim else float(out)

    def pdf1(self, x):
        if x < 0:
            return 0.0
        u = x / self.sigma
        return self._pdf_norm * math.exp(-0.5 * u * u)

    def cdf1(self, x):
        return math.erf(x / (self.sigma * _SQRT2)) if x >= 0 else 0.0

    def sample(self, rng, size):
        return self.sigma * np.abs(rng.standard_normal(size))

    # Closed forms via the scaled complementary error function: with
    # u = sigma*lam/sqrt(2), g = gamma/(sigma*sqrt(2)),
    #   c(inf, lam) = erfcx(-u)
    #   e(gamma, lam) = exp(lam*gamma - gamma^2/(2 sigma^2)) * erfcx(g - u)
    # erfcx keeps both expressions finite where erf alone overflows.

    def kernel_c(self, gamma, lam=0.0):
        if gamma < 0:
            raise DomainError("gamma must be nonnegative")
        lam = _as_scalar(lam)
        u = self.sigma * lam / math.sqrt(2)
        total = special.erfcx(-u)
        if math.isinf(gamma):
            return complex(total) if _is_complex(lam) else float(total)
        val = total - self._tail(gamma, lam)
        return complex(val) if _is_complex(lam) else float(val)

    def kernel_e(self, gamma, lam=0.0):
        if gamma < 0:
            raise DomainError("gamma must be nonnegative")
        lam = _as_scalar(lam)
        if math.isinf(gamma):
            return 0j if _is_complex(lam) else 0.0
        val = self._tail(gamma, lam)
        return val if _is_complex(lam) else float(val)

    def kernel_mu(self, gamma_a, gamma_b, lam=0.0):
        if gamma_a < 0 or gamma_b < gamma_a:
            raise DomainError("need 0 <= gamma_a <= gamma_b")
        lam = _as_scalar(lam)
        if math.isinf(gamma_b):
            return self.kernel_e(gamma_a, lam)
        val = self._tail(gamma_a, lam) - self._tail(gamma_b, lam)
        return val if _is_complex(lam) else float(val)

    def _tail(self, gamma, lam):
        u = self.sigma * lam / math.sqrt(2)
        g = gamma / (self.sigma * math.sqrt(2))
        arg = lam * gamma - gamma * gamma / (2 * self.sigma ** 2)
        return _cexp(arg) * special.erfcx(g - u) if _is_complex(lam) else math.exp(arg) * float(special.erfcx(g - u))


class CustomDistribution(Distribution):
    """Wrap arbitrary pdf/cdf callables; kernels fall back to quadrature.

    Parameters
    ----------
    pdf, cdf : callable
        Density and CDF on [0, inf).  ``cdf`` must be the exact integral of
        ``pdf`` (closed form, not numerically integrated), since downstream
        formulas raise it to large powers.
    mean : float
        Used as the characteristic scale for inversion and sampling checks.
    abscissa : float
        Convergence abscissa of the MGF; ``inf`` if entire.
    support_upper : float, optional
        Upper end of the support if bounded.
    sampler : callable, optional
        ``sampler(rng, size) -> ndarray`` for Monte Carlo use.
    """

    def __init__(self, pdf, cdf, mean, abscissa, support_upper=math.inf,
                 sampler=None, name="custom"):
        self._pdf = pdf
        self._cdf = cdf
        self.mean = float(mean)
        self.abscissa = float(abscissa)
        self.support_upper = float(support_upper)
        self._sampler = sampler
        self.name = name

    def pdf(self, x):
        return self._pdf(x)

    def cdf(self, x):
        return self._cdf(x)

    def sample(self, rng, size):
        if self._sampler is None:
            raise NotImplementedError(f"{self.name} does not define a sampler")
        return self._sampler(rng, size)
