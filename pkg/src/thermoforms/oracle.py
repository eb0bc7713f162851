"""One-dimensional exponential families with closed-form partition functions.

These ground the moment machinery without any thermodynamic model: tilting a
base measure by exp(lambda*x)/Z(lambda) gives a family whose cumulant
generator H(lambda) = -ln Z(lambda) has hand-computable derivatives, so the
central moments

    sigma2 = -H'',   sigma3 = -H''',   sigma4 = -H'''' + 3 sigma2^2

can be cross-checked against direct adaptive quadrature of the definition
integral (x - mean)^k rho(x) dx.  Two families cover both skewness regimes:

* ``GaussianFamily``:    base N(0, 1), Z = exp(lambda^2/2), lambda in R,
  tilted law N(lambda, 1): central moments (1, 0, 3) for every lambda.
* ``ExponentialFamily``: base exp(-x) dx on x >= 0, Z = 1/(1 - lambda) for
  lambda < 1, tilted law Exp(1 - lambda): moments (1/b^2, 2/b^3, 9/b^4)
  with b = 1 - lambda.

The information gain I(x) = H(lambda(x)) + lambda(x) * x is the convex
conjugate along the mean coordinate x = -H'(lambda); ``info_gain_residual``
verifies dI/dx = lambda by central differences.
"""

from __future__ import annotations

import math
import warnings
from typing import Tuple

from scipy import integrate

from .exceptions import DomainError, QuadratureError

__all__ = [
    "ExpFamily1D",
    "GaussianFamily",
    "ExponentialFamily",
    "make_family",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _quad(fn, lo, hi, rtol):
    # quad warns when it bottoms out at machine precision; the returned error
    # estimate is still checked against our own tolerance, so silence it.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(fn, lo, hi, epsabs=0.0, epsrel=rtol, limit=200)


class ExpFamily1D:
    """Base class: one-dimensional tilted family with known Z(lambda)."""

    name = "abstract"
    lambda_domain: Tuple[float, float] = (-math.inf, math.inf)

    def in_domain(self, lam: float) -> bool:
        lo, hi = self.lambda_domain
        return lo < lam < hi

    def check_domain(self, lam: float) -> None:
        if not self.in_domain(lam):
            raise DomainError(
                f"lambda={lam} outside the open domain {self.lambda_domain} of {self.name}"
            )

    # closed forms supplied by subclasses -----------------------------------

    def hamiltonian_derivs(self, lam: float) -> Tuple[float, float, float, float, float]:
        """(H, H', H'', H''', H'''') at lambda."""
        raise NotImplementedError

    def base_density(self, x: float) -> float:
        raise NotImplementedError

    def support(self, lam: float) -> Tuple[float, float]:
        """Finite integration window holding all but < 1e-14 of the mass."""
        raise NotImplementedError

    def lambda_from_mean(self, x: float) -> float:
        raise NotImplementedError

    # derived ----------------------------------------------------------------

    def mean(self, lam: float) -> float:
        self.check_domain(lam)
        return -self.hamiltonian_derivs(lam)[1]

    def central_moments_analytic(self, lam: float) -> Tuple[float, float, float]:
        """(sigma2, sigma3, sigma4) from the H-derivatives."""
        self.check_domain(lam)
        _, _, h2, h3, h4 = self.hamiltonian_derivs(lam)
        s2 = -h2
        return (s2, -h3, -h4 + 3.0 * s2 * s2)

    def density(self, x: float, lam: float) -> float:
        h = self.hamiltonian_derivs(lam)[0]
        # rho = exp(lambda x)/Z with Z = exp(-H)
        return math.exp(lam * x + h) * self.base_density(x)

    def normalization(self, lam: float, rtol: float = 1e-10) -> float:
        """Quadrature of the tilted density; should be 1."""
        self.check_domain(lam)
        lo, hi = self.support(lam)
        val, err = _quad(lambda x: self.density(x, lam), lo, hi, rtol)
        if err > 100.0 * rtol * max(1.0, abs(val)):
            raise QuadratureError(f"normalization quadrature error {err} at lambda={lam}")
        return val

    def central_moments_numeric(self, lam: float,
                                rtol: float = 1e-8) -> Tuple[float, float, float]:
        """(sigma2, sigma3, sigma4) by adaptive quadrature of the definition."""
        self.check_domain(lam)
        lo, hi = self.support(lam)

        def moment(k: int, center: float) -> float:
            val, err = _quad(lambda x: (x - center) ** k * self.density(x, lam),
                             lo, hi, min(rtol, 1e-10))
            # zero-valued moments need a scale: their natural size is s2^(k/2)
            tol = rtol * max(abs(val), abs(self.central_moments_analytic(lam)[0]) ** (k / 2.0))
            if err > tol:
                raise QuadratureError(
                    f"central moment {k} quadrature error {err} > {tol} at lambda={lam}"
                )
            return val

        m1 = moment(1, 0.0)
        return (moment(2, m1), moment(3, m1), moment(4, m1))

    def info_gain(self, x: float) -> float:
        """I(x) = H(lambda(x)) + lambda(x) * x along the mean coordinate."""
        lam = self.lambda_from_mean(x)
        return self.hamiltonian_derivs(lam)[0] + lam * x

    def info_gain_residual(self, lam: float, h: float = 1e-5) -> float:
        """|dI/dx - lambda| with dI/dx from central differences."""
        self.check_domain(lam)
        x = self.mean(lam)
        step = h * max(1.0, abs(x))
        dd = (self.info_gain(x + step) - self.info_gain(x - step)) / (2.0 * step)
        return abs(dd - lam)


class GaussianFamily(ExpFamily1D):
    """Standard normal base measure tilted along the identity statistic."""

    name = "gaussian"
    lambda_domain = (-math.inf, math.inf)

    def hamiltonian_derivs(self, lam):
        self.check_domain(lam)
        return (-0.5 * lam * lam, -lam, -1.0, 0.0, 0.0)

    def base_density(self, x):
        return math.exp(-0.5 * x * x) / _SQRT_2PI

    def support(self, lam):
        return (lam - 15.0, lam + 15.0)

    def lambda_from_mean(self, x):
        return x


class ExponentialFamily(ExpFamily1D):
    """Unit-rate exponential base measure on x >= 0; lambda < 1."""

    name = "exponential"
    lambda_domain = (-math.inf, 1.0)

    def hamiltonian_derivs(self, lam):
        self.check_domain(lam)
        b = 1.0 - lam
        return (math.log(b), -1.0 / b, -1.0 / b**2, -2.0 / b**3, -6.0 / b**4)

    def base_density(self, x):
        return math.exp(-x) if x >= 0.0 else 0.0

    def support(self, lam):
        # tilted rate b = 1 - lambda; mass beyond 40/b is < 1e-14
        return (0.0, 40.0 / (1.0 - lam))

    def lambda_from_mean(self, x):
        if x <= 0.0:
            raise DomainError(f"mean of the exponential family must be positive, got {x}")
        return 1.0 - 1.0 / x


def make_family(name: str) -> ExpFamily1D:
    if name == "gaussian":
        return GaussianFamily()
    if name == "exponential":
        return ExponentialFamily()
    raise ValueError(f"unknown family {name!r} (expected 'gaussian' or 'exponential')")
