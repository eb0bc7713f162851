"""Entropy models S(e, v) with derivatives to order 4 and the state map.

Two gas models are built in, both with hand-derived closed-form partials
(authoritative) and a jet-arithmetic path (cross-check):

* ``IdealGas(n)``:            S(e, v) = ln(e^(n/2) v),        valid for e > 0, v > 0
* ``VanDerWaalsReduced(n)``:  S(e, v) = ln((e + 3/v)^(4n/3) (3v - 1)^(8/3)),
                              valid for v > 1/3 and e + 3/v > 0

The van der Waals model is written in reduced variables: the critical point
sits at (T, v, p) = (1, 1, 1).  ``n`` is the degree of freedom, n > 0.

On the state surface the temperature and pressure are recovered from the
entropy gradient: T = 1/S_e and p = S_v/S_e.  The information gain of a state
is I(e, v) = -S(e, v); its derivatives feed the moment forms.

All closed-form partials accept floats or numpy arrays (elementwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import jets
from .exceptions import DomainError, NonPositiveTemperatureError
from .jets import Jet4

__all__ = [
    "EntropyModel",
    "IdealGas",
    "VanDerWaalsReduced",
    "CustomModel",
    "StatePoint",
    "make_model",
]


@dataclass(frozen=True)
class StatePoint:
    """One point of the state surface: energies, entropy, temperature, pressure."""

    e: float
    v: float
    s: float
    T: float
    p: float


class EntropyModel:
    """Base class: entropy with all partials to order 4 plus coordinate maps."""

    name = "abstract"

    # -- domain ------------------------------------------------------------

    def domain_mask(self, e, v):
        """Elementwise validity of (e, v); floats or arrays."""
        raise NotImplementedError

    def in_domain(self, e: float, v: float) -> bool:
        return bool(self.domain_mask(e, v))

    def check_domain(self, e: float, v: float) -> None:
        if not self.in_domain(e, v):
            raise DomainError(f"({e}, {v}) is outside the domain of {self.name}")

    # -- derivatives ---------------------------------------------------------

    def partials(self, e, v) -> tuple:
        """All 15 partials of S in :data:`thermoforms.jets.ORDERS` order.

        No domain check; elementwise on arrays.  Scalar callers should use
        :meth:`derivatives`.
        """
        raise NotImplementedError

    def derivatives(self, e: float, v: float) -> Jet4:
        """Jet of S at (e, v) from the closed-form partials."""
        self.check_domain(e, v)
        return jets.from_partials(self.partials(e, v))

    def derivatives_via_jets(self, e: float, v: float) -> Jet4:
        """Jet of S rebuilt from jet arithmetic on the entropy expression."""
        self.check_domain(e, v)
        return self._build_jet(jets.variable("e", e), jets.variable("v", v))

    def _build_jet(self, ej: Jet4, vj: Jet4) -> Jet4:
        raise NotImplementedError

    # -- coordinate maps -----------------------------------------------------

    def entropy(self, e: float, v: float) -> float:
        self.check_domain(e, v)
        return float(self.partials(e, v)[0])

    def information_gain(self, e: float, v: float) -> float:
        """I(e, v) = -S(e, v)."""
        return -self.entropy(e, v)

    def state(self, e: float, v: float) -> StatePoint:
        """Entropy, temperature and pressure at (e, v)."""
        self.check_domain(e, v)
        p = self.partials(e, v)
        s, s_e, s_v = float(p[0]), float(p[1]), float(p[2])
        if s_e <= 0.0:
            raise NonPositiveTemperatureError(
                f"S_e = {s_e} <= 0 at ({e}, {v}); temperature undefined"
            )
        return StatePoint(e=float(e), v=float(v), s=s, T=1.0 / s_e, p=s_v / s_e)

    def energy_from_T(self, T, v):
        """Invert T = 1/S_e at fixed v; elementwise on arrays."""
        raise NotImplementedError


class IdealGas(EntropyModel):
    """S(e, v) = ln(e^(n/2) v) for e > 0, v > 0."""

    def __init__(self, n: float):
        if not n > 0:
            raise ValueError(f"degrees of freedom must be positive, got {n}")
        self.n = float(n)
        self.name = f"ideal(n={self.n:g})"

    def domain_mask(self, e, v):
        return (np.asarray(e) > 0.0) & (np.asarray(v) > 0.0)

    def partials(self, e, v):
        n = self.n
        z = 0.0 * (e + v)
        half_n = 0.5 * n
        return (
            half_n * np.log(e) + np.log(v),
            half_n / e, 1.0 / v,
            -half_n / e**2, z, -1.0 / v**2,
            n / e**3, z, z, 2.0 / v**3,
            -3.0 * n / e**4, z, z, z, -6.0 / v**4,
        )

    def _build_jet(self, ej, vj):
        return jets.log(jets.power(ej, 0.5 * self.n) * vj)

    def energy_from_T(self, T, v):
        if np.any(np.asarray(T) <= 0.0):
            raise DomainError(f"temperature must be positive, got {T}")
        e = 0.5 * self.n * T
        if not np.all(self.domain_mask(e, v)):
            raise DomainError(f"(T={T}, v={v}) maps outside the ideal-gas domain")
        return e


class VanDerWaalsReduced(EntropyModel):
    """S(e, v) = ln((e + 3/v)^(4n/3) (3v - 1)^(8/3)) in reduced variables."""

    def __init__(self, n: float):
        if not n > 0:
            raise ValueError(f"degrees of freedom must be positive, got {n}")
        self.n = float(n)
        self.name = f"vdw(n={self.n:g})"

    def domain_mask(self, e, v):
        v = np.asarray(v)
        return (v > 1.0 / 3.0) & (np.asarray(e) + 3.0 / v > 0.0)

    def partials(self, e, v):
        ca = 4.0 * self.n / 3.0
        cb = 8.0 / 3.0
        A = e + 3.0 / v
        B = 3.0 * v - 1.0
        Av = -3.0 / v**2
        Avv = 6.0 / v**3
        Avvv = -18.0 / v**4
        Avvvv = 72.0 / v**5
        iA = 1.0 / A
        iA2 = iA * iA
        iA3 = iA2 * iA
        iA4 = iA3 * iA
        iB = 1.0 / B
        return (
            ca * np.log(A) + cb * np.log(B),
            ca * iA,
            ca * Av * iA + 3.0 * cb * iB,
            -ca * iA2,
            -ca * Av * iA2,
            ca * (Avv * iA - Av * Av * iA2) - 9.0 * cb * iB**2,
            2.0 * ca * iA3,
            2.0 * ca * Av * iA3,
            ca * (-Avv * iA2 + 2.0 * Av * Av * iA3),
            ca * (Avvv * iA - 3.0 * Av * Avv * iA2 + 2.0 * Av**3 * iA3) + 54.0 * cb * iB**3,
            -6.0 * ca * iA4,
            -6.0 * ca * Av * iA4,
            ca * (2.0 * Avv * iA3 - 6.0 * Av * Av * iA4),
            ca * (-Avvv * iA2 + 6.0 * Av * Avv * iA3 - 6.0 * Av**3 * iA4),
            ca * (Avvvv * iA - 4.0 * Av * Avvv * iA2 - 3.0 * Avv * Avv * iA2
                  + 12.0 * Av * Av * Avv * iA3 - 6.0 * Av**4 * iA4)
            - 486.0 * cb * iB**4,
        )

    def _build_jet(self, ej, vj):
        A = ej + 3.0 / vj
        B = 3.0 * vj - 1.0
        return jets.log(jets.power(A, 4.0 * self.n / 3.0) * jets.power(B, 8.0 / 3.0))

    def energy_from_T(self, T, v):
        # T = 1/S_e = 3(e + 3/v)/(4n)  =>  e = 4nT/3 - 3/v
        if np.any(np.asarray(T) <= 0.0):
            raise DomainError(f"temperature must be positive, got {T}")
        if np.any(np.asarray(v) <= 1.0 / 3.0):
            raise DomainError(f"volume must exceed 1/3, got {v}")
        return 4.0 * self.n * T / 3.0 - 3.0 / v


class CustomModel(EntropyModel):
    """Entropy supplied as a jet-expressible function of the two coordinates.

    ``builder(ej, vj)`` receives the coordinate jets and must return the jet
    of S using jet arithmetic.  An optional ``domain`` predicate restricts the
    validity region; without one, any DomainError raised while building marks
    the point invalid.
    """

    def __init__(self, builder: Callable[[Jet4, Jet4], Jet4],
                 domain: Optional[Callable[[float, float], bool]] = None,
                 name: str = "custom"):
        self._builder = builder
        self._domain = domain
        self.name = name

    def domain_mask(self, e, v):
        if self._domain is not None:
            return self._domain(e, v)
        try:
            self._build_jet(jets.variable("e", e), jets.variable("v", v))
        except (DomainError, ZeroDivisionError):
            return False
        return True

    def partials(self, e, v):
        return self._build_jet(jets.variable("e", e), jets.variable("v", v)).coeffs

    def _build_jet(self, ej, vj):
        return self._builder(ej, vj)

    def derivatives_via_jets(self, e: float, v: float) -> Jet4:
        return self.derivatives(e, v)

    def energy_from_T(self, T, v, initial: float = 1.0):
        """Newton inversion of T = 1/S_e at fixed v from ``initial``."""
        if T <= 0.0:
            raise DomainError(f"temperature must be positive, got {T}")
        target = 1.0 / T
        e = float(initial)
        for _ in range(100):
            try:
                jet = self.derivatives(e, v)
            except DomainError:
                raise DomainError(
                    f"Newton inversion of T left the domain at (e={e}, v={v})"
                ) from None
            g = jet[(1, 0)] - target
            gp = jet[(2, 0)]
            if gp == 0.0:
                break
            step = g / gp
            e -= step
            if abs(step) <= 1e-14 * max(1.0, abs(e)):
                self.check_domain(e, v)
                return e
        raise DomainError(f"energy_from_T did not converge for (T={T}, v={v})")


def make_model(kind: str, n: float) -> EntropyModel:
    """Factory for the CLI model names ``ideal`` and ``vdw``."""
    if kind == "ideal":
        return IdealGas(n)
    if kind == "vdw":
        return VanDerWaalsReduced(n)
    raise ValueError(f"unknown model kind {kind!r} (expected 'ideal' or 'vdw')")
