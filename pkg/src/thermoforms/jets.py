"""Truncated Taylor arithmetic for scalar functions of two variables.

A :class:`Jet4` carries the value and every partial derivative of a smooth
function f(e, v) up to total order 4 at one point: 15 numbers indexed by the
multi-index (i, j) with i + j <= 4, where slot (i, j) holds
d^(i+j) f / de^i dv^j.  Mixed partials are symmetric by construction, one
storage slot per multi-index.

Arithmetic on jets propagates derivatives exactly (to rounding): sums and
differences slot-wise, products by the two-dimensional Leibniz rule, division
by order-recursive back substitution, and ln/power by composing with the
series of ln(1+u) and (1+u)^r in u = (g - g(0))/g(0), which has no constant
term, so the truncation at total order 4 is exact.

NaN/Inf propagate through arithmetic; jets never raise on overflow.  Only the
documented preconditions raise: division by a jet with zero constant slot,
ln or fractional powers of a jet with non-positive constant slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

from .exceptions import DomainError

__all__ = ["Jet4", "ORDERS", "constant", "variable", "log", "power", "from_partials"]

#: Multi-index layout: total order ascending, e-order descending within each order.
ORDERS: Tuple[Tuple[int, int], ...] = (
    (0, 0),
    (1, 0), (0, 1),
    (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
    (4, 0), (3, 1), (2, 2), (1, 3), (0, 4),
)

_POS = {ij: k for k, ij in enumerate(ORDERS)}

_BINOM = ((1.0,), (1.0, 1.0), (1.0, 2.0, 1.0), (1.0, 3.0, 3.0, 1.0), (1.0, 4.0, 6.0, 4.0, 1.0))

# Leibniz expansion of each output slot: (coefficient, left slot, right slot).
_PRODUCT_TERMS = tuple(
    tuple(
        (_BINOM[i][a] * _BINOM[j][b], _POS[(a, b)], _POS[(i - a, j - b)])
        for a in range(i + 1)
        for b in range(j + 1)
    )
    for (i, j) in ORDERS
)

_Scalar = Union[int, float]


@dataclass(frozen=True)
class Jet4:
    """Value plus all partial derivatives up to total order 4 at a point."""

    coeffs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(ORDERS):
            raise ValueError(f"Jet4 needs {len(ORDERS)} coefficients, got {len(self.coeffs)}")

    def __getitem__(self, index: Tuple[int, int]) -> float:
        """Partial derivative d^(i+j) f / de^i dv^j for index = (i, j)."""
        return self.coeffs[_POS[index]]

    @property
    def value(self) -> float:
        return self.coeffs[0]

    def to_dict(self) -> dict:
        return {ij: self.coeffs[k] for k, ij in enumerate(ORDERS)}

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Jet4":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Jet4(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "Jet4":
        return Jet4(tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "Jet4":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Jet4(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> "Jet4":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "Jet4":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        f, g = self.coeffs, other.coeffs
        return Jet4(tuple(
            math.fsum(c * f[l] * g[r] for c, l, r in terms) for terms in _PRODUCT_TERMS
        ))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet4":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        f, g = self.coeffs, other.coeffs
        if g[0] == 0.0:
            raise ZeroDivisionError("jet division by a jet with zero constant slot")
        h = [0.0] * len(ORDERS)
        for k, terms in enumerate(_PRODUCT_TERMS):
            # f = h * g slot-wise; the (k, 0) term isolates the unknown h[k].
            acc = f[k]
            for c, l, r in terms:
                if l != k:
                    acc -= c * h[l] * g[r]
            h[k] = acc / g[0]
        return Jet4(tuple(h))

    def __rtruediv__(self, other) -> "Jet4":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self


def _coerce(x) -> Jet4:
    if isinstance(x, Jet4):
        return x
    if isinstance(x, (int, float)):
        return constant(float(x))
    return NotImplemented


def constant(c: _Scalar) -> Jet4:
    """Jet of the constant function c."""
    coeffs = [0.0] * len(ORDERS)
    coeffs[0] = float(c)
    return Jet4(tuple(coeffs))


def variable(axis: str, value: _Scalar) -> Jet4:
    """Jet of a coordinate function: ``axis`` is ``"e"`` or ``"v"``."""
    coeffs = [0.0] * len(ORDERS)
    coeffs[0] = float(value)
    if axis == "e":
        coeffs[_POS[(1, 0)]] = 1.0
    elif axis == "v":
        coeffs[_POS[(0, 1)]] = 1.0
    else:
        raise ValueError(f"axis must be 'e' or 'v', got {axis!r}")
    return Jet4(tuple(coeffs))


def _reduced(g: Jet4) -> Jet4:
    """u = (g - g0)/g0, a jet with zero constant slot."""
    g0 = g.coeffs[0]
    coeffs = list(g.coeffs)
    coeffs[0] = 0.0
    return Jet4(tuple(a / g0 for a in coeffs))


def log(g: Jet4) -> Jet4:
    """Jet of ln(g).  Requires g's constant slot > 0 (NaN passes through)."""
    g0 = g.coeffs[0]
    if g0 <= 0.0:
        raise DomainError(f"ln of jet with non-positive constant slot {g0}")
    u = _reduced(g)
    # ln(g0(1+u)) = ln g0 + u - u^2/2 + u^3/3 - u^4/4; u has no constant term,
    # so order-5 tail is invisible at truncation order 4.
    series = u * (1.0 + u * (-0.5 + u * ((1.0 / 3.0) + u * (-0.25))))
    return series + math.log(g0)


def power(g: Jet4, r: _Scalar) -> Jet4:
    """Jet of g**r.

    Integer exponents use repeated multiplication (negative ones via division
    and a nonzero constant slot); fractional exponents use the binomial series
    of (1+u)^r and require the constant slot to be positive.
    """
    r = float(r)
    if r == 0.0:
        return constant(1.0)
    if r.is_integer():
        k = abs(int(r))
        acc = constant(1.0)
        base = g
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc if r > 0 else constant(1.0) / acc
    g0 = g.coeffs[0]
    if g0 <= 0.0:
        raise DomainError(f"fractional power of jet with non-positive constant slot {g0}")
    u = _reduced(g)
    c1 = r
    c2 = r * (r - 1.0) / 2.0
    c3 = r * (r - 1.0) * (r - 2.0) / 6.0
    c4 = r * (r - 1.0) * (r - 2.0) * (r - 3.0) / 24.0
    series = 1.0 + u * (c1 + u * (c2 + u * (c3 + u * c4)))
    return math.pow(g0, r) * series


def from_partials(values: Iterable[float]) -> Jet4:
    """Build a jet from 15 partial derivatives in :data:`ORDERS` order."""
    return Jet4(tuple(float(x) for x in values))
