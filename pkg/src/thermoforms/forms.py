"""Central-moment symmetric forms on the state surface, in (e, v) coordinates.

With I = -S, the second, third and fourth central moments of the measurement
distribution are symmetric tensors over the tangent plane spanned by
(d/de, d/dv).  In these coordinates:

* sigma2 has components  (I_ee, I_ev, I_vv)      -- the Hessian of I,
* sigma3 has components  -I_xxx, i.e. (+S_eee, +S_eev, +S_evv, +S_vvv),
* sigma4 is assembled from the I-derivative tensors I2, I3, I4 as

      sigma4(X^4) = -I4(X^4) + 3 w(X)^T (I2)^{-1} w(X) + 3 (I2(X, X))^2,

  where w(X) = I3(X, X, .) is the covector I_abc X^b X^c.  The middle term is
  what transport between the dual coordinate systems generates; dropping it
  breaks the pure-e quartic coefficient for the ideal gas, which is the
  decisive correctness check (see the test suite).

sigma4 has a genuine pole where sigma2 degenerates (det = 0 within the
relative band 1e-12); :func:`sigma4` raises ``SingularSigma2Error`` there.

A fully symmetric rank-k tensor over 2 dimensions is stored as k+1
independent components indexed by how many slots carry d/dv; evaluating on a
vector X = (x1, x2) gives the associated homogeneous degree-k polynomial with
binomial multiplicities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple, Union

import numpy as np

from .entropy import EntropyModel
from .exceptions import DimensionMismatchError, SingularSigma2Error

__all__ = [
    "SymForm2",
    "SymForm3",
    "SymForm4",
    "sigma2",
    "sigma3",
    "sigma4",
    "sigma4_components",
    "sigma2_degenerate",
    "central_from_raw",
    "homogeneous_value",
    "SIGMA2_DEGENERACY_BAND",
]

#: Relative band on |det sigma2| below which the form counts as degenerate.
SIGMA2_DEGENERACY_BAND = 1e-12


def homogeneous_value(components: Sequence[float], binomials: Sequence[float],
                      x1: float, x2: float) -> float:
    """Evaluate sum_k (binomials[k]*components[k]) * x2^k * x1^(deg-k).

    The operation order is fixed (powers by iterated multiplication, terms
    accumulated in ascending k) so that two callers holding the same numbers
    produce bit-identical results.
    """
    deg = len(components) - 1
    x1p = [1.0] * (deg + 1)
    x2p = [1.0] * (deg + 1)
    for k in range(1, deg + 1):
        x1p[k] = x1p[k - 1] * x1
        x2p[k] = x2p[k - 1] * x2
    acc = 0.0
    for k in range(deg + 1):
        acc = acc + ((binomials[k] * components[k]) * x2p[k]) * x1p[deg - k]
    return acc


@dataclass(frozen=True)
class _SymForm:
    components: Tuple[float, ...]

    DEGREE: ClassVar[int] = 0
    BINOMIALS: ClassVar[Tuple[float, ...]] = ()

    def __post_init__(self):
        if len(self.components) != self.DEGREE + 1:
            raise ValueError(
                f"rank-{self.DEGREE} form needs {self.DEGREE + 1} components, "
                f"got {len(self.components)}"
            )
        object.__setattr__(self, "components", tuple(float(c) for c in self.components))

    def __call__(self, x: Sequence[float]) -> float:
        """Value of the form on the vector X = (x1, x2), all slots equal."""
        x1, x2 = x
        return homogeneous_value(self.components, self.BINOMIALS, float(x1), float(x2))

    def polynomial(self) -> Tuple[float, ...]:
        """Coefficients of g(t) = form((t, 1)), highest degree first."""
        return tuple(b * c for b, c in zip(self.BINOMIALS, self.components))


class SymForm2(_SymForm):
    """Symmetric 2-form; components (ee, ev, vv)."""

    DEGREE = 2
    BINOMIALS = (1.0, 2.0, 1.0)

    @property
    def det(self) -> float:
        ee, ev, vv = self.components
        return ee * vv - ev * ev

    def as_matrix(self) -> np.ndarray:
        ee, ev, vv = self.components
        return np.array([[ee, ev], [ev, vv]])


class SymForm3(_SymForm):
    """Symmetric 3-form; components (eee, eev, evv, vvv)."""

    DEGREE = 3
    BINOMIALS = (1.0, 3.0, 3.0, 1.0)


class SymForm4(_SymForm):
    """Symmetric 4-form; components (eeee, eeev, eevv, evvv, vvvv)."""

    DEGREE = 4
    BINOMIALS = (1.0, 4.0, 6.0, 4.0, 1.0)

    @classmethod
    def from_polynomial(cls, coeffs: Sequence[float]) -> "SymForm4":
        """Build from the quartic g(t) = form((t, 1)), highest degree first."""
        if len(coeffs) != 5:
            raise ValueError(f"need 5 polynomial coefficients, got {len(coeffs)}")
        return cls(tuple(c / b for c, b in zip(coeffs, cls.BINOMIALS)))


def sigma2_degenerate(i_ee, i_ev, i_vv):
    """Degeneracy predicate shared by sigma4 and the domain classifier.

    True where |det| <= 1e-12 * (sum of squared components); elementwise on
    arrays.
    """
    det = i_ee * i_vv - i_ev * i_ev
    scale = i_ee * i_ee + i_ev * i_ev + i_vv * i_vv
    return abs(det) <= SIGMA2_DEGENERACY_BAND * scale


def sigma2(model: EntropyModel, e: float, v: float) -> SymForm2:
    """Second central-moment form: the Hessian of I = -S at (e, v)."""
    p = model.derivatives(e, v)
    return SymForm2((-p[(2, 0)], -p[(1, 1)], -p[(0, 2)]))


def sigma3(model: EntropyModel, e: float, v: float) -> SymForm3:
    """Third central-moment (skewness) form: components -I_xxx = +S_xxx."""
    p = model.derivatives(e, v)
    return SymForm3((p[(3, 0)], p[(2, 1)], p[(1, 2)], p[(0, 3)]))


def sigma4_components(I2, I3, I4):
    """Components of sigma4 from the I-derivative tensors.

    ``I2``, ``I3``, ``I4`` are the order-2/3/4 derivative components of I
    (each indexed by v-count).  Works elementwise on arrays; callers must
    screen out degenerate sigma2 themselves (scalar userspace goes through
    :func:`sigma4`, which raises).
    """
    i_ee, i_ev, i_vv = I2
    i3 = I3
    i4 = I4
    det = i_ee * i_vv - i_ev * i_ev
    # inverse Hessian, (I2)^{-1}
    g11 = i_vv / det
    g12 = -i_ev / det
    g22 = i_ee / det

    # covectors u_ab = I3(., a, b)
    u = ((i3[0], i3[1]), (i3[1], i3[2]), (i3[2], i3[3]))  # ee, ev, vv

    def bilinear(a, b):
        return (a[0] * (g11 * b[0] + g12 * b[1])
                + a[1] * (g12 * b[0] + g22 * b[1]))

    b_ee_ee = bilinear(u[0], u[0])
    b_ee_ev = bilinear(u[0], u[1])
    b_ee_vv = bilinear(u[0], u[2])
    b_ev_ev = bilinear(u[1], u[1])
    b_ev_vv = bilinear(u[1], u[2])
    b_vv_vv = bilinear(u[2], u[2])

    return (
        -i4[0] + 3.0 * b_ee_ee + 3.0 * i_ee * i_ee,
        -i4[1] + 3.0 * b_ee_ev + 3.0 * i_ee * i_ev,
        -i4[2] + (b_ee_vv + 2.0 * b_ev_ev) + (2.0 * i_ev * i_ev + i_ee * i_vv),
        -i4[3] + 3.0 * b_ev_vv + 3.0 * i_ev * i_vv,
        -i4[4] + 3.0 * b_vv_vv + 3.0 * i_vv * i_vv,
    )


def sigma4(model: EntropyModel, e: float, v: float) -> SymForm4:
    """Fourth central-moment form at (e, v).

    Raises ``SingularSigma2Error`` where sigma2 is degenerate: the transport
    term has a pole there and the pole is physical (phase boundary), so the
    value is reported as undefined rather than extrapolated.
    """
    p = model.derivatives(e, v)
    I2 = (-p[(2, 0)], -p[(1, 1)], -p[(0, 2)])
    if sigma2_degenerate(*I2):
        raise SingularSigma2Error(
            f"sigma2 is degenerate at ({e}, {v}); sigma4 undefined"
        )
    I3 = (-p[(3, 0)], -p[(2, 1)], -p[(1, 2)], -p[(0, 3)])
    I4 = (-p[(4, 0)], -p[(3, 1)], -p[(2, 2)], -p[(1, 3)], -p[(0, 4)])
    return SymForm4(sigma4_components(I2, I3, I4))


# -- raw -> central moment conversion ---------------------------------------


def _symmetrize(t: np.ndarray) -> np.ndarray:
    k = t.ndim
    if k <= 1:
        return t
    acc = np.zeros_like(t)
    perms = list(itertools.permutations(range(k)))
    for p in perms:
        acc += np.transpose(t, p)
    return acc / len(perms)


def central_from_raw(raw: Sequence) -> Union[float, np.ndarray]:
    """Central moment sigma_k from the raw moments m_1 .. m_k.

    ``raw[i-1]`` is the rank-i raw moment tensor over a common d-dimensional
    space (scalars are accepted for d = 1).  Applies the binomial alternating
    sum  sigma_k = sum_i (-1)^(k-i) C(k, i) sym(m_i (x) m_1^(x(k-i))).
    """
    k = len(raw)
    if not 1 <= k <= 4:
        raise DimensionMismatchError(f"need 1..4 raw moments, got {k}")
    scalar_input = np.ndim(raw[0]) == 0
    tensors = []
    for i, m in enumerate(raw, start=1):
        t = np.asarray(m, dtype=float)
        if scalar_input and t.ndim == 0:
            t = t.reshape((1,) * i)
        if t.ndim != i:
            raise DimensionMismatchError(f"raw moment {i} must have rank {i}, got rank {t.ndim}")
        tensors.append(t)
    d = tensors[0].shape[0]
    for i, t in enumerate(tensors, start=1):
        if t.shape != (d,) * i:
            raise DimensionMismatchError(
                f"raw moment {i} has shape {t.shape}, expected {(d,) * i}"
            )
    m1 = tensors[0]
    acc = np.zeros((d,) * k)
    for i in range(k + 1):
        term = np.array(1.0) if i == 0 else tensors[i - 1]
        for _ in range(k - i):
            term = np.multiply.outer(term, m1)
        acc += ((-1.0) ** (k - i)) * math.comb(k, i) * _symmetrize(term)
    if scalar_input:
        return float(acc.reshape(()))
    return acc
