"""Symmetric thermodynamic processes: the slope cubic, its roots, and curves.

A process direction X = d/de + q d/dv annihilates the skewness form exactly
when q solves

    S_vvv q^3 + 3 S_evv q^2 + 3 S_eev q + S_eee = 0.

:func:`cubic_at` assembles those coefficients from the entropy partials,
:func:`solve_cubic` classifies and returns the real roots (depressed-cubic
trigonometric/Cardano branches, one Newton polish per root), and
:func:`integrate_process` traces the curve of a chosen root branch with a
fixed-step classic Runge-Kutta integrator, following the branch by
nearest-root matching (sorted indices swap when roots cross).

Discriminants are reported for the variable-balanced, max-normalized cubic
(see :func:`balanced_discriminant`), which makes the boundary band
|disc| <= 1e-10 scale-free in both the coefficients and the root variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .entropy import EntropyModel
from .exceptions import AllZeroCubicError, DomainError
from .forms import homogeneous_value, sigma3

__all__ = [
    "CubicCoeffs",
    "RootSet",
    "RootCount",
    "ProcessCurve",
    "cubic_at",
    "solve_cubic",
    "root_count",
    "integrate_process",
    "cubic_discriminant",
    "balanced_discriminant",
    "DISC_BOUNDARY_BAND",
]

#: Band on the normalized discriminant inside which a point counts as boundary.
DISC_BOUNDARY_BAND = 1e-10

_UNIT = (1.0, 1.0, 1.0, 1.0)
_DEGENERATE_LEAD = 1e-12
_ALL_ZERO = 1e-300


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of the slope cubic, c3 q^3 + c2 q^2 + c1 q + c0."""

    c3: float
    c2: float
    c1: float
    c0: float

    def value(self, q: float) -> float:
        # Same operation order as SymForm3 evaluation on (1, q), so the two
        # modules agree bit-for-bit.
        return homogeneous_value((self.c0, self.c1, self.c2, self.c3), _UNIT, 1.0, q)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.c3, self.c2, self.c1, self.c0)


@dataclass(frozen=True)
class RootSet:
    """Classified real roots of one cubic."""

    roots: Tuple[float, ...]        # ascending; distinct values only
    discriminant: float             # of the balanced, normalized cubic
    degenerate: bool                # leading coefficient fell below the band


@dataclass(frozen=True)
class RootCount:
    count: int                      # 1 or 3
    boundary: bool                  # |disc| inside the boundary band
    discriminant: float


@dataclass(frozen=True)
class ProcessCurve:
    """Polyline traced by one symmetric-process branch."""

    points: np.ndarray              # shape (m, 2): columns e, v
    reason: str                     # max_len | domain_exit | branch_lost | zero_length


def cubic_at(model: EntropyModel, e: float, v: float) -> CubicCoeffs:
    """Assemble the slope cubic from the skewness form at (e, v)."""
    s = sigma3(model, e, v).components
    return CubicCoeffs(c3=s[3], c2=3.0 * s[2], c1=3.0 * s[1], c0=s[0])


def cubic_discriminant(a, b, c, d):
    """Discriminant of a q^3 + b q^2 + c q + d; elementwise on arrays."""
    return (18.0 * a * b * c * d - 4.0 * b**3 * d + b**2 * c**2
            - 4.0 * a * c**3 - 27.0 * a**2 * d**2)


def balanced_discriminant(a, b, c, d):
    """Scale-free discriminant: balance the variable, normalize, then eval.

    Substituting q -> lam*q with lam = (|d|/|a|)^(1/3) balances the end
    coefficients, and max-normalizing removes the overall scale.  Both maps
    multiply the discriminant by a positive factor, so the sign is preserved
    while the magnitude becomes comparable across state points (a plain
    coefficient-relative band misreads badly unbalanced cubics, e.g. the
    ideal-gas one with |q*| far from 1, as boundary cases).
    """
    balance = (a != 0.0) & (d != 0.0)
    lam = np.where(balance, np.cbrt(np.abs(np.where(d != 0.0, d, 1.0))
                                    / np.abs(np.where(a != 0.0, a, 1.0))), 1.0)
    a, b, c = a * lam**3, b * lam**2, c * lam
    s = np.maximum.reduce([np.abs(a), np.abs(b), np.abs(c), np.abs(d)])
    s = np.where(s > 0.0, s, 1.0)
    return cubic_discriminant(a / s, b / s, c / s, d / s)


def _polish(a, b, c, d, q):
    f = ((a * q + b) * q + c) * q + d
    fp = (3.0 * a * q + 2.0 * b) * q + c
    if fp != 0.0 and math.isfinite(fp):
        step = f / fp
        if math.isfinite(step):
            return q - step
    return q


def solve_cubic(coeffs: CubicCoeffs) -> RootSet:
    """Real roots of the cubic, ascending.

    The solver works on max-normalized coefficients and reports the
    balanced, scale-free discriminant, so degeneracy tests mean the same
    thing at any magnitude.  When the q^3 coefficient is negligible the
    solver falls back to the quadratic/linear case and flags ``degenerate``.
    """
    raw = coeffs.as_tuple()
    scale = max(abs(x) for x in raw)
    if not scale > _ALL_ZERO:
        raise AllZeroCubicError(f"all cubic coefficients are ~0: {raw}")
    a, b, c, d = (x / scale for x in raw)
    disc = float(balanced_discriminant(*raw))

    if abs(a) < _DEGENERATE_LEAD:
        return RootSet(_solve_degenerate(b, c, d), disc, True)

    # depressed form: q = y - b/(3a), y^3 + p y + r = 0
    shift = b / (3.0 * a)
    p = c / a - b * b / (3.0 * a * a)
    r = 2.0 * b**3 / (27.0 * a**3) - b * c / (3.0 * a * a) + d / a
    disc_dep = -4.0 * p**3 - 27.0 * r * r

    if disc_dep > 0.0:
        # three distinct real roots: trigonometric branch (p < 0 here)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * r / (p * m)
        theta = math.acos(min(1.0, max(-1.0, arg)))
        ys = [m * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3)]
        roots = [_polish(a, b, c, d, y - shift) for y in ys]
    elif disc_dep < 0.0:
        # one real root: Cardano with the large-magnitude cube root first
        if p == 0.0:
            y = math.copysign(abs(r) ** (1.0 / 3.0), -r)
        else:
            sq = math.sqrt(r * r / 4.0 + p**3 / 27.0)
            big = -r / 2.0 - sq if r > 0.0 else -r / 2.0 + sq
            u = math.copysign(abs(big) ** (1.0 / 3.0), big)
            y = u - p / (3.0 * u) if u != 0.0 else 0.0
        roots = [_polish(a, b, c, d, y - shift)]
    else:
        # boundary: repeated real roots
        if p == 0.0:
            roots = [-shift]
        else:
            simple = 3.0 * r / p - shift
            double = -3.0 * r / (2.0 * p) - shift
            roots = [simple, double]
    return RootSet(tuple(sorted(roots)), disc, False)


def _solve_degenerate(b, c, d) -> Tuple[float, ...]:
    if abs(b) < _DEGENERATE_LEAD:
        if abs(c) < _DEGENERATE_LEAD:
            return ()
        return (-d / c,)
    disc = c * c - 4.0 * b * d
    if disc < 0.0:
        return ()
    if disc == 0.0:
        return (-c / (2.0 * b),)
    # cancellation-free: large-magnitude root first
    q = -(c + math.copysign(math.sqrt(disc), c)) / 2.0
    r1 = q / b
    r2 = d / q if q != 0.0 else 0.0
    return tuple(sorted((r1, r2)))


def root_count(model: EntropyModel, e: float, v: float) -> RootCount:
    """Number of symmetric-process slopes at (e, v) by discriminant sign."""
    raw = cubic_at(model, e, v).as_tuple()
    scale = max(abs(x) for x in raw)
    if not scale > _ALL_ZERO:
        raise AllZeroCubicError(f"all cubic coefficients are ~0 at ({e}, {v})")
    disc = float(balanced_discriminant(*raw))
    return RootCount(
        count=3 if disc >= 0.0 else 1,
        boundary=abs(disc) <= DISC_BOUNDARY_BAND,
        discriminant=disc,
    )


def _branch_slope(model, e, v, q_ref):
    """(slope, root count) at (e, v), picking the root nearest q_ref."""
    rs = solve_cubic(cubic_at(model, e, v))
    if not rs.roots:
        raise DomainError(f"no symmetric-process slope at ({e}, {v})")
    q = min(rs.roots, key=lambda r: abs(r - q_ref))
    return q, len(rs.roots)


def integrate_process(model: EntropyModel, start: Tuple[float, float], branch: int,
                      step: float, max_len: float) -> ProcessCurve:
    """Trace one symmetric-process branch from ``start``.

    The curve parameter is e itself (the direction field has unit d/de
    component), advanced by classic fixed-step RK4 on dv/de = q(e, v).  The
    branch is the ``branch``-th root (ascending) at the start point and is
    followed by nearest-root matching afterwards.  Integration stops at
    ``max_len`` parameter length, at the domain boundary (``domain_exit``),
    or when the number of real roots changes (``branch_lost``); the polyline
    always ends at the last valid point.
    """
    if step < 0.0 or max_len < 0.0:
        raise ValueError("step and max_len must be non-negative")
    e0, v0 = float(start[0]), float(start[1])
    model.check_domain(e0, v0)
    rs0 = solve_cubic(cubic_at(model, e0, v0))
    if not 0 <= branch < len(rs0.roots):
        raise ValueError(
            f"branch {branch} not present at {start}: {len(rs0.roots)} root(s)"
        )
    n_roots = len(rs0.roots)
    q = rs0.roots[branch]
    pts = [(e0, v0)]
    if step == 0.0 or max_len == 0.0:
        return ProcessCurve(np.array(pts), "zero_length")

    e, v = e0, v0
    t = 0.0
    reason = "max_len"
    while t < max_len * (1.0 - 1e-15):
        h = min(step, max_len - t)
        try:
            k1, _ = _branch_slope(model, e, v, q)
            k2, _ = _branch_slope(model, e + 0.5 * h, v + 0.5 * h * k1, k1)
            k3, _ = _branch_slope(model, e + 0.5 * h, v + 0.5 * h * k2, k2)
            k4, _ = _branch_slope(model, e + h, v + h * k3, k3)
            e_new = e + h
            v_new = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            model.check_domain(e_new, v_new)
            q_new, count_new = _branch_slope(model, e_new, v_new, q)
        except DomainError:
            reason = "domain_exit"
            break
        if count_new != n_roots:
            reason = "branch_lost"
            break
        e, v, q = e_new, v_new, q_new
        t += h
        pts.append((e, v))
    return ProcessCurve(np.array(pts), reason)
