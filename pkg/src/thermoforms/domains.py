"""Positivity classification of the even-order forms and (T, v) grid scans.

``classify_sigma2`` applies the Sylvester test with a relative degeneracy
band; ``classify_sigma4`` decides strict positivity of the binary quartic by
Sturm root counting on g(t) = form((t, 1)) plus the two boundary directions
g(0) and the pure-e value.  ``scan`` maps a (T, v) grid to per-cell
classifications; rows are processed by independent workers (capped by the
THERMOFORMS_THREADS environment variable) and results are assembled in row
order, so output is deterministic regardless of worker count.

Class labels:

* sigma2: ``positive_definite`` | ``degenerate`` | ``indefinite_or_negative``
* sigma4: ``positive_definite`` | ``degenerate`` | ``not_positive`` |
  ``undefined_pole`` (exactly where sigma2 is degenerate: the formula's pole)

For the reduced van der Waals model the sigma2 degeneracy locus is the curve
T = (3v - 1)^2 / (4 v^3), exposed as :func:`vdw_spinodal_temperature`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterator, List, Optional, Tuple, Union

import numpy as np

from .entropy import EntropyModel, IdealGas, VanDerWaalsReduced
from .exceptions import DomainError
from .forms import (SIGMA2_DEGENERACY_BAND, SymForm2, SymForm4,
                    sigma4_components)
from .processes import DISC_BOUNDARY_BAND, balanced_discriminant

__all__ = [
    "SIGMA2_CLASSES",
    "SIGMA4_CLASSES",
    "GridSpec",
    "DomainCell",
    "ScanResult",
    "classify_sigma2",
    "classify_sigma4",
    "count_quartic_real_roots",
    "scan",
    "vdw_spinodal_temperature",
]

SIGMA2_CLASSES = ("positive_definite", "degenerate", "indefinite_or_negative")
SIGMA4_CLASSES = ("positive_definite", "degenerate", "not_positive", "undefined_pole")

_S2_PD, _S2_DEGENERATE, _S2_INDEFINITE = 0, 1, 2
_S4_PD, _S4_DEGENERATE, _S4_NOT_POSITIVE, _S4_POLE = 0, 1, 2, 3

_QUARTIC_BAND = 1e-12


def vdw_spinodal_temperature(v):
    """Temperature of the sigma2-degeneracy curve of the reduced vdW model."""
    return (3.0 * v - 1.0) ** 2 / (4.0 * v**3)


def classify_sigma2(form: SymForm2) -> str:
    """Sylvester test with a relative degeneracy band on the determinant."""
    ee, ev, vv = form.components
    det = ee * vv - ev * ev
    scale = ee * ee + ev * ev + vv * vv
    if abs(det) <= SIGMA2_DEGENERACY_BAND * scale:
        return SIGMA2_CLASSES[_S2_DEGENERATE]
    if ee > 0.0 and det > 0.0:
        return SIGMA2_CLASSES[_S2_PD]
    return SIGMA2_CLASSES[_S2_INDEFINITE]


# -- quartic positivity by Sturm sequences -----------------------------------


def _trim(poly: List[float], tol: float) -> List[float]:
    k = 0
    while k < len(poly) - 1 and abs(poly[k]) <= tol:
        k += 1
    return poly[k:]


def _poly_rem(num: List[float], den: List[float]) -> List[float]:
    """Remainder of num/den, both highest-first, deg(den) >= 1."""
    rem = list(num)
    dn = len(den) - 1
    lead = den[0]
    while len(rem) - 1 >= dn:
        f = rem[0] / lead
        for i in range(1, len(den)):
            rem[i] -= f * den[i]
        rem.pop(0)
        if not rem:
            break
    return rem


def count_quartic_real_roots(poly) -> int:
    """Distinct real roots of a polynomial (degree <= 4, highest first).

    Uses a Sturm chain; repeated factors end the chain at the gcd, which
    leaves the distinct-root count intact.  Coefficients are normalized at
    every step, so the sign bookkeeping is scale-free.
    """
    scale = max(abs(c) for c in poly)
    if scale == 0.0:
        return 0
    p = _trim([c / scale for c in poly], _QUARTIC_BAND)
    deg = len(p) - 1
    if deg == 0:
        return 0
    chain = [p, [c * (deg - i) for i, c in enumerate(p[:-1])]]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        m = max((abs(c) for c in rem), default=0.0)
        if m <= _QUARTIC_BAND:
            break
        rem = _trim([-c / m for c in rem], _QUARTIC_BAND)
        chain.append(rem)
    v_pos = v_neg = 0
    s_pos_prev = s_neg_prev = 0
    for q in chain:
        d = len(q) - 1
        lead = q[0]
        s_pos = 1 if lead > 0 else -1
        s_neg = s_pos if d % 2 == 0 else -s_pos
        if s_pos_prev and s_pos != s_pos_prev:
            v_pos += 1
        if s_neg_prev and s_neg != s_neg_prev:
            v_neg += 1
        s_pos_prev, s_neg_prev = s_pos, s_neg
    return max(v_neg - v_pos, 0)


def _classify_quartic(poly) -> int:
    """Class code for the quartic g(t) coefficients (highest first)."""
    scale = max(abs(c) for c in poly)
    if scale == 0.0:
        return _S4_NOT_POSITIVE
    p = [c / scale for c in poly]
    lead, tail = p[0], p[4]
    if lead < -_QUARTIC_BAND or tail < -_QUARTIC_BAND:
        return _S4_NOT_POSITIVE
    if abs(lead) <= _QUARTIC_BAND or abs(tail) <= _QUARTIC_BAND:
        return _S4_DEGENERATE
    if count_quartic_real_roots(p) > 0:
        return _S4_NOT_POSITIVE
    return _S4_PD


def classify_sigma4(form: SymForm4) -> str:
    """Strict positivity of the quartic form on every direction.

    Positive-definite iff g(t) = form((t, 1)) has no real root, g(0) > 0 and
    the pure-e value form((1, 0)) > 0; a detected real root (crossing or
    touching) gives ``not_positive``; decision values inside the coefficient
    band give ``degenerate``.
    """
    return SIGMA4_CLASSES[_classify_quartic(list(form.polynomial()))]


# -- grid scanning -----------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linear grid lo..hi with ``steps`` sample points."""

    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"grid needs lo < hi, got {self.lo}:{self.hi}")
        if self.steps < 2:
            raise ValueError(f"grid needs at least 2 steps, got {self.steps}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / (self.steps - 1)


@dataclass(frozen=True)
class DomainCell:
    """Classification of one grid point."""

    T: float
    v: float
    e: float
    sigma2_class: str
    sigma4_class: str
    process_count: int
    process_boundary: bool
    disc: float
    boundary_flags: Tuple[str, ...]
    valid: bool

    @property
    def process_label(self) -> str:
        if not self.valid:
            return "invalid"
        return "boundary" if self.process_boundary else str(self.process_count)


_FLAG_NAMES = ("sigma2", "sigma4", "process")


class ScanResult:
    """Row-major grid of classified cells; axis 0 is T, axis 1 is v."""

    def __init__(self, model_name, t_values, v_values, e, valid, s2, s4,
                 count, count_boundary, disc, flags):
        self.model_name = model_name
        self.t_values = t_values
        self.v_values = v_values
        self.e = e
        self.valid = valid
        self.s2 = s2
        self.s4 = s4
        self.count = count
        self.count_boundary = count_boundary
        self.disc = disc
        self.flags = flags

    @property
    def shape(self) -> Tuple[int, int]:
        return self.e.shape

    def sigma2_label(self, i: int, j: int) -> str:
        return SIGMA2_CLASSES[self.s2[i, j]] if self.valid[i, j] else "invalid"

    def sigma4_label(self, i: int, j: int) -> str:
        return SIGMA4_CLASSES[self.s4[i, j]] if self.valid[i, j] else "invalid"

    def flag_names(self, i: int, j: int) -> Tuple[str, ...]:
        bits = int(self.flags[i, j])
        return tuple(name for k, name in enumerate(_FLAG_NAMES) if bits & (1 << k))

    def cell(self, i: int, j: int) -> DomainCell:
        valid = bool(self.valid[i, j])
        return DomainCell(
            T=float(self.t_values[i]),
            v=float(self.v_values[j]),
            e=float(self.e[i, j]),
            sigma2_class=self.sigma2_label(i, j),
            sigma4_class=self.sigma4_label(i, j),
            process_count=int(self.count[i, j]),
            process_boundary=bool(self.count_boundary[i, j]),
            disc=float(self.disc[i, j]),
            boundary_flags=self.flag_names(i, j),
            valid=valid,
        )

    def __iter__(self) -> Iterator[DomainCell]:
        nt, nv = self.shape
        for i in range(nt):
            for j in range(nv):
                yield self.cell(i, j)

    # -- output ---------------------------------------------------------------

    CSV_HEADER = "T,v,e,sigma2_class,sigma4_class,process_count,disc,boundary_flags"

    def write_csv(self, out: Union[str, IO[str]]) -> None:
        close = False
        if isinstance(out, (str, os.PathLike)):
            out = open(out, "w", encoding="utf-8", newline="\n")
            close = True
        try:
            out.write(self.CSV_HEADER + "\n")
            fmt = _fmt_float
            nt, nv = self.shape
            for i in range(nt):
                tstr = fmt(self.t_values[i])
                for j in range(nv):
                    if self.valid[i, j]:
                        e = fmt(self.e[i, j])
                        s2 = SIGMA2_CLASSES[self.s2[i, j]]
                        s4 = SIGMA4_CLASSES[self.s4[i, j]]
                        pc = ("boundary" if self.count_boundary[i, j]
                              else str(int(self.count[i, j])))
                        disc = fmt(self.disc[i, j])
                    else:
                        e, s2, s4, pc, disc = "nan", "invalid", "invalid", "invalid", "nan"
                    flags = "|".join(self.flag_names(i, j))
                    out.write(f"{tstr},{fmt(self.v_values[j])},{e},{s2},{s4},{pc},{disc},{flags}\n")
        finally:
            if close:
                out.close()

    def to_json_obj(self) -> dict:
        cells = []
        for c in self:
            cells.append({
                "T": c.T, "v": c.v,
                "e": c.e if c.valid else None,
                "sigma2_class": c.sigma2_class,
                "sigma4_class": c.sigma4_class,
                "process_count": c.process_label,
                "disc": c.disc if c.valid else None,
                "boundary_flags": list(c.boundary_flags),
            })
        return {
            "model": self.model_name,
            "T": list(self.t_values),
            "v": list(self.v_values),
            "cells": cells,
        }


def _fmt_float(x) -> str:
    return format(float(x) + 0.0, ".17g")  # +0.0 folds -0.0 into 0.0


def _resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        env = os.environ.get("THERMOFORMS_THREADS", "").strip()
        if env:
            try:
                workers = int(env)
            except ValueError:
                raise ValueError(f"THERMOFORMS_THREADS must be an integer, got {env!r}")
        else:
            workers = os.cpu_count() or 1
    return max(1, int(workers))


def _scan_row(model: EntropyModel, T: float, v: np.ndarray):
    nv = v.size
    with np.errstate(all="ignore"):
        if T > 0.0:
            e = np.asarray(_raw_energy(model, T, v), dtype=float)
        else:
            e = np.full(nv, np.nan)
        valid = np.isfinite(e) & (T > 0.0) & _domain_mask_array(model, e, v)

    s2 = np.zeros(nv, dtype=np.int8)
    s4 = np.zeros(nv, dtype=np.int8)
    count = np.ones(nv, dtype=np.int8)
    cbound = np.zeros(nv, dtype=bool)
    disc = np.full(nv, np.nan)

    idx = np.nonzero(valid)[0]
    if idx.size:
        ev, vv_ = e[idx], v[idx]
        P = _partials_columns(model, ev, vv_)
        i_ee, i_ev, i_vv = -P[3], -P[4], -P[5]
        det = i_ee * i_vv - i_ev * i_ev
        scale = i_ee * i_ee + i_ev * i_ev + i_vv * i_vv
        degen = np.abs(det) <= SIGMA2_DEGENERACY_BAND * scale
        s2_row = np.where(degen, _S2_DEGENERATE,
                          np.where((i_ee > 0.0) & (det > 0.0), _S2_PD, _S2_INDEFINITE))
        s2[idx] = s2_row.astype(np.int8)

        # slope cubic, balanced and normalized per cell
        a, b, c, d = P[9], 3.0 * P[8], 3.0 * P[7], P[6]
        with np.errstate(all="ignore"):
            dsc = balanced_discriminant(np.asarray(a, dtype=float), np.asarray(b, dtype=float),
                                        np.asarray(c, dtype=float), np.asarray(d, dtype=float))
        disc[idx] = dsc
        count[idx] = np.where(dsc >= 0.0, 3, 1).astype(np.int8)
        cbound[idx] = np.abs(dsc) <= DISC_BOUNDARY_BAND

        # sigma4 components where sigma2 is regular
        I3 = (-P[6], -P[7], -P[8], -P[9])
        I4 = (-P[10], -P[11], -P[12], -P[13], -P[14])
        with np.errstate(all="ignore"):
            comps = sigma4_components((i_ee, i_ev, i_vv), I3, I4)
        s4_row = np.full(idx.size, _S4_POLE, dtype=np.int8)
        bins = (1.0, 4.0, 6.0, 4.0, 1.0)
        for k in np.nonzero(~degen)[0]:
            poly = [bins[m] * float(comps[m][k]) for m in range(5)]
            s4_row[k] = _classify_quartic(poly)
        s4[idx] = s4_row
    return e, valid, s2, s4, count, cbound, disc


def _raw_energy(model: EntropyModel, T: float, v: np.ndarray) -> np.ndarray:
    if isinstance(model, IdealGas):
        return np.full(v.size, 0.5 * model.n * T)
    if isinstance(model, VanDerWaalsReduced):
        with np.errstate(all="ignore"):
            return 4.0 * model.n * T / 3.0 - 3.0 / v
    # generic scalar fallback (custom models)
    out = np.full(v.size, np.nan)
    for j, vj in enumerate(v):
        try:
            out[j] = model.energy_from_T(T, float(vj))
        except DomainError:
            pass
    return out


def _partials_columns(model: EntropyModel, e: np.ndarray, v: np.ndarray):
    """Partials as 15 arrays; falls back to a scalar loop for jet-backed models."""
    try:
        return model.partials(e, v)
    except (TypeError, ValueError):
        cols = [model.partials(float(a), float(b)) for a, b in zip(e, v)]
        return tuple(np.array(c, dtype=float) for c in zip(*cols))


def _domain_mask_array(model: EntropyModel, e: np.ndarray, v: np.ndarray) -> np.ndarray:
    try:
        return np.broadcast_to(np.asarray(model.domain_mask(e, v), dtype=bool), e.shape).copy()
    except (TypeError, ValueError):
        out = np.zeros(e.shape, dtype=bool)
        for j in range(e.size):
            if np.isfinite(e[j]):
                out[j] = bool(model.domain_mask(float(e[j]), float(v[j])))
        return out


def _neighbor_flags(codes: np.ndarray) -> np.ndarray:
    flags = np.zeros(codes.shape, dtype=bool)
    d0 = codes[1:, :] != codes[:-1, :]
    flags[1:, :] |= d0
    flags[:-1, :] |= d0
    d1 = codes[:, 1:] != codes[:, :-1]
    flags[:, 1:] |= d1
    flags[:, :-1] |= d1
    return flags


def scan(model: EntropyModel, t_grid: GridSpec, v_grid: GridSpec,
         workers: Optional[int] = None) -> ScanResult:
    """Classify every point of the (T, v) grid.

    Out-of-domain cells are marked invalid and skipped, not fatal.  Cells are
    boundary-flagged where the sigma2 class, the sigma4 class, or the process
    count changes against a 4-neighbor.
    """
    t_values = t_grid.values()
    v_values = v_grid.values()
    nt, nv = t_values.size, v_values.size
    nworkers = _resolve_workers(workers)

    def run(i):
        return _scan_row(model, float(t_values[i]), v_values)

    if nworkers == 1:
        rows = [run(i) for i in range(nt)]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            rows = list(pool.map(run, range(nt)))

    e = np.stack([r[0] for r in rows])
    valid = np.stack([r[1] for r in rows])
    s2 = np.stack([r[2] for r in rows])
    s4 = np.stack([r[3] for r in rows])
    count = np.stack([r[4] for r in rows])
    cbound = np.stack([r[5] for r in rows])
    disc = np.stack([r[6] for r in rows])

    # boundary flags against 4-neighbors, invalid cells as their own class
    inv = ~valid
    s2c = np.where(inv, -1, s2).astype(np.int8)
    s4c = np.where(inv, -1, s4).astype(np.int8)
    pc = np.where(inv, -1, np.where(cbound, 2, count)).astype(np.int8)
    flags = (_neighbor_flags(s2c).astype(np.uint8)
             | (_neighbor_flags(s4c).astype(np.uint8) << 1)
             | (_neighbor_flags(pc).astype(np.uint8) << 2))

    return ScanResult(getattr(model, "name", "model"), t_values, v_values,
                      e, valid, s2, s4, count, cbound, disc, flags)
