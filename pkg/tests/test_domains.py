"""Positivity classification and grid scanning."""

import io

import numpy as np
import pytest

from helpers import unit_circle_min
from thermoforms.domains import (GridSpec, classify_sigma2, classify_sigma4,
                                 count_quartic_real_roots, scan,
                                 vdw_spinodal_temperature)
from thermoforms.entropy import IdealGas, VanDerWaalsReduced
from thermoforms.forms import SymForm2, SymForm4, sigma2, sigma4


def test_classify_sigma2_examples():
    rng = np.random.default_rng(51)
    m = IdealGas(3.0)
    for _ in range(50):
        e, v = rng.uniform(0.1, 10.0, size=2)
        assert classify_sigma2(sigma2(m, e, v)) == "positive_definite"
    vdw = VanDerWaalsReduced(3.0)
    # critical point: spinodal touches it, determinant exactly zero
    e = vdw.energy_from_T(1.0, 1.0)
    assert classify_sigma2(sigma2(vdw, e, 1.0)) == "degenerate"
    # below the spinodal at v = 2 (T_spin = 25/32)
    assert vdw_spinodal_temperature(2.0) == pytest.approx(25.0 / 32.0, rel=1e-15)
    e = vdw.energy_from_T(0.5, 2.0)
    assert classify_sigma2(sigma2(vdw, e, 2.0)) == "indefinite_or_negative"
    assert classify_sigma2(SymForm2((-1.0, 0.0, -2.0))) == "indefinite_or_negative"


def test_classify_sigma4_examples():
    # ideal gas at (1, 1), n = 3: quartic coefficients (15.75, 0, 9, 0, 9)
    f = sigma4(IdealGas(3.0), 1.0, 1.0)
    assert f.polynomial() == (15.75, 0.0, 9.0, 0.0, 9.0)
    assert classify_sigma4(f) == "positive_definite"
    # t^4 - t^2 + 1 has minimum 3/4 > 0
    assert classify_sigma4(SymForm4.from_polynomial((1, 0, -1, 0, 1))) == "positive_definite"
    # (t^2 - 1)^2 touches zero: double real roots
    assert classify_sigma4(SymForm4.from_polynomial((1, 0, -2, 0, 1))) == "not_positive"
    # strictly negative somewhere
    assert classify_sigma4(SymForm4.from_polynomial((1, 0, -3, 0, 1))) == "not_positive"
    assert classify_sigma4(SymForm4.from_polynomial((-1, 0, 0, 0, 1))) == "not_positive"
    # zero in a coordinate direction within the band
    assert classify_sigma4(SymForm4.from_polynomial((0.0, 0, 1, 0, 1))) == "degenerate"
    assert classify_sigma4(SymForm4.from_polynomial((1, 0, 1, 0, 0.0))) == "degenerate"
    assert classify_sigma4(SymForm4((0.0,) * 5)) == "not_positive"


def test_quartic_root_counting():
    assert count_quartic_real_roots([1.0, 0.0, 2.0, 0.0, 1.0]) == 0     # (t^2+1)^2
    assert count_quartic_real_roots([1.0, 0.0, -2.0, 0.0, 1.0]) == 2    # (t^2-1)^2
    assert count_quartic_real_roots([1.0, 0.0, -5.0, 0.0, 4.0]) == 4    # (t^2-1)(t^2-4)
    assert count_quartic_real_roots([1.0, 0.0, -1.0, 0.0, 1.0]) == 0
    assert count_quartic_real_roots([1.0, -1.0]) == 1                   # linear
    assert count_quartic_real_roots([0.0, 1.0, 0.0, 0.0, -8.0]) == 1    # cubic t^3=8
    assert count_quartic_real_roots([1.0, 0.0, 0.0, 0.0, 0.0]) == 1     # t^4


def test_classifier_agrees_with_direction_sampler():
    # spec-level invariant: agreement with dense unit-circle sampling except
    # inside the sampler's own tolerance band
    rng = np.random.default_rng(52)
    checked = 0
    for _ in range(1000):
        comps = rng.normal(size=5) * 10.0 ** rng.integers(-2, 3)
        form = SymForm4(tuple(comps))
        label = classify_sigma4(form)
        poly = form.polynomial()
        m = unit_circle_min(poly)
        scale = max(abs(c) for c in poly)
        if m > 1e-6 * scale:
            assert label == "positive_definite"
            checked += 1
        elif m < -1e-6 * scale:
            assert label == "not_positive"
            checked += 1
    assert checked > 900


def test_spinodal_curve_values():
    assert vdw_spinodal_temperature(1.0) == 1.0
    v = np.linspace(0.4, 10.0, 5000)
    t = vdw_spinodal_temperature(v)
    assert np.all(t > 0)
    # global maximum sits at the critical point (T, v) = (1, 1)
    assert t.max() <= 1.0
    assert t.max() == pytest.approx(1.0, abs=1e-5)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1.0, 0.5, 10)
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 1)
    g = GridSpec(0.0, 1.0, 5)
    assert np.allclose(g.values(), [0.0, 0.25, 0.5, 0.75, 1.0])
    assert g.width == 0.25


def test_scan_ideal_gas_all_applicable():
    res = scan(IdealGas(3.0), GridSpec(0.5, 2.0, 24), GridSpec(0.5, 2.0, 24))
    assert res.valid.all()
    assert (res.s2 == 0).all()
    assert (res.s4 == 0).all()
    assert (res.count == 1).all()
    assert not res.count_boundary.any()


def test_scan_marks_invalid_cells():
    # v below 1/3 is outside the van der Waals domain
    res = scan(VanDerWaalsReduced(3.0), GridSpec(0.5, 1.0, 6), GridSpec(0.2, 0.5, 7))
    assert (~res.valid).any() and res.valid.any()
    cols_invalid = res.v_values < 1.0 / 3.0
    assert (~res.valid[:, cols_invalid]).all()
    assert res.valid[:, ~cols_invalid].all()
    cell = res.cell(0, 0)
    assert not cell.valid
    assert cell.sigma2_class == "invalid" and cell.process_label == "invalid"


def test_scan_sigma2_boundary_tracks_spinodal():
    res = scan(VanDerWaalsReduced(3.0), GridSpec(0.4, 1.2, 120), GridSpec(0.5, 4.0, 120))
    s2b = (res.flags & 1).astype(bool) & res.valid
    assert s2b.any()
    dT = res.t_values[1] - res.t_values[0]
    dv = res.v_values[1] - res.v_values[0]
    for i, j in zip(*np.nonzero(s2b)):
        T, v = res.t_values[i], res.v_values[j]
        ts = vdw_spinodal_temperature(v)
        slack = dT + max(abs(vdw_spinodal_temperature(v + dv) - ts),
                         abs(vdw_spinodal_temperature(v - dv) - ts))
        assert abs(T - ts) <= slack


def test_scan_pole_exactly_at_degenerate_sigma2():
    # invariant: sigma4 class is undefined_pole exactly where sigma2 degenerates
    res = scan(VanDerWaalsReduced(3.0), GridSpec(0.4, 1.2, 80), GridSpec(0.5, 4.0, 80))
    degen = res.valid & (res.s2 == 1)
    pole = res.valid & (res.s4 == 3)
    assert np.array_equal(degen, pole)


def test_scan_resolution_stability():
    # refining 2x keeps classes at coincident points except boundary cells
    m = VanDerWaalsReduced(3.0)
    t, v = GridSpec(0.5, 1.2, 40), GridSpec(0.6, 4.0, 40)
    r1 = scan(m, t, v)
    r2 = scan(m, GridSpec(t.lo, t.hi, 79), GridSpec(v.lo, v.hi, 79))
    assert np.allclose(r2.t_values[::2], r1.t_values, rtol=0, atol=1e-12)
    for i in range(40):
        for j in range(40):
            if res_flags_any(r1, i, j):
                continue
            assert r1.s2[i, j] == r2.s2[2 * i, 2 * j]
            assert r1.s4[i, j] == r2.s4[2 * i, 2 * j]
            assert r1.count[i, j] == r2.count[2 * i, 2 * j]


def res_flags_any(res, i, j):
    return res.flags[i, j] != 0


def test_scan_csv_shape_and_determinism():
    m = VanDerWaalsReduced(3.0)
    out1, out2 = io.StringIO(), io.StringIO()
    scan(m, GridSpec(0.5, 1.0, 8), GridSpec(0.5, 2.0, 9), workers=1).write_csv(out1)
    scan(m, GridSpec(0.5, 1.0, 8), GridSpec(0.5, 2.0, 9), workers=5).write_csv(out2)
    text = out1.getvalue()
    assert text == out2.getvalue()
    lines = text.strip().split("\n")
    assert lines[0] == "T,v,e,sigma2_class,sigma4_class,process_count,disc,boundary_flags"
    assert len(lines) == 1 + 8 * 9
    first = lines[1].split(",")
    assert len(first) == 8
    float(first[0]), float(first[1]), float(first[2])


def test_scan_json_shape():
    res = scan(IdealGas(3.0), GridSpec(0.5, 1.0, 3), GridSpec(0.5, 1.0, 3))
    doc = res.to_json_obj()
    assert set(doc) == {"model", "T", "v", "cells"}
    assert len(doc["cells"]) == 9
    cell = doc["cells"][0]
    assert set(cell) == {"T", "v", "e", "sigma2_class", "sigma4_class",
                         "process_count", "disc", "boundary_flags"}


def test_scan_supports_custom_jet_models():
    # jet-backed models cannot vectorize; the scalar fallback must agree
    # with the closed-form ideal gas cell for cell
    import thermoforms.jets as jets
    from thermoforms.entropy import CustomModel

    n = 3.0
    custom = CustomModel(lambda ej, vj: jets.log(jets.power(ej, n / 2.0) * vj),
                         domain=lambda e, v: e > 0 and v > 0, name="custom ideal")
    t, v = GridSpec(0.5, 1.5, 6), GridSpec(0.5, 1.5, 6)
    ref = scan(IdealGas(n), t, v)
    got = scan(custom, t, v)
    assert np.array_equal(got.valid, ref.valid)
    assert np.array_equal(got.s2, ref.s2)
    assert np.array_equal(got.s4, ref.s4)
    assert np.array_equal(got.count, ref.count)
    assert np.allclose(got.e, ref.e, rtol=1e-12)


def test_workers_env_override(monkeypatch):
    monkeypatch.setenv("THERMOFORMS_THREADS", "2")
    res = scan(IdealGas(3.0), GridSpec(0.5, 1.0, 4), GridSpec(0.5, 1.0, 4))
    assert res.valid.all()
    monkeypatch.setenv("THERMOFORMS_THREADS", "junk")
    with pytest.raises(ValueError):
        scan(IdealGas(3.0), GridSpec(0.5, 1.0, 4), GridSpec(0.5, 1.0, 4))
