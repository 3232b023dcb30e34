import json
import math
import os
from fractions import Fraction

import numpy as np
import pytest

import sphiso


def test_shift_products():
    z, zbar = sphiso.ToeplitzElement("z"), sphiso.ToeplitzElement("zbar")
    assert zbar @ z == sphiso.ToeplitzElement.identity()
    d = z @ zbar
    assert d == sphiso.ToeplitzElement.identity() - sphiso.ToeplitzElement.unit(0, 0)
    assert not sphiso.is_toeplitz(d)
    assert sphiso.is_toeplitz(sphiso.project(d))
    assert sphiso.symbol_map(d) == sphiso.Symbol("1")


def test_truncation_matches_numpy_product():
    x = sphiso.ToeplitzElement("z^2 - 0.5*zbar", np.array([[1.0, 2j]]))
    y = sphiso.ToeplitzElement("zbar^2 + 3*z")
    big = x.truncation(40) @ y.truncation(40)
    assert np.abs(big[:16, :16] - (x @ y).truncation(16)).max() <= 1e-12


def test_semicommutator_box():
    s = sphiso.semicommutator("z^2", "zbar^3")
    assert s.symbol == sphiso.Symbol("0") or str(s.symbol) == "0"
    assert s.correction.shape[0] <= 2 and s.correction.shape[1] <= 3


def test_symbol_eval_and_spectrum():
    v = sphiso.symbol_eval("z + zbar", 8)
    assert np.allclose(v, 2 * np.cos(2 * np.pi * np.arange(8) / 8))
    assert sphiso.spectrum_membership("z", 0) == "WINDING_NONZERO"
    assert sphiso.spectrum_membership("z + zbar", 1j) == "OUTSIDE"
    assert sphiso.spectrum_membership("3", 3) == "ON_CURVE"


def test_cross_section_closed_form():
    ns, lower, sup = sphiso.cross_section_norms("z + zbar", 256)
    for n, v in zip(ns, lower):
        assert abs(v - 2 * math.cos(math.pi / (n + 1))) <= 1e-10
    assert sup == pytest.approx(2.0)


def test_sphere_model():
    assert sphiso.sphere_moment(2, [1, 0]) == Fraction(1, 2)
    assert sphiso.sphere_moment(3, [2, 1, 0]) == Fraction(1, 30)
    d = sphiso.szego_defect(2, 10)
    assert d["interior"] <= 1e-12 and d["commutator"] <= 1e-12
    interior, _ = sphiso.sphere_fixed_point_residual("z1*zbar2 + zbar1*z2", 2, 10)
    assert interior <= 1e-10


def test_gamma_equation():
    T = sphiso.ToeplitzElement
    r = sphiso.gamma_residual([(T("z + 2*zbar^2"), T("1 - z^3"))])
    assert r["zero"] and r["verdict"] == "TOEPLITZ"
    e = sphiso.gamma_residual([(T.unit(0, 0), T.identity())])
    lo, hi = e["bracket"]
    assert lo <= 1 + 1e-12 and hi >= 1 - 1e-12


def test_weighted_hardy_lebesgue():
    a = sphiso.weighted_toeplitz("z + 0.5*zbar^2", {0: 1.0}, 12)
    assert np.array_equal(a, sphiso.ToeplitzElement("z + 0.5*zbar^2").truncation(13))
    with pytest.raises(sphiso.PreconditionError):
        sphiso.weighted_toeplitz("z", {0: 1.0, 1: 0.9}, 12)


def test_errors():
    with pytest.raises(sphiso.ParseError):
        sphiso.Symbol("z +")
    with pytest.raises(sphiso.UsageError, match="tolerances"):
        sphiso.run_scenario({"name": "x", "tolerances": {"exact": 0}})
    with pytest.raises(sphiso.UsageError, match="closure_homomorphism"):
        sphiso.explain("nope")


def test_smoke_scenario_deterministic():
    src = os.environ.get("SPHISO_SOURCE_DIR", os.path.join(os.path.dirname(__file__), "..", ".."))
    with open(os.path.join(src, "scenarios", "smoke.json")) as f:
        scenario = json.load(f)
    a = sphiso.run_scenario(scenario)
    b = sphiso.run_scenario(dict(scenario, threads=3))
    assert a["summary"]["verdict"] == "PASS"
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "statement: " in sphiso.explain("thm2_1_identities")
    assert len(sphiso.check_ids()) == 16
