"""End-to-end smoke of the python surface: every wrapper gets one call, values are
checked against the closed forms the C++ test suite pins down in detail."""

import math

import pytest

import instanton


def test_command_registry():
    names = set(instanton.commands())
    assert {"adhm-check", "charge", "asd-check", "k1-closed-form", "link",
            "don1", "delta-limits", "euler", "reducible-check", "vanish"} <= names


def test_sample_charge_pipeline():
    datum = instanton.sample_adhm(1, seed=5)
    assert datum["k"] == 1
    assert instanton.moment_residual(datum) < 1e-8
    value, error = instanton.charge(datum, budget=60_000)
    assert abs(value - 1.0) < 1e-2
    assert error < 1e-2
    x = [0.3, -0.1, 0.2, 0.4]
    assert instanton.asd_residual(datum, x) < 1e-8
    assert instanton.c2_density(datum, x) > 0.0  # charge density is positive for ASD data


def test_scenario_run_and_plotdata():
    code, doc = instanton.run("euler", {"k_max": 3})
    assert code == 0
    assert doc["command"] == "euler"
    csv = instanton.plotdata(doc)
    lines = csv.strip().splitlines()
    assert lines[0].count(",") >= 1  # header plus one column per field
    assert len(lines) > 1


def test_euler_closed_form():
    exponent, coefficient = instanton.euler_class(2, 1)
    assert exponent == 8
    assert coefficient == pytest.approx((2 * math.pi) ** -8, rel=1e-12)


def test_gauss_link_hopf():
    # circle rotated into the (x1,x4)-plane, threading the unit sphere2
    rot = [[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]]
    a = {"kind": "circle", "radius": 0.6,
         "frame": {"rotation": rot, "offset": [0.8, 0.0, 0.0, 0.0]}}
    b = {"kind": "sphere2", "radius": 1.0}
    value, error, nearest = instanton.gauss_link(a, b)
    assert abs(nearest) == 1
    assert value == pytest.approx(nearest, abs=1e-2)
    assert error < 1e-2


def test_vanishing_scan():
    report = instanton.verify_vanishing(2, 2, 6)
    assert report["pass"] is True
    assert report["certificates"] == 0
    assert report["dims_scanned"] > 0


def test_errors_are_instanton_errors():
    with pytest.raises(instanton.InstantonError):
        instanton.charge({"k": "nope"})
    with pytest.raises(instanton.InstantonError):
        instanton.run("no-such-scenario")
