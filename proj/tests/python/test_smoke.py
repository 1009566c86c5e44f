"""Smoke tests for the python bindings against known closed-form values."""

import math

import pytest

import leafspace


def polar(r, theta_turns):
    return [r * math.cos(2 * math.pi * theta_turns), r * math.sin(2 * math.pi * theta_turns)]


def test_scenario_catalog():
    names = leafspace.scenario_names()
    assert "wedge" in names and "full_disc" in names
    sc = leafspace.scenario("wedge", n=4)
    assert sc.n == 4
    assert sc.group_dim == 1
    with pytest.raises(leafspace.LeafspaceError):
        leafspace.scenario("moebius")


def test_flow_escape_matches_the_interval():
    sc = leafspace.scenario("wedge", n=4)
    out = leafspace.flow(sc, [1.0], 4.0, polar(1.5, 0.5))
    assert not out["reached"]
    assert abs(out["escape_parameter"] - 1.0) <= 1e-3

    full = leafspace.scenario("full_disc", n=4)
    back = leafspace.flow(full, [1.0], 4.0, polar(1.0, 0.25))
    assert back["reached"]
    assert math.dist(back["endpoint"], polar(1.0, 0.25)) <= 1e-6


def test_lift_and_leaf_range():
    sc = leafspace.scenario("wedge", n=4)
    r = leafspace.lift(sc, [0.9], polar(1.5, 0.5))
    assert r["liftable"]
    assert math.dist(r["point_end"], polar(1.5, 0.725)) <= 1e-6

    lr = leafspace.leaf_range(sc, polar(1.5, 0.5))
    assert not lr["complete"]
    assert abs(lr["t_plus"] - 1.0) <= 1e-3
    assert abs(lr["t_minus"] + 1.0) <= 1e-3


def test_recurrence_orbit_count():
    full = leafspace.scenario("full_disc", n=4)
    members = leafspace.recurrence(full, polar(1.0, 0.1), budget=8)
    assert len(members) == 4

    line = leafspace.scenario("full_disc", n=4, group="line")
    assert len(leafspace.recurrence(line, polar(1.0, 0.1), budget=8)) == 1


def test_isotropy_at_the_center():
    sc = leafspace.scenario("wedge", n=4)
    rep = leafspace.uniformity(sc, [0.0, 0.0], radius=0.05, budget=8)
    assert rep["isotropy_order"] == 4
    assert rep["uniform"] and rep["properly_discontinuous"]


def test_run_reports_and_exit_codes():
    code, report = leafspace.run(command="example", example="full_disc", n=4,
                                 recurrence=True, at=polar(1.0, 0.1), seed=7)
    assert code == 0
    assert len(report["residuals"]["recurrence"]["members"]) == 4

    code2, report2 = leafspace.run(command="example", example="full_disc", n=4,
                                   recurrence=True, at=polar(1.0, 0.1), seed=7)
    report.pop("timestamp")
    report2.pop("timestamp")
    assert report == report2

    bad, _ = leafspace.run(command="example", example="unknown_name")
    assert bad == 2
