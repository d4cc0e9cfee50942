"""Conventional fixed-size bus benchmark."""

import numpy as np
import pytest

from slambus import capacity_limit, optimize_traditional, traditional_cost


def test_optimum_at_1000(trad):
    d = optimize_traditional(trad, 1000.0)
    assert d.frequency == pytest.approx(29.489155327, rel=1e-8)
    assert d.capacity == pytest.approx(13.564308491, rel=1e-8)
    assert d.cost_total == pytest.approx(473.174247, rel=1e-7)


def test_cost_components(trad):
    d = traditional_cost(trad, 1000.0, 30.0)
    # buses are sized for the peak load section, exactly
    assert d.capacity * 30.0 == pytest.approx(1000.0 * trad.trip_ratio)
    # the cycle stretches with boarding time per run
    assert d.cycle_time == pytest.approx(trad.cycle_time
                                         + trad.board_time * 1000.0 / 30.0)
    assert d.cost_total == pytest.approx(d.cost_wait + d.cost_invehicle
                                         + d.cost_operator, rel=1e-12)
    assert d.avg_cost == pytest.approx(d.cost_total / 1000.0, rel=1e-12)


def test_optimum_beats_perturbations(trad):
    for X in (200.0, 1000.0, 5000.0):
        best = optimize_traditional(trad, X)
        for factor in (0.9, 0.95, 1.05, 1.1):
            worse = traditional_cost(trad, X, best.frequency * factor)
            assert worse.cost_total >= best.cost_total


def test_capacity_saturates(trad):
    """Optimal bus size approaches a demand-independent ceiling."""
    limit = capacity_limit(trad)
    assert limit == pytest.approx(29.8714007, rel=1e-8)
    caps = [optimize_traditional(trad, x).capacity
            for x in np.geomspace(1e3, 1e6, 7)]
    assert all(a < b for a, b in zip(caps, caps[1:]))
    assert all(c < limit for c in caps)
    assert caps[-1] == pytest.approx(limit, rel=0.01)


def test_sizing_identity(trad):
    # K f = X l/L holds to machine precision at every demand
    for X in np.geomspace(10.0, 1e6, 25):
        d = optimize_traditional(trad, X)
        assert d.capacity * d.frequency == pytest.approx(
            X * trad.trip_ratio, rel=1e-12)
