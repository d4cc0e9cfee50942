"""Grid-search oracle and closed-form cross validation."""

import numpy as np
import pytest

from slambus import (compare, constraint_violations, evaluate_cost,
                     grid_search, optimize_core, optimize_mobile,
                     random_scenario)
from slambus.design import strategy_context


def test_oracle_agrees_at_reference_point(params, stats):
    closed = optimize_core(params, stats, 1000.0)
    grid = grid_search(params, stats, 1000.0)
    rep = compare(closed, grid)
    assert rep.feasible_match
    # closed form may only ever be cheaper than a finite grid
    assert rep.cost_gap_rel <= 0.005
    assert abs(rep.f_gap) < 0.5
    assert abs(rep.p_gap) < 0.1


def test_oracle_refines_towards_closed_form(params, stats):
    closed = optimize_core(params, stats, 1400.0)
    coarse = grid_search(params, stats, 1400.0, f_points=2000, p_points=200)
    fine = grid_search(params, stats, 1400.0, f_points=20000, p_points=2000)
    assert fine.cost <= coarse.cost + 1e-12
    assert abs(fine.cost - closed.cost_total) <= abs(coarse.cost
                                                     - closed.cost_total) + 1e-12


def test_oracle_never_beats_closed_form_on_random_scenarios(params):
    rng = np.random.default_rng(424242)
    for strategy in ("core", "depot", "mobile"):
        for _ in range(5):
            p, st, en, demand = random_scenario(rng, strategy)
            if strategy == "core":
                closed = optimize_core(p, st, demand)
            else:
                from slambus import optimize_depot
                closed = (optimize_depot if strategy == "depot"
                          else optimize_mobile)(p, st, en, demand)
            grid = grid_search(p, st, demand, strategy, en)
            rep = compare(closed, grid)
            assert rep.feasible_match
            assert rep.cost_gap_rel <= 0.005


def test_constraint_tags(params, stats, energy):
    # each constraint violated in isolation gets its own tag
    assert constraint_violations(params, stats, 1000.0, 60.0, 4.0) \
        == ["min_headway"]
    assert constraint_violations(params, stats, 1000.0, 2.0, 14.0) \
        == ["max_headway"]
    assert constraint_violations(params, stats, 1000.0, 25.0, 1.2) \
        == ["min_pods"]
    assert constraint_violations(params, stats, 1000.0, 20.0, 2.0) \
        == ["capacity"]
    assert constraint_violations(params, stats, 1000.0, 30.0, 8.0,
                                 "mobile", energy) == ["energy"]
    assert constraint_violations(params, stats, 1000.0, 25.0, 2.0) == []


def test_perturbed_designs_cost_more(params, stats):
    grid = grid_search(params, stats, 900.0)
    for df, dp in ((1.2, 1.0), (1.0, 1.3), (0.9, 1.1)):
        bad = evaluate_cost(params, 900.0, grid.frequency * df,
                            max(2.0, grid.pods * dp))
        if not constraint_violations(params, stats, 900.0, bad.frequency,
                                     bad.pods):
            assert bad.cost_total >= grid.cost - 1e-9


def test_both_sides_infeasible_count_as_agreement(params, stats):
    closed = optimize_core(params, stats, 9000.0)
    grid = grid_search(params, stats, 9000.0)
    assert not grid.feasible
    assert grid.reason == closed.stage.reason
    rep = compare(closed, grid)
    assert rep.feasible_match
    assert rep.cost_gap_rel == 0.0


def test_random_scenarios_are_feasible_by_construction():
    rng = np.random.default_rng(7)
    for strategy in ("core", "depot", "mobile"):
        p, st, en, demand = random_scenario(rng, strategy)
        ctx = strategy_context(p, st, strategy, en)
        assert demand < ctx.headway_window_limit()
