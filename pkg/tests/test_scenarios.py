"""Scenario descriptions, the verdict classifier and the prediction layer."""

import math

import numpy as np
import pytest

from degenlog.evolve import EquationParams, SchemeConfig, Trajectory
from degenlog.geometry import (DomainSpec, JumpingSets, NuProfile, SetShape,
                               StaticSet)
from degenlog.scenarios import (ClassifyConfig, InitialData, OutputPlan,
                                REGISTRY_LABELS, Scenario, classify,
                                cross_check, predict, realize_initial,
                                registry, run_scenario, scenario_grid)

DOM = DomainSpec.rectangle((0.0, 0.0), (2.0, 2.0))
NU = NuProfile(kind="saturating", nu_max=1.0, d_ramp=0.05, n_empty=1.0)


def _scenario(**kw):
    base = dict(
        label="t",
        domain=DOM,
        resolution=16,
        params=EquationParams(lam=5.0, rho=2.0, nu=NU,
                              moving_set=StaticSet(SetShape.ball((1, 1), 0.3))),
        scheme=SchemeConfig(dt=2e-3),
        t0=0.0,
        t_end=1.0,
        initial=InitialData.constant(1.0),
    )
    base.update(kw)
    return Scenario(**base)


def _traj(sups, cap=1e5, cap_hit=None):
    sups = list(sups)
    return Trajectory(times=list(np.arange(len(sups), dtype=float)),
                      sup_norms=sups, l2_norms=sups, masses=sups,
                      cap_hit=cap_hit, growth_cap=cap)


class TestInitialData:
    def test_constant_positive_only(self):
        with pytest.raises(ValueError):
            InitialData.constant(0.0)

    def test_bump_validation(self):
        with pytest.raises(ValueError):
            InitialData.bump((1, 1), 0.0, 1.0)

    def test_realize_constant(self):
        s = _scenario()
        g = scenario_grid(s)
        u0 = realize_initial(s, g)
        assert u0.sup_norm() == 1.0
        assert np.all(u0.values[~g.mask] == 0.0)

    def test_realize_bump_support_and_height(self):
        s = _scenario(initial=InitialData.bump((1.0, 1.0), 0.4, 2.0))
        g = scenario_grid(s)
        u0 = realize_initial(s, g)
        pts = g.points()
        far = np.linalg.norm(pts - (1.0, 1.0), axis=1).reshape(g.shape) > 0.4
        assert np.all(u0.values[far] == 0.0)
        assert u0.sup_norm() == pytest.approx(2.0, rel=0.1)

    def test_realize_eigenfunction_normalized_height(self):
        s = _scenario(resolution=32,
                      initial=InitialData.eigenfunction(
                          SetShape.ball((1.0, 1.0), 0.5), height=3.0))
        g = scenario_grid(s)
        u0 = realize_initial(s, g)
        assert u0.sup_norm() == pytest.approx(3.0)


class TestScenarioValidation:
    def test_reversed_times(self):
        with pytest.raises(ValueError):
            _scenario(t0=2.0, t_end=1.0)

    def test_scheme_incompatible_with_lam(self):
        with pytest.raises(ValueError):
            _scenario(params=EquationParams(lam=400.0, rho=2.0),
                      scheme=SchemeConfig(dt=2e-3))

    def test_hint_lookup(self):
        s = _scenario(hints=(("gamma", 1.5),))
        assert s.hint("gamma") == 1.5
        assert s.hint("missing", 7) == 7

    def test_moving_set_must_stay_inside_domain(self):
        s = _scenario(params=EquationParams(
            lam=5.0, rho=2.0, nu=NU,
            moving_set=StaticSet(SetShape.ball((0.1, 0.1), 0.3))))
        with pytest.raises(ValueError):
            run_scenario(s)


class TestClassify:
    def test_needs_enough_records(self):
        with pytest.raises(ValueError):
            classify(_traj([1.0] * 10))

    def test_decay(self):
        sups = list(np.geomspace(1.0, 1e-8, 60))
        v = classify(_traj(sups))
        assert v.kind == "decay"
        assert v.is_bounded_kind

    def test_plateau_bounded(self):
        sups = list(np.linspace(1.0, 3.0, 30)) + [3.0] * 40
        v = classify(_traj(sups))
        assert v.kind == "bounded"
        assert v.bound_estimate == pytest.approx(3.0)

    def test_cap_with_growing_tail_is_grow_up(self):
        sups = list(np.geomspace(1.0, 2e5, 80))
        v = classify(_traj(sups, cap=1e5, cap_hit=79.0))
        assert v.kind == "grow_up"
        assert v.cap_hit_time == 79.0

    def test_cap_without_net_growth_is_inconclusive(self):
        # plateau brushing the cap: exceedance without sustained net growth
        sups = [9e4] * 79 + [1.1e5]
        v = classify(_traj(sups, cap=1e5, cap_hit=79.0))
        assert v.kind == "inconclusive"

    def test_wandering_below_running_max_is_bounded(self):
        # multistable forced pattern: an early peak, then hops between lower
        # plateau levels — bounded via the running-maximum reading
        sups = ([1.0] * 10 + [500.0] * 10
                + ([300.0] * 10 + [450.0] * 10 + [350.0] * 10) * 3)
        v = classify(_traj(sups, cap=1e5))
        assert v.kind == "bounded"
        assert v.bound_estimate == pytest.approx(500.0)

    def test_steady_growth_without_cap_is_inconclusive(self):
        sups = list(np.geomspace(1.0, 1e3, 60))
        v = classify(_traj(sups, cap=1e5))
        assert v.kind == "inconclusive"


class TestRegistry:
    def test_labels_stable_and_unique(self):
        labels = list(registry())
        assert labels == list(REGISTRY_LABELS)
        assert len(set(labels)) == len(labels)
        assert len(labels) == 14

    def test_every_scenario_declares_expectation(self):
        for s in registry().values():
            assert s.expected_status in ("CONSISTENT", "UNDECIDED")

    def test_scenarios_are_well_formed(self):
        for s in registry().values():
            g = scenario_grid(s)
            u0 = realize_initial(s, g)
            assert np.any(u0.values > 0)
            assert np.all(u0.values >= 0)


class TestPredictAndCrossCheck:
    def test_static_ball_below_threshold_predicts_bounded(self):
        s = _scenario(params=EquationParams(
            lam=6.0, rho=2.0, nu=NU,
            moving_set=StaticSet(SetShape.ball((1.0, 1.0), 0.3))),
            resolution=64, t_end=2.0)
        checks = predict(s)
        fired = [c for c in checks if c.hypotheses_hold]
        assert any(c.predicted == "bounded" for c in fired)
        assert not any(c.predicted == "grow_up" for c in fired)

    def test_static_ball_above_threshold_predicts_grow_up(self):
        s = _scenario(params=EquationParams(
            lam=80.0, rho=2.0, nu=NU,
            moving_set=StaticSet(SetShape.ball((1.0, 1.0), 0.3))),
            scheme=SchemeConfig(dt=2e-3, growth_cap=1e4),
            resolution=64, t_end=2.0)
        checks = predict(s)
        fired = [c for c in checks if c.hypotheses_hold]
        assert any(c.predicted == "grow_up" for c in fired)
        assert not any(c.predicted == "bounded" for c in fired)

    def test_cross_check_consistency_from_synthetic_verdict(self):
        s = _scenario(params=EquationParams(
            lam=6.0, rho=2.0, nu=NU,
            moving_set=StaticSet(SetShape.ball((1.0, 1.0), 0.3))),
            resolution=64, t_end=2.0)
        grid = scenario_grid(s)
        checks = predict(s, grid)
        bounded_traj = _traj([1.0] * 30 + [2.0] * 40)
        rep = cross_check(s, bounded_traj, grid, checks=checks)
        assert rep.predicted == "bounded"
        assert rep.status == "CONSISTENT"
        cap_traj = _traj(list(np.geomspace(1.0, 2e5, 80)), cap=1e5,
                         cap_hit=79.0)
        rep2 = cross_check(s, cap_traj, grid, checks=checks)
        assert rep2.status == "VIOLATION"
