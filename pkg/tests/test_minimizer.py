"""Tests for the configuration solvers and orbit diagnostics.

Reference values come from three independent routes: closed-form actions
evaluated by hand, a dynamic-programming grid search over periodic
configurations, and a shooting integration of the twist recurrence for
connections.  Digits frozen here were produced by those oracles.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from twistvar import (
    Configuration,
    DegenerateSymbolError,
    Heteroclinic01,
    PerturbationParams,
    Periodic,
    PinnedEnds,
    TwistFamilyError,
    action,
    count_in_interval,
    crossing_count,
    make_hn,
    minimize_advancing,
    minimize_periodic,
    rotation_number,
    spacing_profile,
    stationarity_residual,
)

from .oracles import (
    dp_periodic_action,
    fd_interior_gradient,
    shooting_connection_action,
    shooting_zero_plus,
)

rng = np.random.default_rng(2203)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def second_derivative_on_diagonal(h, t: float, step: float = 1e-5) -> float:
    """Curvature of the on-site potential, from the slope of h.d2(t, t)."""
    return (float(h.d2(t + step, t + step)) - float(h.d2(t - step, t - step))) / (2 * step)


@pytest.fixture(scope="module")
def advancing8(h8):
    return minimize_advancing(h8, 0, 1, "+")


@pytest.fixture(scope="module")
def retreating8(h8):
    return minimize_advancing(h8, 0, 1, "-")


class TestAction:
    def test_shear_periodic_pair(self, h0):
        # two sites advancing by 1/2 each: 2 * (1/2) * (1/2)^2
        assert action(h0, [0.2, 0.7], Periodic(1, 2)) == pytest.approx(0.25, abs=1e-15)

    def test_shear_open_pair(self, h0):
        assert action(h0, [0.0, 1.0], PinnedEnds(0.0, 1.0)) == pytest.approx(0.5, abs=1e-15)

    def test_perturbed_pair_splits_into_parts(self):
        params = PerturbationParams(n=10, a=2.0, k=2, delta=0.05)
        h = make_hn(params)
        # 1/2 * (1/2)^2  +  well at 1/2  +  bump peak
        expected = 0.125 + 2 * 10.0**-2.0 + params.bump_height
        assert action(h, [0.0, 0.5], PinnedEnds(0.0, 0.5)) == pytest.approx(expected, abs=1e-15)

    def test_configuration_object_equals_raw_values(self, h8):
        x = np.array([0.1, 0.45, 0.8])
        cfg = Configuration(x, Periodic(1, 3))
        assert action(h8, cfg) == action(h8, x, Periodic(1, 3))


class TestStationarityResidual:
    def test_arithmetic_progression_is_shear_stationary(self, h0):
        x = np.linspace(0.0, 1.5, 7)
        res = stationarity_residual(h0, x, PinnedEnds(0.0, 1.5))
        assert np.max(np.abs(res)) <= 1e-15
        assert res[0] == 0.0 and res[-1] == 0.0

    def test_interior_matches_finite_differences(self, h8):
        x = np.cumsum(rng.uniform(0.05, 0.3, size=8))
        res = stationarity_residual(h8, x, PinnedEnds(x[0], x[-1]))
        fd = fd_interior_gradient(h8, x)
        assert np.max(np.abs(res[1:-1] - fd)) <= 1e-6

    def test_minimizer_is_stationary(self, h8):
        cfg, _ = minimize_periodic(h8, 1, 3)
        res = stationarity_residual(h8, cfg)
        assert np.max(np.abs(res)) <= 1e-10

    def test_single_site_shift_gives_linearized_force(self, h8):
        cfg, _ = minimize_periodic(h8, 1, 3)
        x = cfg.x.copy()
        delta = 1e-3
        x[1] += delta
        res = stationarity_residual(h8, x, Periodic(1, 3))
        # moving one site changes its own force by (d11 + d22) * delta
        expected = (2.0 + second_derivative_on_diagonal(h8, cfg.x[1])) * delta
        assert res[1] == pytest.approx(expected, rel=5e-2)
        # and each neighbour's force by d12 * delta = -delta exactly
        assert res[0] == pytest.approx(-delta, rel=1e-6)
        assert res[2] == pytest.approx(-delta, rel=1e-6)

    def test_open_chain_needs_three_sites(self, h8):
        with pytest.raises(TwistFamilyError):
            stationarity_residual(h8, [0.0, 1.0], PinnedEnds(0.0, 1.0))


class TestMinimizePeriodic:
    def test_shear_ground_state_is_equally_spaced(self, h0):
        cfg, rep = minimize_periodic(h0, 1, 3)
        assert rep.converged
        gaps = spacing_profile(cfg)[:, 1]
        assert np.max(np.abs(gaps - 1.0 / 3.0)) <= 1e-9
        assert rep.action == pytest.approx(1.0 / 6.0, abs=1e-12)
        assert rotation_number(cfg) == 1.0 / 3.0

    def test_deep_well_pins_the_fixed_point(self):
        h = make_hn(PerturbationParams(n=10, a=2.0, k=2, delta=0.05))
        cfg, rep = minimize_periodic(h, 0, 1)
        assert abs(rep.action) <= 1e-12
        frac = float(cfg.fractional()[0])
        assert min(frac, 1.0 - frac) <= 1e-8

    def test_frozen_actions(self, h8):
        _, rep2 = minimize_periodic(h8, 1, 2)
        _, rep3 = minimize_periodic(h8, 1, 3)
        assert rep2.action == pytest.approx(0.3853169637, abs=1e-9)
        assert rep3.action == pytest.approx(0.3693415370, abs=1e-9)

    def test_agrees_with_grid_search_oracle(self, h8):
        _, rep = minimize_periodic(h8, 1, 2)
        assert rep.action == pytest.approx(dp_periodic_action(h8, 1, 2), abs=1e-5)
        h4 = make_hn(PerturbationParams(n=4, a=1.0, k=2, delta=0.05))
        _, rep = minimize_periodic(h4, 1, 3)
        assert rep.action == pytest.approx(dp_periodic_action(h4, 1, 3), abs=1e-5)

    def test_translated_seed_lands_on_same_canonical_state(self, h8):
        cfg, rep = minimize_periodic(h8, 1, 2)
        cfg2, rep2 = minimize_periodic(h8, 1, 2, init=cfg.x + 1.0)
        assert np.max(np.abs(cfg2.x - cfg.x)) <= 1e-10
        assert rep2.action == pytest.approx(rep.action, abs=1e-12)

    def test_second_variation_is_positive_semidefinite(self, h8):
        cfg, _ = minimize_periodic(h8, 1, 3)
        x = cfg.x
        q, p = 3, 1
        H = np.zeros((q, q))
        for i in range(q):
            right = x[(i + 1) % q] + (p if i + 1 == q else 0)
            left = x[(i - 1) % q] - (p if i == 0 else 0)
            H[i, i] = float(h8.d11(x[i], right)) + float(h8.d22(left, x[i]))
            H[i, (i + 1) % q] += float(h8.d12(x[i], right))
            H[(i + 1) % q, i] += float(h8.d12(x[i], right))
        assert np.min(np.linalg.eigvalsh(H)) >= -1e-9

    def test_report_is_consistent(self, h8):
        cfg, rep = minimize_periodic(h8, 1, 2)
        assert rep.converged
        assert rep.residual <= 1e-9
        assert action(h8, cfg) == pytest.approx(rep.action, abs=1e-12)
        assert isinstance(rep.message, str)

    def test_rejects_bad_symbols(self, h8):
        with pytest.raises(TwistFamilyError):
            minimize_periodic(h8, 2, 4)
        with pytest.raises(TwistFamilyError):
            minimize_periodic(h8, 1, 2, init=[0.0, 0.3, 0.7])


class TestMinimizeAdvancing:
    def test_connection_runs_from_orbit_to_translate(self, advancing8):
        cfg, rep = advancing8
        assert rep.converged
        assert isinstance(cfg.boundary, Heteroclinic01)
        # monotone up to the 1e-16 jitter of the flat tails, with a real climb
        assert np.all(np.diff(cfg.x) > -1e-12)
        assert np.max(np.diff(cfg.x)) > 0.05
        assert abs(cfg.x[0]) <= 1e-8
        assert abs(cfg.x[-1] - 1.0) <= 1e-8
        assert 0.0 < rep.action < 1.0

    def test_retreating_mirror_has_equal_cost(self, advancing8, retreating8):
        cfg, rep = retreating8
        assert np.all(np.diff(cfg.x) < 1e-12)
        assert abs(cfg.x[0]) <= 1e-8
        assert abs(cfg.x[-1] + 1.0) <= 1e-8
        # the on-site potential is even about the well bottom, so the
        # retreating connection is the advancing one reflected
        assert rep.action == pytest.approx(advancing8[1].action, abs=1e-9)

    def test_relative_action_matches_shooting_oracle(self, h8, advancing8):
        free = shooting_connection_action(h8, 0.5) - shooting_zero_plus(h8, 0.5)
        assert advancing8[1].action == pytest.approx(free, abs=1e-7)

    def test_tail_grows_at_the_orbit_multiplier(self, h8, advancing8):
        cfg, _ = advancing8
        curvature = second_derivative_on_diagonal(h8, 0.0)
        c = 2.0 + curvature
        lam = (c + math.sqrt(c * c - 4.0)) / 2.0
        mask = (cfg.x > 1e-7) & (cfg.x < 1e-3)
        idx = np.nonzero(mask)[0]
        assert len(idx) >= 3
        slope = np.polyfit(idx, np.log(cfg.x[idx]), 1)[0]
        assert slope == pytest.approx(math.log(lam), rel=2e-2)

    def test_rotation_number_of_connection_is_small(self, advancing8):
        cfg, _ = advancing8
        rho = rotation_number(cfg)
        assert 0.0 < rho <= 2.0 / len(cfg)

    def test_shear_has_no_isolated_ground_orbit(self, h0):
        with pytest.raises(DegenerateSymbolError):
            minimize_advancing(h0, 0, 1)


class TestDiagnostics:
    def test_crossing_count_of_identical_is_zero(self, advancing8):
        cfg, _ = advancing8
        assert crossing_count(cfg.x, cfg.x) == 0

    def test_crossing_count_of_translate_is_zero(self, advancing8):
        cfg, _ = advancing8
        assert crossing_count(cfg.x, cfg.x + 1.0) == 0

    def test_connection_crosses_a_fixed_level_once(self, advancing8):
        cfg, _ = advancing8
        level = np.full(len(cfg), 0.5 - 1e-4)
        assert crossing_count(cfg.x, level) == 1

    def test_crossing_count_rejects_length_mismatch(self):
        with pytest.raises(TwistFamilyError):
            crossing_count([0.0, 1.0], [0.0, 1.0, 2.0])

    def test_spacing_profile_wraps_periodic_types(self):
        cfg = Configuration([0.0, 0.25, 0.5, 0.75], Periodic(1, 4))
        rows = spacing_profile(cfg)
        assert rows.shape == (4, 2)
        assert np.max(np.abs(rows[:, 1] - 0.25)) == 0.0
        assert rows[-1, 0] == 0.75  # wrap row: gap back to x0 + 1

    def test_spacing_profile_window_filters_left_points(self):
        cfg = Configuration([0.0, 0.25, 0.5, 0.75], Periodic(1, 4))
        rows = spacing_profile(cfg, window=(0.3, 0.8))
        assert list(rows[:, 0]) == [0.5, 0.75]

    def test_spacing_profile_open_chain_has_no_wrap(self):
        rows = spacing_profile([0.0, 0.1, 0.4], PinnedEnds(0.0, 0.4))
        assert rows.shape == (2, 2)
        assert rows[1, 1] == pytest.approx(0.3, abs=1e-15)

    def test_count_in_interval_empty_interval(self):
        assert count_in_interval(np.arange(10) * 0.1, (0.4, 0.4)) == 0

    def test_count_in_interval_is_half_open(self):
        x = np.arange(10) * 0.1
        assert count_in_interval(x, (0.3, 0.5)) == 2  # 0.3 and 0.4, not 0.5
        assert count_in_interval(x, (0.25, 0.55)) == 3

    def test_count_in_interval_golden_orbit_equidistributes(self):
        x = 0.1 + GOLDEN * np.arange(100)
        count = count_in_interval(x, (0.1, 0.3))
        assert 15 <= count <= 25
