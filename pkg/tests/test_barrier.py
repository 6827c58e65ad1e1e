"""Tests for barrier values, profiles, and the circle criterion.

Independent references: a shooting integration of the twist recurrence
for advancing connections, and direct grid minimisation over constrained
periodic configurations for the exact rational variant.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from twistvar import (
    BarrierProfile,
    DegenerateSymbolError,
    HeteroclinicActions,
    Irrational,
    PerturbationParams,
    Rational,
    SolverError,
    TwistFamilyError,
    barrier_profile,
    invariant_circle_exists,
    make_hn,
    minimize_periodic,
    peierls_irrational,
    peierls_rational,
    peierls_zero_plus,
    zero_plus_actions,
)

from .oracles import shooting_zero_plus

rng = np.random.default_rng(3307)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
BUMP_HEIGHT_8 = 8.0**-4.0


def exact_two_site_oracle(h, xi: float) -> float:
    """Grid minimisation of the type-(1, 2) action constrained through xi."""
    _, rep = minimize_periodic(h, 1, 2)
    lo, hi = xi - 1.0, xi + 1.0
    for _ in range(3):
        x1 = np.linspace(lo, hi, 20001)
        vals = np.asarray(h(xi, x1) + h(x1, xi + 1.0), dtype=float)
        i = int(np.argmin(vals))
        step = x1[1] - x1[0]
        lo, hi = x1[i] - 2 * step, x1[i] + 2 * step
    return float(np.min(vals)) - rep.action


class TestRationalSymbols:
    def test_rejects_bad_symbols(self):
        with pytest.raises(TwistFamilyError):
            Rational(2, 4)
        with pytest.raises(TwistFamilyError):
            Rational(1, 2, "sideways")
        with pytest.raises(TwistFamilyError):
            Irrational(0.5)

    def test_shear_rationals_are_degenerate(self, h0):
        for p, q, variant in ((0, 1, "plus"), (1, 2, "exact"), (1, 3, "minus")):
            with pytest.raises(DegenerateSymbolError):
                peierls_rational(h0, p, q, variant, 0.25)

    def test_exact_variant_matches_constrained_grid_search(self, h8):
        for xi in (0.25, 0.6):
            value = peierls_rational(h8, 1, 2, "exact", xi)
            assert value == pytest.approx(exact_two_site_oracle(h8, xi), abs=1e-7)
            assert value >= 0.0

    def test_exact_variant_vanishes_on_the_ground_state(self, h8):
        cfg, _ = minimize_periodic(h8, 1, 2)
        assert peierls_rational(h8, 1, 2, "exact", float(cfg.x[0])) <= 1e-8

    def test_one_sided_variant_matches_shooting(self, h8):
        value = peierls_rational(h8, 0, 1, "plus", 0.5)
        assert value == pytest.approx(shooting_zero_plus(h8, 0.5), abs=1e-8)

    def test_barrier_is_one_periodic_in_the_test_point(self, h8):
        assert peierls_rational(h8, 0, 1, "plus", 0.3) == peierls_rational(
            h8, 0, 1, "plus", 1.3
        )


class TestZeroPlus:
    def test_vanishes_at_the_orbit_point(self, h8):
        assert peierls_zero_plus(h8, 0.0) <= 1e-10

    def test_clears_the_height_floors_at_the_bump_centre(self, h8):
        value = peierls_zero_plus(h8, 0.5)
        assert value == pytest.approx(0.09636028339044, abs=1e-10)
        assert value >= 8.0**-3.0 - 1e-10
        assert value >= BUMP_HEIGHT_8 - 1e-10

    def test_bump_free_family_matches_shooting(self, hbar8):
        value = peierls_zero_plus(hbar8, 0.5)
        assert value == pytest.approx(shooting_zero_plus(hbar8, 0.5), abs=1e-7)
        assert value == pytest.approx(0.0961161427, abs=1e-9)

    def test_agrees_with_the_rational_plus_route(self, h8):
        # two independently assembled routes to the same number: windowed
        # action difference vs cached-connection relief
        for xi in rng.uniform(0.0, 1.0, size=16):
            direct = peierls_zero_plus(h8, float(xi))
            routed = peierls_rational(h8, 0, 1, "plus", float(xi))
            assert direct == pytest.approx(routed, abs=1e-8)

    def test_truncation_window_is_converged(self, h8):
        acts = zero_plus_actions(h8, 0.3)
        wider = zero_plus_actions(h8, 0.3, width=2 * acts.truncation_width)
        assert wider.truncation_width >= 2 * acts.truncation_width - 1
        assert abs(wider.barrier - acts.barrier) < 1e-10

    def test_constrained_action_cannot_undercut_free(self):
        with pytest.raises(TwistFamilyError):
            HeteroclinicActions(K=1.0, K_xi=0.5, truncation_width=9)

    def test_negative_rounding_noise_clamps_to_zero(self):
        acts = HeteroclinicActions(K=1.0, K_xi=1.0 - 1e-13, truncation_width=9)
        assert acts.barrier == 0.0


class TestIrrationalBarrier:
    def test_shear_behaves_as_integrable(self, h0):
        res = peierls_irrational(h0, GOLDEN, 0.37)
        assert res.value == 0.0
        assert res.stable
        assert res.convergents_used == ()

    def test_scaled_golden_value_stabilises(self, h8):
        omega = GOLDEN * 8.0**-1.05
        res = peierls_irrational(h8, omega, 0.5)
        assert res.stable
        assert not res.resolution_limited
        assert res.convergents_used == ((1, 14), (2, 29), (3, 43))
        assert res.value == pytest.approx(0.09636028339032, abs=1e-11)
        assert res.value == pytest.approx(peierls_zero_plus(h8, 0.5), abs=1e-9)

    def test_forced_sweep_reports_cauchy_estimate(self, h8):
        omega = GOLDEN * 8.0**-1.05
        res = peierls_irrational(h8, omega, 0.5, convergents=3, settle_tol=0.0)
        assert not res.stable
        assert len(res.convergents_used) == 3
        assert res.error_estimate <= 1e-6

    def test_deeper_sweep_moves_the_value_little(self, h8):
        omega = GOLDEN * 8.0**-1.05
        shallow = peierls_irrational(h8, omega, 0.5, convergents=3, settle_tol=0.0)
        deep = peierls_irrational(h8, omega, 0.5, convergents=6, settle_tol=0.0)
        assert len(deep.convergents_used) >= len(shallow.convergents_used)
        assert deep.value == pytest.approx(shallow.value, abs=1e-6)


class TestProfilesAndCriterion:
    def test_shear_profile_is_identically_zero(self, h0):
        prof = barrier_profile(h0, Irrational(GOLDEN), grid_size=64)
        assert not prof.flags.any()
        assert prof.sup_value <= 1e-10
        assert prof.metadata.get("degenerate_family") is True
        assert invariant_circle_exists(prof)

    def test_zero_plus_profile_shape(self, h8):
        prof = barrier_profile(h8, Rational(0, 1, "plus"), grid_size=64)
        assert not prof.flags.any()
        assert np.all(prof.values >= 0.0)
        assert prof.values[0] <= 1e-10  # the orbit point itself
        assert prof.sup_value >= BUMP_HEIGHT_8 - 1e-10
        assert prof.grid[int(np.argmax(prof.values))] == pytest.approx(0.5, abs=1.0 / 64)

    def test_profile_survives_grid_refinement(self, h8):
        coarse = barrier_profile(h8, Rational(0, 1, "plus"), grid_size=64)
        fine = barrier_profile(h8, Rational(0, 1, "plus"), grid_size=128)
        assert fine.sup_value >= coarse.sup_value - 1e-12
        assert abs(fine.sup_value - coarse.sup_value) <= 0.05 * coarse.sup_value
        # the coarse grid is a subset of the fine one; values must agree there
        common = np.max(np.abs(fine.values[::2] - coarse.values))
        assert common <= 1e-9

    def test_criterion_verdict_follows_the_tolerance(self, h8):
        prof = barrier_profile(h8, Rational(0, 1, "plus"), grid_size=64)
        assert invariant_circle_exists(prof, tol=BUMP_HEIGHT_8 / 2) is False
        assert invariant_circle_exists(prof, tol=math.inf) is True

    def test_flagged_profile_refuses_a_verdict(self):
        grid = np.arange(8) / 8.0
        values = np.zeros(8)
        flags = np.zeros(8, dtype=bool)
        flags[3] = True
        prof = BarrierProfile(
            grid=grid, values=values, flags=flags, symbol=Rational(0, 1, "plus"),
            sup_value=0.0,
        )
        with pytest.raises(SolverError):
            invariant_circle_exists(prof)

    def test_profile_rejects_tiny_grids(self, h8):
        with pytest.raises(TwistFamilyError):
            barrier_profile(h8, Rational(0, 1, "plus"), grid_size=4)
