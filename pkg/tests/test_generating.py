"""Tests for the generating-function family and its constructions."""

from __future__ import annotations

import math

import numpy as np
import pytest

from twistvar import (
    GOLDEN_MEAN,
    PerturbationParams,
    TwistFamilyError,
    cr_norm_estimate,
    dirichlet_approximants,
    make_h0,
    make_hn,
    make_htilde,
    make_un,
    make_vn,
    twist_map_step,
    twist_orbit,
)
from twistvar.generating import rescale

from .oracles import fd_jacobian

RNG = np.random.default_rng(1107)


# ---------------------------------------------------------------------------
# integrable shear
# ---------------------------------------------------------------------------


class TestH0:
    def test_diagonal_vanishes(self, h0):
        assert h0(0.0, 0.0) == 0.0

    def test_half_step_value(self, h0):
        assert h0(0.0, 0.5) == pytest.approx(0.125, abs=1e-15)

    def test_first_partial_sign(self, h0):
        assert h0.d1(0.2, 0.7) == pytest.approx(-0.5, abs=1e-15)

    def test_twist_is_exactly_minus_one(self, h0):
        xs = RNG.uniform(-2, 2, size=50)
        ys = RNG.uniform(-2, 2, size=50)
        assert np.all(h0.d12(xs, ys) == -1.0)


# ---------------------------------------------------------------------------
# the well u_n
# ---------------------------------------------------------------------------


class TestWell:
    def test_value_at_half(self):
        u = make_un(PerturbationParams(n=10, a=2.0, k=2))
        assert u.deriv(0.5, 0) == pytest.approx(0.02, abs=1e-15)

    def test_vanishes_at_zero(self):
        u = make_un(PerturbationParams(n=7, a=1.3, k=2))
        assert u.deriv(0.0, 0) == pytest.approx(0.0, abs=1e-15)

    def test_slope_at_quarter(self):
        u = make_un(PerturbationParams(n=10, a=2.0, k=2))
        assert u.deriv(0.25, 1) == pytest.approx(2 * math.pi / 100, rel=1e-12)

    def test_amplitude(self):
        params = PerturbationParams(n=16, a=1.0, k=2)
        u = make_un(params)
        xs = np.linspace(0, 1, 1001)
        assert float(np.max(u.deriv(xs, 0))) == pytest.approx(2 * 16**-1.0, rel=1e-6)


# ---------------------------------------------------------------------------
# the bump v_n
# ---------------------------------------------------------------------------


class TestBump:
    def test_zero_outside_support(self):
        v = make_vn(PerturbationParams(n=10, a=1.0, k=2))
        assert v.deriv(0.0, 0) == 0.0
        assert v.deriv(0.5 - 10**-1.0 - 1e-9, 0) == 0.0
        assert v.deriv(0.5 + 10**-1.0 + 1e-9, 0) == 0.0

    def test_peak_value_is_bump_height(self):
        params = PerturbationParams(n=10, a=1.0, k=2)
        v = make_vn(params)
        # height n^(-s) with s = (k+2)a; at (a, k) = (1, 2) that is n^(-4)
        assert params.bump_height == pytest.approx(10.0**-4, rel=1e-12)
        assert v.deriv(0.5, 0) == pytest.approx(params.bump_height, rel=1e-12)

    def test_nonnegative_and_periodic(self):
        v = make_vn(PerturbationParams(n=8, a=1.0, k=2))
        xs = np.linspace(-1, 2, 3001)
        vals = v.deriv(xs, 0)
        assert np.all(vals >= 0.0)
        assert np.max(np.abs(v.deriv(xs + 1.0, 0) - vals)) < 1e-15

    @pytest.mark.parametrize("n", [8, 16, 32, 64])
    def test_ck_budget_single_constant(self, n):
        """sup of |v|, |v'|, |v''| is bounded by one constant times n^(-2a)."""
        params = PerturbationParams(n=n, a=1.0, k=2)
        v = make_vn(params)
        xs = np.linspace(0.5 - n**-1.0, 0.5 + n**-1.0, 4001)
        sup = max(float(np.max(np.abs(v.deriv(xs, j)))) for j in (0, 1, 2))
        # measured profile constant is 21.07, frozen with margin
        assert sup <= 22.0 * n**-2.0

    def test_rejects_negative_smoothness(self):
        with pytest.raises((TwistFamilyError, ValueError)):
            PerturbationParams(n=8, a=1.0, k=-1)


# ---------------------------------------------------------------------------
# the perturbed family h_n
# ---------------------------------------------------------------------------


class TestPerturbedFamily:
    def test_origin_vanishes(self, h8):
        assert h8(0.0, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_sum_of_parts(self):
        params = PerturbationParams(n=10, a=2.0, k=2)
        h = make_hn(params)
        expected = 0.125 + 0.02 + params.bump_height
        assert h(0.0, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_twist_minus_one(self, h8):
        xs = RNG.uniform(-1, 2, size=30)
        ys = RNG.uniform(-1, 2, size=30)
        assert np.all(h8.d12(xs, ys) == -1.0)

    def test_bump_flag_selects_bare_family(self, h8, hbar8):
        # at the bump peak the two families differ by exactly the bump height
        diff = float(h8(0.3, 0.5) - hbar8(0.3, 0.5))
        assert diff == pytest.approx(8.0**-4.0, rel=1e-12)

    def test_translation_periodicity(self, h8):
        xs = RNG.uniform(-1, 1, size=200)
        ys = RNG.uniform(-1, 1, size=200)
        assert np.max(np.abs(h8(xs + 1, ys + 1) - h8(xs, ys))) < 1e-12

    def test_partials_match_finite_differences(self, h8):
        step = 1e-5
        xs = RNG.uniform(0, 1, size=100)
        ys = RNG.uniform(0, 1, size=100)
        fd1 = (h8(xs + step, ys) - h8(xs - step, ys)) / (2 * step)
        fd2 = (h8(xs, ys + step) - h8(xs, ys - step)) / (2 * step)
        assert np.max(np.abs(fd1 - h8.d1(xs, ys))) < 1e-9
        assert np.max(np.abs(fd2 - h8.d2(xs, ys))) < 1e-9
        fd22 = (h8.d2(xs, ys + step) - h8.d2(xs, ys - step)) / (2 * step)
        assert np.max(np.abs(fd22 - h8.d22(xs, ys))) < 1e-6


# ---------------------------------------------------------------------------
# rescaling
# ---------------------------------------------------------------------------


class TestRescale:
    def test_identity_at_q1(self):
        params = PerturbationParams(n=10, a=2.0, k=2)
        u = make_un(params)
        q1 = rescale(u, 1)
        xs = np.linspace(0, 1, 100)
        assert np.max(np.abs(q1.deriv(xs, 0) - u.deriv(xs, 0))) < 1e-15

    def test_compressed_value(self):
        u = make_un(PerturbationParams(n=10, a=2.0, k=2))
        q5 = rescale(u, 5)
        assert q5.deriv(0.1, 0) == pytest.approx(0.02 / 25, rel=1e-12)

    def test_sup_scales_by_q_squared(self):
        u = make_un(PerturbationParams(n=12, a=1.5, k=2))
        q3 = rescale(u, 3)
        xs = np.linspace(0, 1, 3001)
        assert float(np.max(q3.deriv(xs, 0))) == pytest.approx(
            float(np.max(u.deriv(xs, 0))) / 9.0, rel=1e-6
        )

    def test_rejects_zero(self):
        u = make_un(PerturbationParams(n=10, a=1.0, k=2))
        with pytest.raises(TwistFamilyError):
            rescale(u, 0)


# ---------------------------------------------------------------------------
# Diophantine approximants
# ---------------------------------------------------------------------------


class TestDirichlet:
    def test_golden_convergents(self):
        approx = dirichlet_approximants(GOLDEN_MEAN, 4)
        assert [(d.p, d.q) for d in approx] == [(1, 2), (2, 3), (3, 5), (5, 8)]

    def test_dirichlet_inequality(self):
        for omega in (GOLDEN_MEAN, math.sqrt(2) - 1, math.pi - 3):
            for d in dirichlet_approximants(omega, 6):
                assert abs(d.q * omega - d.p) < 1.0 / d.q
                assert math.gcd(abs(d.p), d.q) == 1

    def test_pi_minus_three(self):
        first = dirichlet_approximants(math.pi - 3, 1)[0]
        assert (first.p, first.q) == (1, 7)
        assert abs(7 * (math.pi - 3) - 1) < 1.0 / 7

    def test_rational_rejected(self):
        with pytest.raises(TwistFamilyError):
            dirichlet_approximants(0.5, 3)


# ---------------------------------------------------------------------------
# norm estimation
# ---------------------------------------------------------------------------


class TestNormEstimate:
    def test_zero_function(self, h0):
        assert cr_norm_estimate(h0.difference(h0), 3.0) == 0.0

    def test_compressed_family_bound(self, h0):
        params = PerturbationParams(n=20, a=1.9, k=2)
        est = cr_norm_estimate(make_htilde(params).difference(h0), 3.0)
        # measured ratio to 20^(-0.9) is 754.7; frozen constant with margin
        assert est <= 800.0 * 20.0**-0.9

    def test_order_above_four_rejected(self, h0):
        params = PerturbationParams(n=8, a=1.9, k=2)
        with pytest.raises(TwistFamilyError):
            cr_norm_estimate(make_htilde(params).difference(h0), 4.5)


# ---------------------------------------------------------------------------
# the induced twist map
# ---------------------------------------------------------------------------


class TestTwistMap:
    def test_integrable_shear(self, h0):
        x, y = twist_map_step(h0, 0.3, 0.45)
        assert x == pytest.approx(0.75, abs=1e-12)
        assert y == pytest.approx(0.45, abs=1e-12)

    def test_perturbed_step_at_symmetric_point(self):
        h = make_hn(PerturbationParams(n=10, a=2.0, k=2))
        x, y = twist_map_step(h, 0.0, 0.5)
        # the well and bump slopes both vanish at 1/2
        assert x == pytest.approx(0.5, abs=1e-12)
        assert y == pytest.approx(0.5, abs=1e-12)

    def test_area_preservation(self, h8):
        for _ in range(5):
            x0 = float(RNG.uniform(0, 1))
            y0 = float(RNG.uniform(-0.5, 0.5))
            jac = fd_jacobian(lambda x, y: twist_map_step(h8, x, y), x0, y0)
            assert abs(float(np.linalg.det(jac)) - 1.0) < 1e-8

    def test_orbit_shape(self, h0):
        orbit = twist_orbit(h0, 0.0, GOLDEN_MEAN, 10)
        assert orbit.shape == (11, 2)
        assert np.allclose(np.diff(orbit[:, 0]), GOLDEN_MEAN, atol=1e-12)
