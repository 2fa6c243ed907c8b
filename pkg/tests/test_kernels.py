"""Smooth-kernel pieces: derivative consistency and profile shape."""

import math

import numpy as np
import pytest

from discgeom.kernels import flat_exp, flz1_chi, flz2_psi, worm_phi
from discgeom.scalars import Dual


def central(fn, x, h):
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def check_derivatives_on_grid(kernel, grid, rel=1e-6):
    """First and second derivative procedures agree with central differences."""
    for x in grid:
        h = 1e-6 * max(1.0, abs(x))
        fd1 = central(kernel.f0, x, h)
        fd2 = central(kernel.f1, x, h)
        scale1 = max(1.0, abs(kernel.f1(x)))
        scale2 = max(1.0, abs(kernel.f2(x)))
        assert abs(kernel.f1(x) - fd1) / scale1 < rel, f"{kernel.name} d1 at {x}"
        assert abs(kernel.f2(x) - fd2) / scale2 < rel, f"{kernel.name} d2 at {x}"


class TestFlatExp:
    def test_vanishes_left_of_zero(self):
        k = flat_exp(2.0)
        for u in (-1.0, 0.0, 1e-13):
            assert k.f0(u) == 0.0 and k.f1(u) == 0.0 and k.f2(u) == 0.0

    def test_value(self):
        k = flat_exp(2.0)
        assert k.f0(0.5) == pytest.approx(math.exp(-2.0))
        k1 = flat_exp(1.0)
        assert k1.f0(4.0) == pytest.approx(math.exp(-0.5))

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_derivatives(self, alpha):
        k = flat_exp(alpha)
        check_derivatives_on_grid(k, np.geomspace(0.05, 5.0, 25))

    def test_array_mode(self):
        k = flat_exp(2.0)
        u = np.array([-1.0, 0.0, 0.5, 2.0])
        vals = k.f0(u)
        assert vals[0] == 0.0 and vals[1] == 0.0
        assert vals[2] == pytest.approx(math.exp(-2.0))

    def test_dual_mode(self):
        k = flat_exp(2.0)
        out = k(Dual(0.5, (1.0,)))
        assert out.value == pytest.approx(math.exp(-2.0))
        assert out.partials[0] == pytest.approx(math.exp(-2.0) / 0.25)

    def test_nested_dual_depth_limit(self):
        k = flat_exp(2.0)
        nested = Dual(Dual(0.5, (1.0,)), (1.0,))
        out = k(nested)
        assert out.partials[0].partials[0] == pytest.approx(k.f2(0.5), rel=1e-12)
        triple = Dual(nested, (1.0,))
        with pytest.raises(RuntimeError):
            k(triple)


class TestWormPhi:
    def setup_method(self):
        self.beta = 2.0
        self.phi = worm_phi(self.beta)
        self.half = self.beta - math.pi / 2.0

    def test_flat_zone_exact_zero(self):
        for x in np.linspace(-self.half, self.half, 41):
            assert self.phi.f0(x) == 0.0
            assert self.phi.f1(x) == 0.0
            assert self.phi.f2(x) == 0.0

    def test_even(self):
        for x in np.linspace(0.0, 2.5, 50):
            assert self.phi.f0(x) == pytest.approx(self.phi.f0(-x), abs=1e-12)

    def test_convex_on_grid(self):
        for x in np.linspace(-3.0, 3.0, 301):
            assert self.phi.f2(x) >= -1e-12

    def test_nonnegative(self):
        for x in np.linspace(-3.0, 3.0, 301):
            assert self.phi.f0(x) >= 0.0

    def test_crosses_one_with_nonzero_slope(self):
        # the crossing of height 1 happens in the quadratic tail, slope > 0
        xs = np.linspace(self.half, self.half + 2.0, 4000)
        vals = self.phi.f0(xs)
        idx = int(np.argmax(vals > 1.0))
        assert 0 < idx < len(xs) - 1
        assert self.phi.f1(xs[idx]) > 0.1
        # and the crossing lies beyond the exp->quadratic junction
        assert xs[idx] - self.half > 0.4

    def test_derivatives(self):
        grid = np.concatenate([np.linspace(-2.5, -self.half - 0.01, 12),
                               np.linspace(self.half + 0.05, 2.5, 12)])
        check_derivatives_on_grid(self.phi, grid)

    def test_beta_validation(self):
        with pytest.raises(ValueError):
            worm_phi(1.5)


class TestFlz1Chi:
    def setup_method(self):
        self.chi = flz1_chi()

    def test_one_on_unit_interval(self):
        for t in np.linspace(0.0, 1.0, 21):
            assert self.chi.f0(t) == 1.0
            assert self.chi.f1(t) == 0.0

    def test_linear_tail(self):
        assert self.chi.f0(1.1) == pytest.approx(1.05, abs=1e-12)
        assert self.chi.f0(2.0) == pytest.approx(1.95)
        assert self.chi.f1(1.5) == 1.0

    def test_continuity_at_junctions(self):
        eps, kappa = 5e-5, 0.1
        for t0 in (1.0, 1.0 + eps, 1.0 + kappa):
            left = self.chi.f0(t0 - 1e-9)
            right = self.chi.f0(t0 + 1e-9)
            assert left == pytest.approx(right, abs=1e-7)

    def test_at_least_one_everywhere(self):
        for t in np.linspace(0.0, 3.0, 601):
            assert self.chi.f0(t) >= 1.0 - 1e-12

    def test_derivatives_outside_stiff_shell(self):
        grid = np.concatenate([np.linspace(0.1, 0.99, 8),
                               np.linspace(1.02, 1.09, 8),
                               np.linspace(1.11, 2.5, 8)])
        check_derivatives_on_grid(self.chi, grid)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            flz1_chi(eps=0.2)  # eps must stay below kappa


class TestFlz2Psi:
    def setup_method(self):
        self.kappa = 0.1
        self.psi = flz2_psi(kappa=self.kappa)

    def test_flat_below_threshold(self):
        g2 = (1 - self.kappa) ** 2
        for t in np.linspace(0.0, g2, 15):
            assert self.psi.f0(t) == pytest.approx(1 - self.kappa)
            assert self.psi.f1(t) == 0.0

    def test_normalization_at_one(self):
        # chi(1) = 1 by the choice of the prefactor
        assert self.psi.f0(1.0) == pytest.approx(1.0, rel=1e-12)

    def test_monotone_increasing_past_threshold(self):
        g2 = (1 - self.kappa) ** 2
        for t in np.linspace(g2 + 0.01, 2.0, 40):
            assert self.psi.f1(t) > 0.0

    def test_derivatives(self):
        g2 = (1 - self.kappa) ** 2
        check_derivatives_on_grid(self.psi, np.linspace(g2 + 0.02, 2.0, 25))
