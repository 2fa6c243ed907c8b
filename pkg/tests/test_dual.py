"""Dual-number arithmetic and the complex-over-ring layer."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discgeom import scalars as sc
from discgeom.cnum import Cx, cexp, cpow_int, unit_circle
from discgeom.scalars import Dual

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
nonzero = st.floats(min_value=0.1, max_value=10).flatmap(
    lambda x: st.sampled_from([x, -x]))


def d1(x, dx=1.0):
    return Dual(x, (dx,))


class TestChainRule:
    @settings(max_examples=60, deadline=None)
    @given(finite, finite, finite, finite)
    def test_product_rule(self, a, da, b, db):
        u, v = Dual(a, (da,)), Dual(b, (db,))
        w = u * v
        assert w.value == a * b
        assert w.partials[0] == pytest.approx(a * db + b * da, rel=1e-12, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(finite, finite, nonzero, finite)
    def test_quotient_rule(self, a, da, b, db):
        w = Dual(a, (da,)) / Dual(b, (db,))
        assert w.partials[0] == pytest.approx((da * b - a * db) / b ** 2,
                                              rel=1e-10, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=-3, max_value=3))
    def test_exp_rule(self, x):
        w = sc.exp(d1(x))
        assert w.partials[0] == pytest.approx(math.exp(x), rel=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0.01, max_value=50))
    def test_log_sqrt_rules(self, x):
        assert sc.log(d1(x)).partials[0] == pytest.approx(1.0 / x, rel=1e-13)
        assert sc.sqrt(d1(x)).partials[0] == pytest.approx(0.5 / math.sqrt(x), rel=1e-13)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=-3, max_value=3))
    def test_trig_rules(self, x):
        assert sc.sin(d1(x)).partials[0] == pytest.approx(math.cos(x), abs=1e-14)
        assert sc.cos(d1(x)).partials[0] == pytest.approx(-math.sin(x), abs=1e-14)

    def test_integer_pow(self):
        w = d1(1.5) ** 5
        assert w.value == pytest.approx(1.5 ** 5)
        assert w.partials[0] == pytest.approx(5 * 1.5 ** 4)
        neg = d1(2.0) ** (-2)
        assert neg.value == pytest.approx(0.25)
        assert neg.partials[0] == pytest.approx(-2 * 2.0 ** (-3))
        with pytest.raises(TypeError):
            d1(2.0) ** 0.5

    def test_real_power(self):
        w = sc.powr(d1(4.0), 0.5)
        assert w.value == pytest.approx(2.0)
        assert w.partials[0] == pytest.approx(0.25)


class TestNesting:
    def test_second_derivative_of_cubic(self):
        # f(x) = x^3: f'' = 6x
        x0 = 1.7
        x = Dual(Dual(x0, (1.0,)), (1.0,))
        y = x * x * x
        assert y.value.value == pytest.approx(x0 ** 3)
        assert y.value.partials[0] == pytest.approx(3 * x0 ** 2)
        assert y.partials[0].partials[0] == pytest.approx(6 * x0)

    def test_mixed_partials_symmetric(self):
        # f(x, y) = exp(x*y): fxy = exp(xy)(1 + xy)
        x0, y0 = 0.4, -0.9
        x = Dual(Dual(x0, (1.0, 0.0)), (1.0, 0.0))
        y = Dual(Dual(y0, (0.0, 1.0)), (0.0, 1.0))
        f = sc.exp(x * y)
        fxy = f.partials[0].partials[1]
        fyx = f.partials[1].partials[0]
        expected = math.exp(x0 * y0) * (1 + x0 * y0)
        assert fxy == pytest.approx(expected, rel=1e-12)
        assert fyx == pytest.approx(expected, rel=1e-12)

    def test_scalar_float_unwraps(self):
        assert sc.scalar_float(Dual(Dual(2.5, (0.0,)), (0.0,))) == 2.5
        with pytest.raises(TypeError):
            sc.scalar_float(np.ones(3))


cplx = st.complex_numbers(min_magnitude=0.0, max_magnitude=5.0,
                          allow_nan=False, allow_infinity=False)


class TestComplexLayer:
    @settings(max_examples=80, deadline=None)
    @given(cplx, cplx)
    def test_ring_ops_match_python_complex(self, a, b):
        ca, cb = Cx.from_complex(a), Cx.from_complex(b)
        assert (ca + cb).to_complex() == a + b
        assert (ca - cb).to_complex() == a - b
        assert (ca * cb).to_complex() == pytest.approx(a * b, rel=1e-12, abs=1e-12)
        if abs(b) > 1e-3:
            assert (ca / cb).to_complex() == pytest.approx(a / b, rel=1e-10, abs=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(cplx)
    def test_conj_abs(self, a):
        ca = Cx.from_complex(a)
        assert ca.conj().to_complex() == a.conjugate()
        assert ca.abs2() == pytest.approx(abs(a) ** 2, rel=1e-12, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.complex_numbers(min_magnitude=0, max_magnitude=3,
                              allow_nan=False, allow_infinity=False))
    def test_cexp(self, a):
        import cmath
        got = cexp(Cx.from_complex(a)).to_complex()
        assert got == pytest.approx(cmath.exp(a), rel=1e-12, abs=1e-12)

    def test_unit_circle_and_int_pow(self):
        z = unit_circle(0.7)
        assert z.abs2() == pytest.approx(1.0, rel=1e-15)
        w = cpow_int(Cx(1.0, 1.0), 4)
        assert w.to_complex() == pytest.approx((1 + 1j) ** 4, rel=1e-14)
        inv = cpow_int(Cx(2.0, 0.0), -2)
        assert inv.to_complex() == pytest.approx(0.25)

    def test_array_parts_broadcast(self):
        re = np.array([1.0, 2.0])
        z = Cx(re, 0.0 * re)
        w = z * z + 1.0
        assert np.allclose(w.re, [2.0, 5.0])

    def test_dual_parts_flow_through(self):
        # d/dx |x + iy|^2 = 2x via the Cx layer
        z = Cx(Dual(3.0, (1.0,)), Dual(4.0, (0.0,)))
        assert z.abs2().partials[0] == pytest.approx(6.0)
