"""Forward-mode derivatives of defining functions."""

import numpy as np
import pytest

from discgeom import catalog_get
from discgeom.numdiff import (
    complex_hessian,
    directional_derivative,
    fd_crosscheck,
    real_gradient,
    real_hessian,
    wirtinger_first,
)

BALL = catalog_get("ball")
WORM = catalog_get("worm", {"beta": 2.0})
DANGELO = catalog_get("dangelo")
EXPFLAT = catalog_get("expflat")


def dsl_func(text, n):
    from discgeom.defexpr import eval_node, parse

    ast = parse(text, n)
    return lambda zs: eval_node(ast.root, zs, {}, strict=np.ndim(zs[0].re) == 0)


class TestRealGradient:
    def test_sphere_at_pole(self):
        g = real_gradient(BALL.func, (1 + 0j, 0j))
        assert np.allclose(g, [2.0, 0.0, 0.0, 0.0], atol=0)

    def test_linear(self):
        f = dsl_func("Re(z1)", 2)
        g = real_gradient(f, (0.3 - 0.8j, 1.1 + 0.2j))
        assert np.array_equal(g, [1.0, 0.0, 0.0, 0.0])

    def test_vanishing_factor_on_curve(self):
        zeta = 0.1
        z = (0j, complex(zeta) ** 3, complex(zeta) ** 2)
        g = real_gradient(DANGELO.func, z)
        assert g[0] == 1.0 and g[1] == 0.0
        # the squared-modulus factor vanishes on the curve, killing the rest
        assert np.max(np.abs(g[2:])) < 1e-20

    def test_exact_for_polynomials(self):
        f = dsl_func("abs2(z1)^2 + Im(z1*z2)", 2)
        z = (0.5 + 0.25j, -1.0 + 2.0j)
        g = real_gradient(f, z)
        x, y = 0.5, 0.25
        # d/dx (x^2+y^2)^2 = 4x(x^2+y^2); Im(z1 z2) = x1 y2 + y1 x2
        assert g[0] == pytest.approx(4 * x * (x * x + y * y) + 2.0, rel=1e-15)
        assert g[1] == pytest.approx(4 * y * (x * x + y * y) + (-1.0), rel=1e-15)

    def test_directional_matches_gradient(self):
        z = (0.2 + 0.1j, -0.4 + 0.9j)
        g = real_gradient(WORM.func, z)
        v = np.array([0.3, -1.0, 0.7, 0.2])
        dd = directional_derivative(WORM.func, z, v)
        assert dd == pytest.approx(float(g @ v), rel=1e-12)


class TestWirtinger:
    def test_worm_annulus_point(self):
        w = wirtinger_first(WORM.func, (0j, 1 + 0j))
        assert w.dz[0] == pytest.approx(1.0 + 0j, abs=1e-15)
        assert w.dz[1] == pytest.approx(0j, abs=1e-15)

    def test_linear(self):
        f = dsl_func("Re(z1)", 2)
        w = wirtinger_first(f, (0.7 + 0.1j, 0j))
        assert w.dz[0] == 0.5 + 0j
        assert w.dz[1] == 0j

    def test_abs_squared(self):
        f = dsl_func("abs2(z1)", 2)
        z1 = 0.3 - 1.2j
        w = wirtinger_first(f, (z1, 0j))
        assert w.dz[0] == pytest.approx(z1.conjugate(), rel=1e-15)

    def test_conjugate_pairing_exact(self):
        for z in [(0.2 + 0.4j, 1.0 - 0.3j), (-0.5 + 0.1j, 0.8 + 0.8j)]:
            w = wirtinger_first(WORM.func, z)
            assert np.array_equal(w.dzbar, np.conj(w.dz))

    def test_reconstruction_identities(self):
        z = (0.2 + 0.4j, 1.0 - 0.3j)
        g = real_gradient(WORM.func, z)
        w = wirtinger_first(WORM.func, z)
        assert np.array_equal(g[0::2], 2.0 * np.real(w.dz))
        assert np.array_equal(g[1::2], -2.0 * np.imag(w.dz))


class TestComplexHessian:
    def test_sphere_identity(self):
        for z in [(0.1 + 0.2j, 0.5 - 0.1j), (1 + 0j, 0j)]:
            H = complex_hessian(BALL.func, z)
            assert np.allclose(H, np.eye(2), atol=1e-15)

    def test_worm_degenerate_corner(self):
        H = complex_hessian(WORM.func, (0j, 1 + 0j))
        assert H[1, 1] == 0j

    def test_quartic(self):
        f = dsl_func("Re(z1) + abs2(z2)^2", 2)
        H = complex_hessian(f, (0j, 1 + 0j))
        assert H[1, 1] == pytest.approx(4.0 + 0j, rel=1e-14)

    def test_hermitian_on_catalog_samples(self):
        rng = np.random.default_rng(5)
        for d in (BALL, WORM, DANGELO, EXPFLAT):
            for z in d.sample_interior(10, rng):
                H = complex_hessian(d.func, tuple(z))
                scale = max(1.0, float(np.max(np.abs(H))))
                assert np.max(np.abs(H - H.conj().T)) / scale < 1e-10

    def test_real_hessian_symmetric(self):
        z = (0.2 - 0.7j, 0.9 + 0.1j)
        Hr = real_hessian(WORM.func, z)
        assert np.max(np.abs(Hr - Hr.T)) < 1e-12 * max(1.0, np.max(np.abs(Hr)))


class TestFdCrosscheck:
    def test_polynomial(self):
        f = dsl_func("abs2(z1)^2 + abs2(z2) - 1", 2)
        gap = fd_crosscheck(f, (0.4 + 0.3j, -0.2 + 0.6j), 1e-5)
        assert gap < 1e-8

    def test_flat_exponential_off_origin(self):
        gap = fd_crosscheck(EXPFLAT.func, (-0.3 + 0j, 0.5 + 0j), 1e-5)
        assert gap < 1e-6

    def test_linear_exact_at_dyadic_point(self):
        f = dsl_func("Re(z1)", 2)
        gap = fd_crosscheck(f, (0.5 + 0.25j, 0j), 0.25)
        assert gap == 0.0

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError):
            fd_crosscheck(BALL.func, (0j, 0j), 0.0)


class TestCatalogAgreement:
    """Dual gradients vs central differences across the whole catalog."""

    @pytest.mark.parametrize("name,params", [
        ("ball", {}), ("egg", {"m": 2}), ("egg", {"m": 3}),
        ("worm", {"beta": 2.0}), ("flz1", {}), ("flz2", {}),
        ("expflat", {}), ("double_expflat", {}), ("dangelo", {}),
        ("c3_mixed", {}),
    ])
    def test_random_interior_points(self, name, params):
        d = catalog_get(name, params)
        rng = np.random.default_rng(77)
        pts = d.sample_interior(100, rng)
        for z in pts:
            scale = max(1.0, float(np.max(np.abs(z))))
            gap = fd_crosscheck(d.func, tuple(z), 1e-5 * scale)
            if gap > 1e-6:
                # flat-exponential junction shells have unbounded third
                # derivatives; validate with the best step from a short ladder
                gap = min(fd_crosscheck(d.func, tuple(z), h * scale)
                          for h in (1e-6, 1e-7, 3e-8))
            assert gap <= 1e-6, f"{name} at {z}"
