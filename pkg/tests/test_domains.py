"""Domain catalog: defining functions, guards, reference points, spec files."""

import math

import numpy as np
import pytest

from discgeom import catalog_get, reference_points, worm_annulus_point
from discgeom.domains import catalog_families, parse_domain_spec
from discgeom.errors import (
    BadParameterError,
    EvalDomainError,
    GuardError,
    UnknownDomainError,
)
from discgeom.numdiff import complex_hessian, real_gradient, wirtinger_first


class TestCatalogGet:
    def test_egg(self):
        d = catalog_get("egg", {"m": 2})
        assert d.value((1 + 0j, 0j)) == 0.0
        assert d.value((0j, 0j)) == -1.0

    def test_worm_annulus_boundary(self):
        d = catalog_get("worm", {"beta": 2.0})
        assert d.value((0j, 1 + 0j)) == 0.0
        refs = [r for r in reference_points(d) if r.kind == "infinite_type"]
        assert any(np.allclose(r.point, (0j, 1 + 0j)) for r in refs)

    def test_dangelo_curve_point(self):
        d = catalog_get("dangelo")
        zeta = 0.1
        assert abs(d.value((0j, complex(zeta) ** 3, complex(zeta) ** 2))) < 1e-30

    def test_unknown_name(self):
        with pytest.raises(UnknownDomainError):
            catalog_get("banana")

    def test_bad_parameters(self):
        with pytest.raises(BadParameterError):
            catalog_get("worm", {"beta": 1.0})
        with pytest.raises(BadParameterError):
            catalog_get("egg", {"m": 0})
        with pytest.raises(BadParameterError):
            catalog_get("egg", {"m": 2.5})
        with pytest.raises(BadParameterError):
            catalog_get("double_expflat", {"alpha1": -1.0})

    def test_every_family_constructible(self):
        for name in catalog_families():
            if name == "dsl":
                d = catalog_get("dsl", {"expr": "abs2(z1) + abs2(z2) - 1", "n": 2})
            elif name == "egg":
                d = catalog_get(name, {"m": 2})
            elif name == "worm":
                d = catalog_get(name, {"beta": 2.0})
            else:
                d = catalog_get(name)
            assert d.n >= 2


class TestWitnessesAndGuards:
    @pytest.mark.parametrize("name,params", [
        ("ball", {}), ("egg", {"m": 3}), ("worm", {"beta": 2.0}), ("flz1", {}),
        ("flz2", {}), ("expflat", {}), ("double_expflat", {}), ("dangelo", {}),
        ("c3_mixed", {}),
    ])
    def test_interior_witness(self, name, params):
        d = catalog_get(name, params)
        assert d.value(d.witness) < -1e-6

    def test_worm_guard(self):
        d = catalog_get("worm", {"beta": 2.0})
        with pytest.raises(GuardError):
            d.value((0j, 0j))

    def test_value_batch_masks_guard(self):
        d = catalog_get("worm", {"beta": 2.0})
        pts = np.array([[0j, 1 + 0j], [0j, 0j], [-1 + 0j, 1 + 0j]])
        vals = d.value_batch(pts)
        assert vals[0] == 0.0
        assert np.isnan(vals[1])
        assert vals[2] == pytest.approx(-1.0)

    def test_reference_points_are_boundary(self):
        for name, params in [("ball", {}), ("egg", {"m": 2}),
                             ("worm", {"beta": 2.0}), ("flz1", {}), ("flz2", {}),
                             ("expflat", {}), ("double_expflat", {}),
                             ("dangelo", {}), ("c3_mixed", {})]:
            d = catalog_get(name, params)
            for ref in reference_points(d):
                assert abs(d.value(ref.point)) < 1e-10, (name, ref.point)
                grad = real_gradient(d.func, ref.point)
                assert np.linalg.norm(grad) > 1e-8

    def test_locality_box(self):
        d = catalog_get("dangelo")
        assert d.in_box((0j, 0j, 0j))
        assert not d.in_box((2 + 0j, 0j, 0j))
        assert catalog_get("ball").in_box((5 + 0j, 0j))  # no box

    def test_interior_sampling(self):
        rng = np.random.default_rng(3)
        for name, params in [("worm", {"beta": 2.0}), ("dangelo", {})]:
            d = catalog_get(name, params)
            pts = d.sample_interior(50, rng)
            assert len(pts) == 50
            vals = d.value_batch(pts)
            assert np.all(np.isfinite(vals)) and np.all(vals < 0)
            assert all(d.in_box(tuple(p)) for p in pts)


class TestWormStructure:
    """Flatness of the profile and degeneracy along the annulus."""

    BETA = 2.0

    def setup_method(self):
        self.d = catalog_get("worm", {"beta": self.BETA})
        self.half = self.BETA - math.pi / 2.0

    def test_annulus_points_are_boundary(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            theta = rng.uniform(-self.half, self.half)
            phase = rng.uniform(0, 2 * math.pi)
            p = worm_annulus_point(self.BETA, theta, phase)
            assert abs(self.d.value(p)) < 1e-10

    def test_annulus_derivative_degeneracy(self):
        # z2-Wirtinger derivative and the (2,2) Hessian entry vanish on the
        # annulus; the z1-derivative does not.
        rng = np.random.default_rng(12)
        for _ in range(10):
            theta = rng.uniform(-self.half, self.half)
            p = worm_annulus_point(self.BETA, theta, rng.uniform(0, 2 * math.pi))
            w = wirtinger_first(self.d.func, p)
            assert abs(w.dz[1]) < 1e-10
            assert abs(w.dz[0]) > 0.5
            H = complex_hessian(self.d.func, p)
            assert abs(H[1, 1]) < 1e-10

    def test_annulus_radii_match_flat_zone(self):
        inner = worm_annulus_point(self.BETA, -self.half)
        outer = worm_annulus_point(self.BETA, self.half)
        assert abs(inner[1]) == pytest.approx(math.exp(-self.BETA / 2 + math.pi / 4))
        assert abs(outer[1]) == pytest.approx(math.exp(self.BETA / 2 - math.pi / 4))
        with pytest.raises(BadParameterError):
            worm_annulus_point(self.BETA, self.half + 0.1)


class TestFlz2Structure:
    def test_flat_piece_derivatives(self):
        d = catalog_get("flz2")
        kappa = d.params["kappa"]
        rng = np.random.default_rng(13)
        for _ in range(10):
            phase = rng.uniform(0, 2 * math.pi)
            w = rng.uniform(0, 1 - kappa - 0.05) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            p = (complex(math.cos(phase), math.sin(phase)), complex(w))
            assert abs(d.value(p)) < 1e-10
            wd = wirtinger_first(d.func, p)
            assert abs(wd.dz[0]) > 1e-3
            assert abs(wd.dz[1]) < 1e-10
            H = complex_hessian(d.func, p)
            assert abs(H[1, 1]) < 1e-10 and abs(H[0, 1]) < 1e-10


class TestDomainSpecFiles:
    def test_catalog_spec(self):
        d = parse_domain_spec("""
        # a worm domain
        name = worm
        params.beta = 2.5
        """)
        assert d.name == "worm" and d.params["beta"] == 2.5

    def test_dsl_spec(self):
        d = parse_domain_spec("""
        name = dsl
        n = 2
        expr = abs2(z1) + abs2(z2) - 1
        witness = 0,0;0,0
        box = 2.0
        """)
        assert d.value((1 + 0j, 0j)) == 0.0
        assert d.value(d.witness) == -1.0
        assert d.box == 2.0

    def test_dsl_spec_with_guard_and_params(self):
        d = parse_domain_spec("""
        name = dsl
        n = 2
        expr = abs2(z1) - $r2 + exp(-1/abs2(z2))
        params.r2 = 1.0
        guard = z2 != 0
        """)
        with pytest.raises(GuardError):
            d.value((0.5 + 0j, 0j))
        assert d.value((0.5 + 0j, 10 + 0j)) == pytest.approx(
            0.25 - 1.0 + math.exp(-0.01))

    def test_dsl_missing_param(self):
        with pytest.raises(BadParameterError):
            parse_domain_spec("name = dsl\nn = 2\nexpr = Re(z1) - $c\n")

    def test_bad_key(self):
        with pytest.raises(BadParameterError):
            parse_domain_spec("name = ball\ncolor = red\n")

    def test_every_family_example_from_docs(self, tmp_path):
        # the documented example files for every family must load
        examples = {
            "ball": "name = ball\n",
            "egg": "name = egg\nparams.m = 3\n",
            "worm": "name = worm\nparams.beta = 2.0\n",
            "flz1": "name = flz1\n",
            "flz2": "name = flz2\nparams.kappa = 0.1\n",
            "expflat": "name = expflat\n",
            "double_expflat": "name = double_expflat\nparams.alpha1 = 2\nparams.alpha2 = 1\n",
            "dangelo": "name = dangelo\n",
            "c3_mixed": "name = c3_mixed\n",
            "dsl": "name = dsl\nn = 3\nexpr = Re(z1) + abs2(z2) + abs2(z3)^3\nbox = 1.0\n",
        }
        from discgeom import load_domain_file

        for name, text in examples.items():
            path = tmp_path / f"{name}.domain"
            path.write_text(text)
            d = load_domain_file(path)
            assert d.name == name
