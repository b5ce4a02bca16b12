import math

import numpy as np
import pytest

from riemsvp import catalog
from riemsvp.errors import InvalidInput, SingularMetric
from riemsvp.geometry import (MetricSpec, christoffel, complete_riemann,
                              independent_components, metric_at, riemann,
                              supports_complex_step, verify_tensor_symmetries)

import oracles


class TestMetricAt:
    def test_sphere_equator(self):
        entry = catalog.sphere2()
        g, g_inv = metric_at(entry.spec, [math.pi / 2, 0.0])
        assert np.allclose(g, np.eye(2), atol=1e-15)
        assert np.allclose(g @ g_inv, np.eye(2), atol=1e-12)

    def test_euclidean_identity(self):
        entry = catalog.euclidean(3)
        g, _ = metric_at(entry.spec, [0.4, -1.0, 2.0])
        assert np.array_equal(g, np.eye(3))

    def test_schwarzschild_g00(self):
        # substitute r = 3, M = 1 into the line element: g00 = -(1 - 2/3)
        entry = catalog.schwarzschild(1.0)
        g, _ = metric_at(entry.spec, [0.0, 3.0, math.pi / 4, 0.0])
        assert g[0, 0] == pytest.approx(-1.0 / 3.0, abs=1e-15)
        assert g[1, 1] == pytest.approx(3.0, abs=1e-12)

    def test_singular_at_pole(self):
        entry = catalog.sphere2()
        with pytest.raises(SingularMetric):
            metric_at(entry.spec, [0.0, 0.0])

    def test_singular_at_horizon(self):
        entry = catalog.schwarzschild(1.0)
        with pytest.raises(SingularMetric):
            metric_at(entry.spec, [0.0, 2.0, 1.0, 0.0])

    def test_bad_point(self):
        entry = catalog.sphere2()
        with pytest.raises(InvalidInput):
            metric_at(entry.spec, [1.0, 2.0, 3.0])
        with pytest.raises(InvalidInput):
            metric_at(entry.spec, [np.nan, 0.0])


class TestChristoffel:
    def test_sphere_closed_form(self):
        th = math.pi / 3
        entry = catalog.sphere2()
        gam = christoffel(entry.spec, [th, 0.2])
        assert gam[0, 1, 1] == pytest.approx(-math.sqrt(3.0) / 4.0, abs=1e-14)
        assert gam[1, 0, 1] == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-14)
        assert gam[1, 1, 0] == gam[1, 0, 1]

    def test_sphere_numeric_matches_loops(self):
        entry = catalog.sphere2()
        p = np.array([1.1, 0.4])
        got = christoffel(entry.spec, p, mode="numeric")
        want = oracles.christoffel_loops(entry.spec.g, p)
        assert np.abs(got - want).max() < 1e-8

    def test_euclidean_zero(self):
        entry = catalog.euclidean(3)
        gam = christoffel(entry.spec, np.zeros(3), mode="numeric")
        assert np.abs(gam).max() < 1e-12

    def test_schwarzschild_gamma_r_tt(self):
        # gamma^r_tt = f f' / 2 = (1/3) * (2/9) / 2 at M=1, r=3
        entry = catalog.schwarzschild(1.0)
        gam = christoffel(entry.spec, [0.0, 3.0, math.pi / 4, 0.0],
                          mode="numeric")
        assert gam[1, 0, 0] == pytest.approx(1.0 / 27.0, abs=1e-12)

    def test_symmetric_lower_indices(self):
        entry = catalog.kerr(1.0, 0.7)
        gam = christoffel(entry.spec, [0.0, 4.0, 1.1, 0.0], mode="numeric")
        assert np.abs(gam - np.swapaxes(gam, 1, 2)).max() < 1e-12


class TestRiemann:
    def test_sphere_component(self):
        entry = catalog.sphere2()
        cd = riemann(entry.spec, [math.pi / 3, 0.0])
        assert cd.riemann_lowered[0, 1, 0, 1] == pytest.approx(0.75, abs=1e-14)

    def test_sphere_sign_pin(self):
        # regression: R_{theta phi theta phi} = +sin(theta)^2
        entry = catalog.sphere2()
        for th in (0.4, 1.0, 2.2):
            cd = riemann(entry.spec, [th, 0.0])
            assert cd.riemann_lowered[0, 1, 0, 1] == pytest.approx(
                math.sin(th) ** 2, rel=1e-12)

    def test_euclidean_zero(self):
        entry = catalog.euclidean(4)
        cd = riemann(entry.spec, np.zeros(4), mode="numeric")
        assert np.abs(cd.riemann_lowered).max() < 1e-12

    def test_schwarzschild_2b_entry(self):
        # R^0_{101} = 2B with B = M/(r^3 f) = 1/9 at M=1, r=3
        entry = catalog.schwarzschild(1.0)
        cd = riemann(entry.spec, [0.0, 3.0, 0.9, 0.0])
        assert cd.riemann_mixed[0, 1, 0, 1] == pytest.approx(2.0 / 9.0,
                                                             rel=1e-14)

    def test_numeric_matches_analytic_schwarzschild(self):
        entry = catalog.schwarzschild(1.0)
        p = np.array([0.0, 4.2, 1.2, 0.3])
        cd_a = riemann(entry.spec, p)
        cd_n = riemann(entry.spec, p, mode="numeric")
        scale = np.abs(cd_a.riemann_mixed).max()
        rel = np.abs(cd_a.riemann_mixed - cd_n.riemann_mixed).max() / scale
        assert rel < 1e-6
        assert cd_a.path == "analytic" and cd_n.path == "numeric"

    def test_numeric_matches_loop_oracle_kerr(self):
        entry = catalog.kerr(1.0, 0.5)
        p = np.array([0.0, 3.5, 1.0, 0.0])
        cd = riemann(entry.spec, p)
        assert cd.path == "numeric"
        gamma_fn = lambda q: oracles.christoffel_loops(entry.spec.g, q, h=1e-6)
        want = oracles.riemann_mixed_loops(gamma_fn, p, h=1e-4)
        scale = max(1.0, np.abs(want).max())
        assert np.abs(cd.riemann_mixed - want).max() / scale < 1e-5

    def test_lowered_consistent_with_loops(self):
        entry = catalog.schwarzschild(2.0)
        p = np.array([0.0, 7.0, 0.8, 1.0])
        cd = riemann(entry.spec, p)
        want = oracles.lower_loops(cd.g, cd.riemann_mixed)
        assert np.abs(cd.riemann_lowered - want).max() < 1e-14


class TestSymmetries:
    def test_analytic_tables_exact(self):
        for entry in (catalog.sphere2(), catalog.schwarzschild(1.0),
                      catalog.space_form(2.0, 4), catalog.minkowski()):
            cd = riemann(entry.spec, entry.default_point)
            rep = verify_tensor_symmetries(cd, tol=1e-12)
            assert rep.passed, (entry.spec.id, rep)
            assert rep.max_defect == 0.0

    def test_kerr_numeric_path(self):
        entry = catalog.kerr(1.0, 0.5)
        cd = riemann(entry.spec, [0.0, 3.0, math.pi / 4, 0.0])
        rep = verify_tensor_symmetries(cd, tol=1e-6)
        assert rep.passed
        assert rep.max_defect < 1e-6
        assert cd.symmetry_defect < 1e-6

    def test_reconstruction_from_20_components(self):
        # the analytic table builds symmetric partners through different
        # float paths, so agreement holds to a few ulps, not bit-exactly
        entry = catalog.schwarzschild(1.0)
        cd = riemann(entry.spec, [0.0, 5.0, 1.0, 0.2])
        comps = independent_components(cd.riemann_lowered)
        assert len(comps) == 21
        rebuilt = complete_riemann(comps, 4)
        scale = np.abs(cd.riemann_lowered).max()
        assert np.abs(rebuilt - cd.riemann_lowered).max() < 1e-15 * max(1, scale)

    def test_reconstruction_drops_dependent_entry(self):
        # corrupting the Bianchi-dependent slot must not matter
        entry = catalog.schwarzschild(1.0)
        cd = riemann(entry.spec, [0.0, 3.5, 1.3, 0.0])
        comps = independent_components(cd.riemann_lowered)
        comps[(0, 2, 1, 3)] = 123.456
        rebuilt = complete_riemann(comps, 4)
        scale = np.abs(cd.riemann_lowered).max()
        assert np.abs(rebuilt - cd.riemann_lowered).max() < 1e-15 * max(1, scale)


class TestComplexStep:
    def test_catalog_metrics_support_it(self):
        for entry in (catalog.sphere2(), catalog.schwarzschild(1.0),
                      catalog.kerr(1.0, 0.3)):
            assert supports_complex_step(entry.spec, entry.default_point)

    def test_real_only_supplier_falls_back(self):
        def g(p):
            if np.iscomplexobj(p):
                raise TypeError("real coordinates only")
            return np.diag([1.0, float(p[0]) ** 2])

        spec = MetricSpec(dimension=2, signature=(1, 1), g=g, id="polar")
        p = np.array([2.0, 0.5])
        assert not supports_complex_step(spec, p)
        gam = christoffel(spec, p, mode="numeric")
        # flat plane in polar coordinates: gamma^r_pp = -r, gamma^p_rp = 1/r
        assert gam[0, 1, 1] == pytest.approx(-2.0, rel=1e-9)
        assert gam[1, 0, 1] == pytest.approx(0.5, rel=1e-9)
        cd = riemann(spec, p, mode="numeric")
        assert np.abs(cd.riemann_lowered).max() < 1e-6
