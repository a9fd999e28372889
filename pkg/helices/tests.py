import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from curves.frenet import bcv_biharmonic_system, biharmonic_residuals, frenet_apparatus, max_residuals
from spaces.ambients import BCVSpace
from utils.exceptions import ParameterError

from .params import HelixParams, helix_angles, helix_is_geodesic, helix_kappa_tau, make_helix
from .quartic import scan_quartic, tb_radii, tb_radius_quartic

ROOT2 = math.sqrt(2.0)


def random_helices(count, seed=13):
    rng = np.random.default_rng(seed)
    found = []
    while len(found) < count:
        a, b = rng.uniform(-0.5, 1.0), rng.uniform(-1.0, 1.0)
        r, mu = rng.uniform(0.2, 1.0), rng.uniform(-1.0, 1.0)
        if abs(4 * a - b * b) < 0.05:
            continue
        params = HelixParams(a, b, r, mu)
        if params.kappa < 0.1:
            continue
        found.append(params)
    return found


class HelixConstructionTest(SimpleTestCase):
    def test_substitution(self):
        curve = make_helix(1, 0, 1, 0)
        self.assertAlmostEqual(curve.params.lambda_a, 2.0)
        self.assertAlmostEqual(curve.params.lam, 2.0)
        np.testing.assert_allclose(curve.point(0.3), [math.sin(0.6), -math.cos(0.6), 0.0], atol=1e-15)

    def test_euclidean_unit_circle(self):
        self.assertAlmostEqual(make_helix(0, 0, 1, 0).params.lam, 1.0)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-0.5, 1), st.floats(-2, 2), st.floats(0.1, 1.2), st.floats(-2, 2), st.floats(-5, 5))
    def test_unit_speed(self, a, b, r, mu, s):
        curve = make_helix(a, b, r, mu)
        self.assertAlmostEqual(curve.speed(s), 1.0, delta=1e-10)

    def test_chart_guard(self):
        with self.assertRaises(ParameterError):
            make_helix(-1, 0, 1, 0)
        with self.assertRaises(ParameterError):
            make_helix(1, 0, 0, 0)
        with self.assertRaises(ParameterError):
            make_helix(1, 0, 1, 0, space=BCVSpace(1, 1))


class HelixAngleTest(SimpleTestCase):
    def test_horizontal_circle(self):
        sin_w, cos_w = helix_angles(1, 0, 1, 0)
        self.assertAlmostEqual(sin_w, 1.0)
        self.assertAlmostEqual(cos_w, 0.0)

    def test_substitution(self):
        sin_w, cos_w = helix_angles(1, 0, 1, 1)
        self.assertAlmostEqual(sin_w, 1 / math.sqrt(5))
        self.assertAlmostEqual(cos_w, -2 / math.sqrt(5))

    @given(st.floats(-0.5, 1), st.floats(-2, 2), st.floats(0.1, 1.2), st.floats(-2, 2))
    def test_pythagorean(self, a, b, r, mu):
        sin_w, cos_w = helix_angles(a, b, r, mu)
        self.assertAlmostEqual(sin_w ** 2 + cos_w ** 2, 1.0, delta=1e-12)

    def test_vertical_component_matches_frame(self):
        params = HelixParams(0.5, 0.8, 0.6, 0.3)
        curve = make_helix(0.5, 0.8, 0.6, 0.3)
        p, t = curve.jet(0.4, 1)
        self.assertAlmostEqual(curve.ambient.to_frame(p, t)[2], params.vertical, places=12)


class HelixCurvatureTest(SimpleTestCase):
    def test_tb_radius_values(self):
        kappa, tau = helix_kappa_tau(1, 0, ROOT2 - 1, 0)
        self.assertAlmostEqual(kappa, 2.0, places=12)
        self.assertAlmostEqual(tau, 0.0, places=12)

    def test_equator_is_geodesic(self):
        self.assertTrue(helix_is_geodesic(HelixParams(1, 0, 1, 0)))
        self.assertEqual(helix_kappa_tau(1, 0, 1, 0), (0.0, 0.0))

    def test_negative_varpi(self):
        params = HelixParams(1, 0, 2, 0)
        self.assertAlmostEqual(params.lam, 2.5)
        self.assertAlmostEqual(params.varpi, -1.5)
        self.assertAlmostEqual(helix_kappa_tau(1, 0, 2, 0)[0], 1.5)

    def test_closed_form_matches_frenet(self):
        for params in random_helices(20):
            space = BCVSpace(params.a, params.b, richardson=True)
            curve = make_helix(params.a, params.b, params.r, params.mu, space=space)
            kappa, tau = helix_kappa_tau(params.a, params.b, params.r, params.mu)
            samples = [frenet_apparatus(space, curve, s) for s in (0.0, 0.7, 1.9)]
            for sample in samples:
                self.assertAlmostEqual(sample.kappa, kappa, delta=1e-5)
                self.assertAlmostEqual(abs(sample.tau), abs(tau), delta=1e-5)
                self.assertAlmostEqual(sample.tau, tau, delta=1e-5)
                self.assertLess(abs(sample.n3), 1e-6)
                self.assertAlmostEqual(abs(sample.b3), params.sin_omega, delta=1e-6)
            self.assertLess(max(s.kappa for s in samples) - min(s.kappa for s in samples), 1e-6)
            self.assertLess(max(s.tau for s in samples) - min(s.tau for s in samples), 1e-6)

    def test_binormal_equations_agree_on_helices(self):
        for params in random_helices(5, seed=29):
            space = BCVSpace(params.a, params.b, richardson=True)
            curve = make_helix(params.a, params.b, params.r, params.mu, space=space)
            grid = np.linspace(0.0, 1.0, 4)
            worst = max_residuals(biharmonic_residuals(space, curve, grid))
            system = bcv_biharmonic_system(space, curve, grid, tolerance=1e-5)
            self.assertTrue(system.check("tau_constant").passed)
            self.assertTrue(system.check("n3").passed)
            self.assertLess(worst["binormal"], 1e-5)
            self.assertLess(worst["binormal_consistent"], 1e-5)


class CurveSystemTest(SimpleTestCase):
    def test_tb_helix_is_biharmonic(self):
        space = BCVSpace(1, 0, richardson=True)
        curve = make_helix(1, 0, ROOT2 - 1, 0, space=space)
        worst = max_residuals(biharmonic_residuals(space, curve, np.linspace(0, 1, 5)))
        for value in worst.values():
            self.assertLess(value, 1e-6)
        report = bcv_biharmonic_system(space, curve, np.linspace(0, 1, 5))
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.meta["kappa"], 2.0, delta=1e-6)

    def test_radius_two_gap(self):
        space = BCVSpace(1, 0, richardson=True)
        report = bcv_biharmonic_system(space, make_helix(1, 0, 2, 0, space=space), np.linspace(0, 1, 5))
        self.assertFalse(report.passed)
        self.assertAlmostEqual(report.check("kappa_tau_relation").max_residual, 7 / 4, delta=1e-4)
        self.assertTrue(report.check("n3").passed)

    def test_tb_radii_pass_for_every_mu(self):
        for a in (1.0, 0.5):
            space = BCVSpace(a, 0, richardson=True)
            for r2 in tb_radii(a):
                for mu in np.linspace(-1, 1, 20):
                    curve = make_helix(a, 0, math.sqrt(r2), float(mu), space=space)
                    report = bcv_biharmonic_system(space, curve, [0.0, 0.5, 1.3])
                    self.assertTrue(report.passed, report.failing)


class QuarticTest(SimpleTestCase):
    def test_b_zero_roots(self):
        expected = tb_radii(1.0)
        for mu in np.linspace(-3, 3, 20):
            roots = tb_radius_quartic(1, 0, float(mu))
            self.assertEqual((roots.c4, roots.c2, roots.c0), (2.0, -12.0, 2.0))
            self.assertEqual(len(roots.roots), 2)
            self.assertAlmostEqual(roots.r2_minus, 3 - 2 * ROOT2, delta=1e-12)
            self.assertAlmostEqual(roots.r2_plus, 3 + 2 * ROOT2, delta=1e-12)
            np.testing.assert_allclose(roots.roots, expected, atol=1e-12)

    def test_b_one_roots(self):
        np.testing.assert_allclose(tb_radius_quartic(1, 1, 0).roots,
                                   [(11 - math.sqrt(97)) / 6, (11 + math.sqrt(97)) / 6], atol=1e-12)
        np.testing.assert_allclose(tb_radius_quartic(1, 1, 1).roots,
                                   [(11 - math.sqrt(105)) / 2, (11 + math.sqrt(105)) / 2], atol=1e-12)

    def test_b_one_root_sets_are_disjoint(self):
        sets = [tb_radius_quartic(1, 1, mu).roots for mu in (0.0, 0.5, 1.0)]
        for i in range(3):
            for j in range(i + 1, 3):
                for x in sets[i]:
                    for y in sets[j]:
                        self.assertGreater(abs(x - y), 1e-3)

    def test_degenerate_leading_coefficient(self):
        roots = tb_radius_quartic(0, 1, 0.5)
        self.assertTrue(roots.degenerate)
        self.assertEqual(roots.roots, ())
        self.assertEqual(roots.rejected[0][1], "r^2 <= 0")

    def test_inadmissible_roots_are_rejected(self):
        roots = tb_radius_quartic(-1, 0, 0)
        self.assertEqual(roots.roots, ())
        self.assertTrue(roots.rejected)

    def test_tb_radii(self):
        np.testing.assert_allclose(tb_radii(1), [0.1715728752538099, 5.828427124746190], atol=1e-12)
        np.testing.assert_allclose(tb_radii(2), np.array(tb_radii(1)) / 2, atol=1e-15)
        with self.assertRaises(ParameterError):
            tb_radii(0)

    def test_scan(self):
        self.assertTrue(scan_quartic(1, 0, np.linspace(0, 1, 11)).mu_independent)
        self.assertFalse(scan_quartic(1, 1, [0, 0.5, 1]).mu_independent)
        with self.assertRaises(ParameterError):
            scan_quartic(1, 2, [0])
        with self.assertRaises(ParameterError):
            scan_quartic(1, 0, [])

    @given(st.floats(0.05, 3), st.floats(-3, 3))
    def test_b_zero_roots_are_mu_independent(self, a, mu):
        assume(a > 0)
        np.testing.assert_allclose(tb_radius_quartic(a, 0, mu).roots, tb_radii(a), rtol=1e-12)
