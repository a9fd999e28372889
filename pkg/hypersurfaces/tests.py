import math

import numpy as np
from django.test import SimpleTestCase

from catalog.cases import equator, hopf_cylinder, round_cylinder_r3, small_hypersphere, tb_cylinder
from catalog.immersions import CliffordTorus, SmallSphere
from spaces.ambients import BCVSpace, SpaceFormN
from utils.exceptions import (
    ChartExitError, DegenerateImmersionError, DomainError, InvarianceError, StencilError,
)

from .checks import (
    biharmonic_check, biminimal_check, hopf_base_data, isoparametric_spread, tb_geodesic_check,
    tb_pointwise_check, tb_principal_constraint,
)
from .geodesics import GeodesicResult, geodesic_residuals, surface_geodesic
from .immersion import (
    Immersion, first_fundamental, laplace_beltrami, second_fundamental_form, shape_operator,
    weingarten_residual,
)

BOX = (np.array([-0.5, -0.5]), np.array([0.5, 0.5]))


class Paraboloid(Immersion):
    """z = (x^2 + y^2)/2 in Euclidean space; only point() is given."""
    def __init__(self):
        super().__init__(SpaceFormN(3, 0.0), 2, BOX, label="paraboloid")

    def point(self, u):
        return np.array([u[0], u[1], 0.5 * (u[0] ** 2 + u[1] ** 2)])

    def normal_hint(self, u):
        return np.array([0.0, 0.0, 1.0])


class Collapsed(Immersion):
    def __init__(self):
        super().__init__(SpaceFormN(3, 0.0), 2, BOX, label="collapsed")

    def point(self, u):
        return np.array([u[0] + u[1], u[0] + u[1], 0.0])


class HorizontalSlice(Immersion):
    """The slice z = 0 of N(1, 1); its normal is not horizontal."""
    def __init__(self):
        super().__init__(BCVSpace(1.0, 1.0), 2, BOX, label="slice")

    def point(self, u):
        return np.array([u[0], u[1], 0.0])


def samples(imm, count=3, seed=3):
    return list(imm.sample_points(count, np.random.default_rng(seed)))


class FundamentalFormTest(SimpleTestCase):
    def test_fallback_derivatives(self):
        imm = Paraboloid()
        u = np.array([0.2, -0.1])
        np.testing.assert_allclose(imm.jacobian(u), [[1, 0], [0, 1], [0.2, -0.1]], atol=1e-8)
        np.testing.assert_allclose(imm.hessian(u)[2], np.eye(2), atol=1e-6)

    def test_paraboloid_apex(self):
        data = shape_operator(Paraboloid(), np.zeros(2))
        np.testing.assert_allclose(data.principal, [1.0, 1.0], atol=1e-6)
        self.assertAlmostEqual(data.H, 1.0, places=6)
        self.assertAlmostEqual(data.K_e, 1.0, places=5)

    def test_orientation_flips_the_normal(self):
        u = np.array([0.1, 0.2])
        up, down = Paraboloid(), Paraboloid()
        down.orientation = -1
        np.testing.assert_allclose(first_fundamental(up, u)[1], -first_fundamental(down, u)[1])
        np.testing.assert_allclose(second_fundamental_form(up, u), -second_fundamental_form(down, u), atol=1e-9)

    def test_degenerate(self):
        with self.assertRaises(DegenerateImmersionError):
            first_fundamental(Collapsed(), np.zeros(2))

    def test_outside_chart(self):
        with self.assertRaises(DomainError):
            shape_operator(Paraboloid(), np.array([0.6, 0.0]))
        with self.assertRaises(DomainError):
            shape_operator(Paraboloid(), np.zeros(3))

    def test_sphere_normal_is_tangent_to_the_sphere(self):
        imm = SmallSphere(3)
        u = np.array([0.1, -0.2])
        g, eta = first_fundamental(imm, u)
        self.assertAlmostEqual(eta @ imm.point(u), 0.0, places=12)
        self.assertAlmostEqual(eta @ eta, 1.0, places=12)
        np.testing.assert_allclose(imm.jacobian(u).T @ eta, 0.0, atol=1e-12)

    def test_weingarten(self):
        for imm in (CliffordTorus(1, 2), SmallSphere(4), hopf_cylinder(1, 1, 1).immersion, Paraboloid()):
            u = samples(imm, 1)[0]
            self.assertLess(weingarten_residual(imm, u), 1e-6, imm.name)


class LaplaceTest(SimpleTestCase):
    def test_flat_torus(self):
        imm = CliffordTorus(1, 1)
        for u in (np.array([0.3, 0.1]), np.array([1.1, -0.7])):
            value = laplace_beltrami(imm, lambda v: math.sin(v[0]), u)
            self.assertAlmostEqual(value, 2.0 * math.sin(u[0]), delta=1e-3)

    def test_constant_function(self):
        self.assertAlmostEqual(laplace_beltrami(SmallSphere(3), lambda v: 3.0, np.array([0.1, 0.1])), 0.0)

    def test_stencil_must_fit(self):
        with self.assertRaises(StencilError):
            laplace_beltrami(SmallSphere(3), lambda v: v[0], np.array([0.67, 0.66]))


class GeodesicTest(SimpleTestCase):
    def test_flat_torus_geodesics_are_straight(self):
        imm = CliffordTorus(1, 1)
        u0, direction = np.array([0.2, -0.3]), np.array([1.0, 1.0])
        trace = surface_geodesic(imm, u0, direction, 0.5, 0.01)
        np.testing.assert_allclose(trace.nodes[-1][:2], u0 + 0.5 * direction, atol=1e-8)

    def test_unit_speed(self):
        imm = hopf_cylinder(1, 1, 1).immersion
        direction = np.array([0.6, 0.8])
        trace = surface_geodesic(imm, np.array([0.1, 0.0]), direction, 0.5, 0.01)
        for s in (0.05, 0.23, 0.41):
            self.assertAlmostEqual(trace.speed(s), 1.0, places=6)

    def test_unit_speed_over_long_runs(self):
        u0, v = np.array([0.1, 0.0]), np.array([0.6, 0.8])
        for imm in (hopf_cylinder(1, 1, 1).immersion, CliffordTorus(1, 1)):
            direction = v / math.sqrt(v @ imm.metric(u0) @ v)
            trace = surface_geodesic(imm, u0, direction, 10.0, 0.01)
            self.assertAlmostEqual(trace.length, 10.0)
            for s in np.linspace(0.1, 9.9, 25):
                self.assertLess(abs(trace.speed(s) - 1.0), 1e-6, (imm.name, s))

    def test_chart_exit(self):
        imm = SmallSphere(3)
        with self.assertRaises(ChartExitError):
            surface_geodesic(imm, np.array([0.5, 0.0]), np.array([math.sqrt(2.0), 0.0]), 3.0, 0.01)

    def test_verdicts(self):
        result = GeodesicResult(index=0, u0=np.zeros(2), dir0=np.zeros(2), normal=0.5)
        self.assertEqual(result.verdict(0.1), "fail")
        self.assertEqual(result.verdict(1.0), "pass")
        self.assertEqual(GeodesicResult(0, np.zeros(2), np.zeros(2), skipped=True).verdict(0.1), "skipped")
        self.assertEqual(GeodesicResult(0, np.zeros(2), np.zeros(2), vacuous=True).verdict(0.1), "vacuous-pass")


class BiharmonicCheckTest(SimpleTestCase):
    def test_small_hypersphere(self):
        imm = small_hypersphere(3).immersion
        self.assertTrue(biharmonic_check(imm, samples(imm)).passed)

    def test_minimal_clifford_torus(self):
        imm = CliffordTorus(1, 1)
        report = biharmonic_check(imm, samples(imm))
        self.assertTrue(report.passed, report.failing)

    def test_round_cylinder_is_not_biminimal(self):
        imm = round_cylinder_r3(1.0).immersion
        report = biminimal_check(imm, samples(imm))
        self.assertAlmostEqual(report.check("biminimal").max_residual, 0.5, places=6)
        self.assertFalse(report.passed)


class TotallyBiharmonicCheckTest(SimpleTestCase):
    def test_clifford_torus_passes(self):
        imm = CliffordTorus(1, 1)
        report = tb_pointwise_check(imm, samples(imm))
        self.assertEqual(report.meta["branch"], "pointwise")
        self.assertTrue(report.passed, report.failing)

    def test_equator_is_totally_geodesic(self):
        imm = equator(3).immersion
        report = tb_pointwise_check(imm, samples(imm))
        self.assertEqual(report.meta["branch"], "totally_geodesic")
        self.assertTrue(report.passed)

    def test_round_cylinder_fails_s2(self):
        imm = round_cylinder_r3(1.0).immersion
        report = tb_pointwise_check(imm, samples(imm, 2))
        self.assertAlmostEqual(report.check("tb_s2").max_residual, 1.0, places=6)
        self.assertFalse(report.passed)

    def test_round_cylinder_diagonal_geodesic(self):
        # the omega = pi/4 geodesic of the unit cylinder is a helix with kappa = tau = 1/2
        imm = round_cylinder_r3(1.0).immersion
        direction = np.array([1.0, 1.0]) / math.sqrt(2.0)
        result = geodesic_residuals(imm, np.zeros(2), direction, 0.5, 0.01)
        self.assertAlmostEqual(result.extras["kappa"], 0.5, delta=1e-4)
        self.assertAlmostEqual(abs(result.extras["tau"]), 0.5, delta=1e-4)
        self.assertAlmostEqual(result.normal, 0.5, delta=1e-4)
        self.assertAlmostEqual(result.extras["kappa"] * result.normal, 0.25, delta=1e-4)
        self.assertEqual(result.verdict(0.1), "fail")

    def test_tb_cylinder_geodesics(self):
        imm = tb_cylinder(4).immersion
        report = tb_geodesic_check(imm, count=3, tolerances={"tb_geodesic": 1e-4})
        self.assertTrue(report.passed, report.as_dict())
        self.assertEqual(report.meta["skipped"], 0)

    def test_negative_control_geodesics(self):
        imm = hopf_cylinder(1, 0, 2).immersion
        report = tb_geodesic_check(imm, count=4, expect="above")
        self.assertEqual(report.check("tb_geodesic").tolerance, 0.1)
        self.assertTrue(report.passed)

    def test_principal_constraint(self):
        self.assertEqual(tb_principal_constraint(4.0), (2.0, -2.0))
        self.assertEqual(tb_principal_constraint(0.0), ())
        self.assertEqual(tb_principal_constraint(-1.0), ())

    def test_isoparametric(self):
        imm = CliffordTorus(1, 2)
        self.assertLess(isoparametric_spread(imm, samples(imm, 4)), 1e-9)


class HopfBaseTest(SimpleTestCase):
    def test_totally_biharmonic_radius(self):
        case = tb_cylinder(4)
        data = hopf_base_data(case.ambient, case.immersion)
        self.assertAlmostEqual(data.kappa_g, 2.0, places=6)
        self.assertLess(max(data.residuals.values()), 1e-6)
        self.assertLess(abs(data.K_e), 1e-6)

    def test_both_radii_differ_by_orientation(self):
        u = np.array([0.3, 0.1])
        inner = shape_operator(tb_cylinder(4).immersion, u)
        outer = shape_operator(tb_cylinder(4, "+").immersion, u)
        np.testing.assert_allclose(inner.g, outer.g, atol=1e-6)
        self.assertAlmostEqual(inner.II[0, 0], 2.0, delta=1e-6)
        self.assertAlmostEqual(outer.II[0, 0], -inner.II[0, 0], delta=1e-6)
        self.assertAlmostEqual(outer.II[1, 1], 0.0, delta=1e-6)

    def test_extrinsic_curvature_sign(self):
        case = hopf_cylinder(1, 1, 1)
        data = hopf_base_data(case.ambient, case.immersion)
        self.assertAlmostEqual(data.kappa_g, 0.0, places=6)
        self.assertAlmostEqual(data.K_e, -0.25, places=6)
        self.assertEqual(data.K_e_sign, -1)
        self.assertLess(data.residuals["S_norm2"], 1e-6)

    def test_requires_invariance(self):
        imm = HorizontalSlice()
        with self.assertRaises(InvarianceError):
            hopf_base_data(imm.ambient, imm, [np.zeros(2)])


class SphereGeodesicTest(SimpleTestCase):
    def test_clifford_torus_geodesics_satisfy_the_curvature_relation(self):
        report = tb_geodesic_check(CliffordTorus(1, 1), count=4)
        self.assertTrue(report.passed, report.as_dict())
        self.assertAlmostEqual(report.meta["kappa2_tau2_max"], 1.0, delta=1e-5)
