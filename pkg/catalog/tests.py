import math

import numpy as np
from django.test import SimpleTestCase

from curves.frenet import biharmonic_residuals, max_residuals
from hypersurfaces.immersion import shape_operator
from spaces.ambients import BCVSpace
from utils.exceptions import ParameterError, UnknownCaseError
from utils.numerics import partials

from .cases import clifford_geodesic, clifford_torus, equator, hopf_cylinder, small_hypersphere, tb_cylinder
from .charts import AngleChart, GraphChart
from .immersions import CliffordTorus, HopfCylinder, SmallSphere, format_param
from .registry import STANDARD_CASES, resolve, resolve_many


def finite_difference_blocks(imm, u, h=1e-5):
    return (partials(imm.point, u, h).T,
            np.moveaxis(partials(imm.jacobian, u, h), 0, -1),
            np.moveaxis(partials(imm.hessian, u, h), 0, -1))


class ChartTest(SimpleTestCase):
    def test_angle_chart(self):
        chart = AngleChart()
        np.testing.assert_allclose(chart.point([0.3]), [math.cos(0.3), math.sin(0.3)])
        np.testing.assert_allclose(chart.third([0.3])[:, 0, 0, 0], [math.sin(0.3), -math.cos(0.3)], atol=1e-15)

    def test_graph_chart_lies_on_sphere(self):
        chart = GraphChart(3)
        w = np.array([0.2, -0.3, 0.4])
        y = chart.point(w)
        self.assertAlmostEqual(y @ y, 1.0, places=14)
        np.testing.assert_allclose(chart.jacobian(w).T @ y, 0.0, atol=1e-14)

    def test_graph_chart_derivatives(self):
        chart = GraphChart(2)
        w = np.array([0.3, -0.2])
        np.testing.assert_allclose(np.moveaxis(partials(chart.jacobian, w, 1e-5), 0, -1), chart.hessian(w),
                                   atol=1e-8)
        np.testing.assert_allclose(np.moveaxis(partials(chart.hessian, w, 1e-5), 0, -1), chart.third(w),
                                   atol=1e-7)

    def test_graph_chart_domain(self):
        chart = GraphChart(2)
        self.assertTrue(chart.contains([0.5, 0.5]))
        self.assertFalse(chart.contains([0.7, 0.7]))
        with self.assertRaises(ValueError):
            GraphChart(1)


class ImmersionTest(SimpleTestCase):
    def test_closed_forms_match_differences(self):
        examples = [
            (CliffordTorus(1, 2), np.array([0.4, 0.1, -0.2])),
            (SmallSphere(4), np.array([0.1, 0.2, -0.3])),
            (HopfCylinder(BCVSpace(1.0, 1.0), 1.0), np.array([0.3, 0.2])),
        ]
        for imm, u in examples:
            J, D2, D3 = finite_difference_blocks(imm, u)
            np.testing.assert_allclose(imm.jacobian(u), J, atol=1e-8, err_msg=imm.name)
            np.testing.assert_allclose(imm.hessian(u), D2, atol=1e-7, err_msg=imm.name)
            np.testing.assert_allclose(imm.third(u), D3, atol=1e-6, err_msg=imm.name)

    def test_points_on_unit_sphere(self):
        for imm in (CliffordTorus(2, 1), SmallSphere(3)):
            u = np.full(imm.param_dim, 0.2)
            x = imm.point(u)
            self.assertAlmostEqual(x @ x, 1.0, places=14)

    def test_hopf_cylinder_is_isometric_to_the_plane(self):
        imm = HopfCylinder(BCVSpace(1.0, 0.5), 0.7)
        for s in (0.0, 0.4, 1.3):
            np.testing.assert_allclose(imm.metric(np.array([s, 0.1])), np.eye(2), atol=1e-12)

    def test_hopf_cylinder_chart_guard(self):
        with self.assertRaises(ParameterError):
            HopfCylinder(BCVSpace(-1.0, 0.0), 1.0)
        with self.assertRaises(ParameterError):
            HopfCylinder(BCVSpace(1.0, 0.0), -1.0)


class CaseExpectationTest(SimpleTestCase):
    def assertPrincipal(self, case, u, places=9):
        data = shape_operator(case.immersion, u)
        for got, want in zip(data.principal, case.expected.principal):
            self.assertAlmostEqual(got, want, places=places)
        self.assertAlmostEqual(data.H, case.expected.mean_curvature, places=places)

    def test_clifford_torus(self):
        self.assertPrincipal(clifford_torus(1, 1), np.array([0.3, -0.5]))
        case = clifford_torus(1, 2)
        self.assertEqual(case.expected.principal, (1.0, -1.0, -1.0))
        self.assertPrincipal(case, np.array([0.3, 0.2, 0.1]))

    def test_small_hypersphere_and_equator(self):
        self.assertPrincipal(small_hypersphere(3), np.array([0.1, 0.2]))
        self.assertPrincipal(equator(4), np.array([0.1, 0.2, 0.3]))
        self.assertTrue(equator(3).expected.totally_geodesic)

    def test_hopf_expectations(self):
        for case in (hopf_cylinder(1, 0, 2), hopf_cylinder(1, 1, 1), tb_cylinder(4), tb_cylinder(4, "+")):
            self.assertPrincipal(case, np.array([0.2, 0.3]), places=6)

    def test_tb_cylinder_principal_curvatures(self):
        minus, plus = tb_cylinder(4), tb_cylinder(4, "+")
        self.assertTrue(minus.expected.tb and plus.expected.tb)
        self.assertAlmostEqual(minus.expected.principal[0], 2.0, places=9)
        self.assertAlmostEqual(plus.expected.principal[0], -2.0, places=9)
        self.assertAlmostEqual(minus.expected.principal[1], 0.0, places=9)

    def test_negative_controls(self):
        self.assertTrue(hopf_cylinder(1, 0, 2).negative_control)
        self.assertTrue(resolve("round-cylinder:r=1").negative_control)
        wide = hopf_cylinder(1, 1, 1)
        self.assertFalse(wide.expected.tb)
        self.assertTrue(wide.expected.biharmonic)
        self.assertAlmostEqual(wide.expected.K_e, -0.25)

    def test_round_sphere_bcv_is_rejected(self):
        with self.assertRaises(ParameterError):
            hopf_cylinder(1, 2, 0.5)


class CliffordGeodesicTest(SimpleTestCase):
    def test_unit_speed_and_biharmonic(self):
        for a_const in (0.6, 1 / math.sqrt(2), 1.0):
            curve = clifford_geodesic(a_const, math.sqrt(1 - a_const ** 2)).curve
            grid = np.linspace(0.1, 3.0, 8)
            for s in grid:
                self.assertAlmostEqual(curve.speed(s), 1.0, places=12)
            worst = max_residuals(biharmonic_residuals(curve.ambient, curve, grid))
            self.assertLess(max(worst["tangent"], worst["normal"], worst["binormal"]), 1e-6)

    def test_validation(self):
        with self.assertRaises(ParameterError):
            clifford_geodesic(0.6, 0.6)
        with self.assertRaises(ParameterError):
            clifford_geodesic(0.6, 0.8, vectors=np.eye(4)[:4])
        mixed = np.eye(4) / math.sqrt(2)
        with self.assertRaises(ParameterError):
            clifford_geodesic(0.6, 0.8, vectors=[mixed[0], mixed[2], mixed[1], mixed[3]])


class RegistryTest(SimpleTestCase):
    def test_standard_names_resolve(self):
        for name in STANDARD_CASES:
            self.assertEqual(resolve(name).name, name)

    def test_all(self):
        self.assertEqual([case.name for case in resolve_many("all")], STANDARD_CASES)

    def test_unknown_and_malformed(self):
        for selector in ("moebius:1", "hopf:a=1", "clifford-torus:x,y", "tb-cylinder:rho=4,sign=?"):
            with self.assertRaises((UnknownCaseError, ParameterError), msg=selector):
                resolve(selector)

    def test_labels_resolve_to_the_same_parameters(self):
        r = math.sqrt(2.0) - 1.0
        for case in (hopf_cylinder(1, 0, r), clifford_geodesic(0.6, -0.8), tb_cylinder(4, "+")):
            again = resolve(case.name)
            with self.subTest(case=case.name):
                self.assertEqual(again.name, case.name)
                self.assertEqual(again.params, case.params)
                self.assertEqual(again.expected, case.expected)
        self.assertTrue(resolve(hopf_cylinder(1, 0, r).name).expected.tb)
        self.assertEqual(resolve("clifford-geodesic:a=0.6,b=-0.8").params["b"], -0.8)

    def test_selector_is_recorded(self):
        self.assertEqual(resolve(" equator:n=3 ").selector, "equator:n=3")
        self.assertEqual([case.selector for case in resolve_many("all")], STANDARD_CASES)

    def test_format_param(self):
        self.assertEqual(format_param(4.0), "4")
        self.assertEqual(format_param(-0.8), "-0.8")
        r = math.sqrt(2.0) - 1.0
        self.assertEqual(float(format_param(r)), r)
