import math

import numpy as np
from django.test import SimpleTestCase

from spaces.ambients import BCVSpace, SpaceFormN
from utils.exceptions import ParameterError, StencilError

from .base import AnalyticCurve, SampledCurve
from .frenet import (
    CSV_HEADER, bcv_biharmonic_system, biharmonic_residuals, bitension, covariant_derivative_along,
    frenet_apparatus, frenet_csv_rows, is_vacuous, max_residuals,
)


def planar_circle(ambient, r, dim=3):
    def derivative(s, k):
        phase = s / r + k * math.pi / 2
        v = np.zeros(dim)
        v[0], v[1] = r ** (1 - k) * math.cos(phase), r ** (1 - k) * math.sin(phase)
        return v
    return AnalyticCurve(ambient, derivative, label=f"circle:r={r}")


def euclidean_helix(ambient, r, pitch):
    c = math.hypot(r, pitch)

    def derivative(s, k):
        phase = s / c + k * math.pi / 2
        z = pitch * s / c if k == 0 else (pitch / c if k == 1 else 0.0)
        return np.array([r * c ** -k * math.cos(phase), r * c ** -k * math.sin(phase), z])
    return AnalyticCurve(ambient, derivative, label="helix")


def bcv_helix(space, r, mu):
    """Unit-speed horizontal-circle helix of N(a, b) around the z-axis."""
    lam_a = 1 + space.a * r * r
    lam = lam_a / math.hypot(r, space.b * r * r / 2 - mu * lam_a)

    def derivative(s, k):
        phase = lam * s + k * math.pi / 2
        z = lam * mu * s if k == 0 else (lam * mu if k == 1 else 0.0)
        return np.array([r * lam ** k * math.sin(phase), -r * lam ** k * math.cos(phase), z])
    return AnalyticCurve(space, derivative, label="bcv-helix")


def vertical_line(ambient, x0=0.3, y0=-0.2):
    return AnalyticCurve(ambient, lambda s, k: np.array([x0, y0, s]) if k == 0 else
                         (np.array([0.0, 0.0, 1.0]) if k == 1 else np.zeros(3)), label="fiber")


def sphere_circle(radius):
    """Circle of Euclidean radius `radius` on the unit 3-sphere, unit speed."""
    height = math.sqrt(1 - radius ** 2)

    def derivative(s, k):
        phase = s / radius + k * math.pi / 2
        tail = [height, 0.0] if k == 0 else [0.0, 0.0]
        return np.array([radius ** (1 - k) * math.cos(phase), radius ** (1 - k) * math.sin(phase), *tail])
    return AnalyticCurve(SpaceFormN(3, 1.0), derivative, label=f"sphere-circle:{radius:.4g}")


class CovariantDerivativeTest(SimpleTestCase):
    def test_flat_line_tangent_is_parallel(self):
        flat = BCVSpace(0, 0)
        line = AnalyticCurve(flat, lambda s, k: np.array([s, 0.5, 0.0]) if k == 0 else
                             (np.array([1.0, 0, 0]) if k == 1 else np.zeros(3)))
        result = covariant_derivative_along(flat, line, lambda s: line.derivative(s, 1), 0.4)
        np.testing.assert_allclose(result.array, 0, atol=1e-12)

    def test_circle_tangent_turns_inward(self):
        flat = BCVSpace(0, 0)
        circle = planar_circle(flat, 1.0)
        result = covariant_derivative_along(flat, circle, lambda s: circle.derivative(s, 1), 0.7).array
        np.testing.assert_allclose(result, -circle.point(0.7), atol=1e-8)

    def test_fiber_is_geodesic(self):
        space = BCVSpace(1, 1)
        fiber = vertical_line(space)
        result = covariant_derivative_along(space, fiber, lambda s: fiber.derivative(s, 1), 0.0)
        np.testing.assert_allclose(result.array, 0, atol=1e-7)

    def test_product_rule(self):
        space = BCVSpace(0.5, 1.0)
        curve = euclidean_helix(space, 0.3, 0.2)
        V = np.array([0.2, -1.0, 0.5])
        s = 0.3
        lhs = covariant_derivative_along(space, curve, lambda v: v * v * V, s).array
        rhs = 2 * s * V + s * s * covariant_derivative_along(space, curve, lambda v: V, s).array
        np.testing.assert_allclose(lhs, rhs, atol=1e-8)

    def test_linearity(self):
        space = BCVSpace(-0.3, 0.4)
        curve = euclidean_helix(space, 0.5, 0.1)
        V = lambda v: np.array([math.sin(v), 1.0, v])
        W = lambda v: np.array([0.0, v * v, -1.0])
        both = covariant_derivative_along(space, curve, lambda v: 2 * V(v) - W(v), 0.2).array
        parts = (2 * covariant_derivative_along(space, curve, V, 0.2).array
                 - covariant_derivative_along(space, curve, W, 0.2).array)
        np.testing.assert_allclose(both, parts, atol=1e-9)

    def test_endpoint_stencil(self):
        flat = BCVSpace(0, 0)
        circle = AnalyticCurve(flat, planar_circle(flat, 1.0)._derivative, domain=(0.0, 1.0))
        with self.assertRaises(StencilError):
            covariant_derivative_along(flat, circle, lambda s: circle.derivative(s, 1), 0.0)


class FrenetTest(SimpleTestCase):
    def test_euclidean_circle(self):
        sample = frenet_apparatus(SpaceFormN(3, 0.0), planar_circle(SpaceFormN(3, 0.0), 2.0), 0.3)
        self.assertAlmostEqual(sample.kappa, 0.5, places=12)
        self.assertAlmostEqual(sample.tau, 0.0, places=12)
        self.assertEqual(sample.rank, 3)

    def test_great_circle_is_geodesic(self):
        sample = frenet_apparatus(SpaceFormN(3, 1.0), sphere_circle(1.0), 1.1)
        self.assertTrue(sample.is_geodesic)
        self.assertEqual(sample.kappa, 0.0)
        self.assertIsNone(sample.n)

    def test_small_sphere_circle(self):
        sample = frenet_apparatus(SpaceFormN(3, 1.0), sphere_circle(1 / math.sqrt(2)), 0.4)
        self.assertAlmostEqual(sample.kappa, 1.0, places=10)
        self.assertAlmostEqual(sample.tau, 0.0, places=10)

    def test_euclidean_helix_closed_forms(self):
        r, pitch = 0.7, 0.4
        c2 = r * r + pitch * pitch
        flat = SpaceFormN(3, 0.0)
        sample = frenet_apparatus(flat, euclidean_helix(flat, r, pitch), 0.9)
        self.assertAlmostEqual(sample.kappa, r / c2, places=10)
        self.assertAlmostEqual(sample.tau, pitch / c2, places=10)

    def test_frame_is_orthonormal_and_positive(self):
        space = BCVSpace(0.5, -1.0)
        sample = frenet_apparatus(space, bcv_helix(space, 0.4, 0.3), 0.2)
        p = np.array(sample.t.base.coords)
        frame = np.column_stack([sample.t.array, sample.n.array, sample.b.array])
        np.testing.assert_allclose(frame.T @ space.metric(p) @ frame, np.eye(3), atol=1e-6)
        self.assertGreater(np.linalg.det(np.linalg.solve(space.frame_matrix(p), frame)), 0)

    def test_frenet_equations(self):
        flat = SpaceFormN(3, 0.0)
        curve = euclidean_helix(flat, 0.7, 0.4)
        s = 0.5
        sample = frenet_apparatus(flat, curve, s)
        dn = covariant_derivative_along(flat, curve, lambda v: frenet_apparatus(flat, curve, v).n.array, s).array
        db = covariant_derivative_along(flat, curve, lambda v: frenet_apparatus(flat, curve, v).b.array, s).array
        np.testing.assert_allclose(dn, -sample.kappa * sample.t.array + sample.tau * sample.b.array, atol=1e-5)
        np.testing.assert_allclose(db, -sample.tau * sample.n.array, atol=1e-5)

    def test_sampled_curve_agrees(self):
        flat = SpaceFormN(3, 0.0)
        exact = planar_circle(flat, 2.0)
        sampled = SampledCurve(flat, exact.point, step=1e-3)
        self.assertAlmostEqual(frenet_apparatus(flat, sampled, 0.2).kappa, 0.5, delta=1e-4)


class BitensionTest(SimpleTestCase):
    def test_geodesic_has_zero_bitension(self):
        sample = bitension(SpaceFormN(3, 1.0), sphere_circle(1.0), 0.3)
        np.testing.assert_allclose(sample.tau2.array, 0, atol=1e-8)

    def test_euclidean_circle(self):
        flat = SpaceFormN(3, 0.0)
        sample = bitension(flat, planar_circle(flat, 2.0), 0.6)
        self.assertAlmostEqual(np.linalg.norm(sample.tau2.array), 1 / 8, delta=1e-7)
        self.assertAlmostEqual(sample.components[1], -1 / 8, delta=1e-7)

    def test_small_sphere_circle_is_biharmonic(self):
        sample = bitension(SpaceFormN(3, 1.0), sphere_circle(1 / math.sqrt(2)), 0.8)
        self.assertLess(np.linalg.norm(sample.tau2.array), 1e-5)

    def test_component_identity(self):
        space = BCVSpace(0.4, 0.6)
        sample = bitension(space, bcv_helix(space, 0.3, 0.5), 0.1)
        p = np.array(sample.tau2.base.coords)
        total = space.inner(p, sample.tau2.array, sample.tau2.array)
        self.assertAlmostEqual(total, sum(c * c for c in sample.components) + sample.remainder ** 2, delta=1e-8)
        self.assertLess(sample.remainder, 1e-6)


class ResidualTest(SimpleTestCase):
    def test_euclidean_circle_normal_residual(self):
        flat = SpaceFormN(3, 0.0)
        circle = planar_circle(flat, 1.0)
        residuals = biharmonic_residuals(flat, circle, circle.grid(6))
        worst = max_residuals(residuals)
        self.assertAlmostEqual(worst["normal"], 1.0, places=8)
        self.assertLess(worst["tangent"], 1e-10)
        self.assertLess(worst["binormal"], 1e-6)

    def test_geodesic_is_vacuous(self):
        curve = sphere_circle(1.0)
        residuals = biharmonic_residuals(SpaceFormN(3, 1.0), curve, curve.grid(5))
        self.assertTrue(is_vacuous(residuals))
        self.assertEqual(max_residuals(residuals)["normal"], 0.0)

    def test_small_sphere_circle(self):
        curve = sphere_circle(1 / math.sqrt(2))
        worst = max_residuals(biharmonic_residuals(SpaceFormN(3, 1.0), curve, curve.grid(5)))
        for value in worst.values():
            self.assertLess(value, 1e-6)

    def test_bcv_system_on_fiber_is_vacuous(self):
        space = BCVSpace(1, 0)
        fiber = vertical_line(space)
        report = bcv_biharmonic_system(space, fiber, np.linspace(0, 1, 4))
        self.assertTrue(report.passed)
        self.assertTrue(report.meta["vacuous"])

    def test_bcv_system_refuses_space_form(self):
        with self.assertRaises(ParameterError):
            bcv_biharmonic_system(BCVSpace(1, 2), vertical_line(BCVSpace(1, 2)), [0.0])

    def test_csv_rows(self):
        flat = SpaceFormN(3, 0.0)
        circle = planar_circle(flat, 1.0)
        rows = frenet_csv_rows(flat, circle, circle.grid(3))
        self.assertEqual(len(rows), 3)
        self.assertEqual(len(rows[0]), len(CSV_HEADER))
        self.assertEqual(rows[0][3], "")
        self.assertEqual(float(rows[0][1]), 1.0)
