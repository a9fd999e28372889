import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from utils.exceptions import DegeneratePlaneError, DomainError, ParameterError, UnsupportedAmbientError
from utils.numerics import central_difference

from .ambients import BCVSpace, BCVType, Point, SpaceFormN, classify_bcv
from .operations import (
    bcv_connection_frame, bcv_frame_at, bcv_metric_at, christoffels_at, curvature_at, curvature_form,
    killing_basis, lie_derivative_metric, ricci, ricci_frame_matrix, riemann_frame_components,
    sectional, sectional_and_ricci,
)

params = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
coords = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)


class BCVMetricTest(SimpleTestCase):
    def test_metric_at_origin_is_identity(self):
        np.testing.assert_allclose(bcv_metric_at(BCVSpace(1, 2), Point.of(0, 0, 0)), np.eye(3), atol=1e-15)

    def test_metric_substitution(self):
        g = bcv_metric_at(BCVSpace(1, 2), Point.of(1, 0, 0))
        expected = np.array([[0.25, 0, 0], [0, 0.5, -0.5], [0, -0.5, 1]])
        np.testing.assert_allclose(g, expected, atol=1e-15)

    def test_flat_parameters_give_euclidean_metric(self):
        np.testing.assert_allclose(bcv_metric_at(BCVSpace(0, 0), (0.3, -2.0, 5.0)), np.eye(3), atol=1e-15)

    def test_chart_boundary_is_refused(self):
        with self.assertRaises(DomainError):
            bcv_metric_at(BCVSpace(-1, 0), (1.0, 0.0, 0.0))
        with self.assertRaises(DomainError):
            # lambda_a = 1e-4 < 10 h
            bcv_metric_at(BCVSpace(-1, 0), (math.sqrt(1 - 1e-4), 0.0, 0.0))

    def test_frame_substitution(self):
        frame = bcv_frame_at(BCVSpace(1, 2), (1, 0, 0))
        np.testing.assert_allclose(frame.E1.array, [2, 0, 0])
        np.testing.assert_allclose(frame.E2.array, [0, 2, 1])
        np.testing.assert_allclose(frame.E3.array, [0, 0, 1])

    @settings(max_examples=100, deadline=None)
    @given(params, params, coords, coords, st.floats(-5, 5))
    def test_frame_is_orthonormal(self, a, b, x, y, z):
        space = BCVSpace(a, b)
        F = bcv_frame_at(space, (x, y, z)).as_matrix()
        np.testing.assert_allclose(F.T @ space.metric((x, y, z)) @ F, np.eye(3), atol=1e-12)


class BCVConnectionTest(SimpleTestCase):
    def test_closed_form_entries(self):
        space = BCVSpace(1, 1)
        p = (0.2, -0.1, 0.4)
        F = space.frame_matrix(p)
        np.testing.assert_allclose(bcv_connection_frame(space, p, 3, 3).array, 0)
        np.testing.assert_allclose(bcv_connection_frame(space, p, 1, 3).array, -0.5 * F[:, 1])

    def test_vertical_coordinate_enters_nowhere(self):
        space = BCVSpace(1, 0)
        np.testing.assert_allclose(bcv_connection_frame(space, (0, 1, 0), 1, 1).array,
                                   2 * space.frame_matrix((0, 1, 0))[:, 1])

    def test_bad_index(self):
        with self.assertRaises(ValueError):
            bcv_connection_frame(BCVSpace(1, 1), (0, 0, 0), 0, 4)

    def test_flat_christoffels_vanish(self):
        np.testing.assert_allclose(christoffels_at(BCVSpace(0, 0), (0.3, 0.1, 2.0)), 0, atol=1e-12)

    def test_christoffels_symmetric(self):
        gamma = christoffels_at(BCVSpace(0.7, -1.3), (0.2, 0.3, 0.0))
        np.testing.assert_array_equal(gamma, np.swapaxes(gamma, 1, 2))

    def test_finite_difference_connection_matches_table(self):
        space = BCVSpace(1, 2)
        p = np.array([1.0, 0.0, 0.0])
        F = space.frame_matrix(p)
        gamma = christoffels_at(space, p)
        for i in range(3):
            for j in range(3):
                DEj = central_difference(lambda q: space.frame_matrix(q)[:, j], p, F[:, i], 1e-4)
                reconstructed = DEj + np.einsum('kij,i,j->k', gamma, F[:, i], F[:, j])
                np.testing.assert_allclose(reconstructed, bcv_connection_frame(space, p, i + 1, j + 1).array,
                                           atol=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(params, params, coords, coords, st.lists(st.floats(-1, 1), min_size=9, max_size=9))
    def test_metric_compatibility(self, a, b, x, y, raw):
        space = BCVSpace(a, b)
        p = np.array([x, y, 0.0])
        d, V, W = np.array(raw[:3]), np.array(raw[3:6]), np.array(raw[6:])
        # constant chart fields along the chart line p + s d
        lhs = central_difference(lambda q: V @ space.metric(q) @ W, p, d, 1e-4)
        gamma = christoffels_at(space, p)
        nabla_V = np.einsum('kij,i,j->k', gamma, d, V)
        nabla_W = np.einsum('kij,i,j->k', gamma, d, W)
        rhs = space.inner(p, nabla_V, W) + space.inner(p, V, nabla_W)
        self.assertAlmostEqual(float(lhs), rhs, delta=1e-5)


class CurvatureTest(SimpleTestCase):
    def test_unit_sphere_closed_form(self):
        sphere = SpaceFormN(3, 1.0)
        p = (1.0, 0.0, 0.0, 0.0)
        X, Y = (0, 1, 0, 0), (0, 0, 1, 0)
        np.testing.assert_allclose(curvature_at(sphere, p, X, Y, Y).array, X)

    def test_bcv_frame_components(self):
        space = BCVSpace(1, 1, richardson=True)
        E1, E2, E3 = (v.array for v in (space.frame((0.1, 0.2, 0.0)).E1, space.frame((0.1, 0.2, 0.0)).E2,
                                        space.frame((0.1, 0.2, 0.0)).E3))
        p = (0.1, 0.2, 0.0)
        self.assertAlmostEqual(curvature_form(space, p, E1, E2, E2, E1), 13 / 4, delta=1e-5)
        self.assertAlmostEqual(curvature_form(space, p, E1, E3, E3, E1), 1 / 4, delta=1e-5)
        self.assertAlmostEqual(curvature_form(space, p, E2, E3, E3, E2), 1 / 4, delta=1e-5)

    def test_random_frame_components(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 20:
            a, b = rng.uniform(-1, 1, size=2)
            if abs(4 * a - b * b) <= 0.1:
                continue
            space = BCVSpace(a, b, richardson=True)
            for _ in range(10):
                p = np.array([*rng.uniform(-0.5, 0.5, size=2), rng.uniform(-2, 2)])
                table = riemann_frame_components(space, p)
                expected = np.zeros((3, 3, 3, 3))
                for (i, j), value in {(0, 1): 4 * a - 0.75 * b * b, (0, 2): b * b / 4, (1, 2): b * b / 4}.items():
                    expected[i, j, j, i] = expected[j, i, i, j] = value
                    expected[i, j, i, j] = expected[j, i, j, i] = -value
                np.testing.assert_allclose(table, expected, atol=1e-5 * max(1.0, abs(4 * a - 0.75 * b * b)))
            checked += 1

    @settings(max_examples=20, deadline=None)
    @given(params, params, coords, coords, st.lists(st.floats(-1, 1), min_size=12, max_size=12))
    def test_curvature_symmetries(self, a, b, x, y, raw):
        space = BCVSpace(a, b)
        p = (x, y, 0.0)
        X, Y, Z, W = (np.array(raw[k:k + 3]) for k in range(0, 12, 3))
        rxyzw = curvature_form(space, p, X, Y, Z, W)
        self.assertAlmostEqual(rxyzw, -curvature_form(space, p, Y, X, Z, W), delta=1e-5)
        self.assertAlmostEqual(rxyzw, curvature_form(space, p, Z, W, X, Y), delta=1e-5)

    def test_space_form_degeneration(self):
        space = BCVSpace(1, 2, richardson=True)
        self.assertEqual(space.kind, BCVType.SPACE_FORM)
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = np.array([*rng.uniform(-0.5, 0.5, size=2), rng.uniform(-1, 1)])
            X, Y = rng.normal(size=3), rng.normal(size=3)
            self.assertAlmostEqual(sectional(space, p, X, Y), 1.0, delta=1e-6)


class SectionalRicciTest(SimpleTestCase):
    def test_space_form_sectional_is_rho(self):
        for rho in (1.0, 4.0):
            sphere = SpaceFormN(3, rho)
            p = np.array([0.0, 0.0, 0.0, 1.0 / math.sqrt(rho)])
            K, _, _ = sectional_and_ricci(sphere, p, (1, 2, 0, 0), (0, 1, 3, 0))
            self.assertAlmostEqual(K, rho, places=12)
        for rho in (0.0, -1.0):
            K, _, _ = sectional_and_ricci(SpaceFormN(3, rho), (0, 0, 0), (1, 0, 0), (1, 1, 0))
            self.assertAlmostEqual(K, rho, places=12)

    def test_bcv_ricci_values(self):
        space = BCVSpace(1, 2, richardson=True)
        E3 = space.frame_matrix((0, 0, 0))[:, 2]
        self.assertAlmostEqual(ricci(space, (0, 0, 0), E3, E3), 2.0, delta=1e-5)
        space = BCVSpace(1, 0, richardson=True)
        E1 = space.frame_matrix((0.1, 0, 0))[:, 0]
        self.assertAlmostEqual(ricci(space, (0.1, 0, 0), E1, E1), 4.0, delta=1e-5)

    def test_ricci_vector_pairs_with_ricci(self):
        space = BCVSpace(0.5, 1.0, richardson=True)
        p = (0.2, 0.1, 0.0)
        X, Y = np.array([0.3, -0.2, 1.0]), np.array([1.0, 0.5, 0.0])
        _, ric_xy, ric_vec = sectional_and_ricci(space, p, X, Y)
        self.assertAlmostEqual(space.inner(p, ric_vec.array, Y), ric_xy, delta=1e-8)

    def test_ricci_frame_matrix_is_diagonal(self):
        a, b = 0.5, 1.0
        ric = ricci_frame_matrix(BCVSpace(a, b, richardson=True), (0.1, -0.2, 0.0))
        np.testing.assert_allclose(ric, np.diag([4 * a - b * b / 2, 4 * a - b * b / 2, b * b / 2]), atol=1e-5)

    def test_parallel_vectors(self):
        with self.assertRaises(DegeneratePlaneError):
            sectional_and_ricci(BCVSpace(1, 0), (0, 0, 0), (1, 0, 0), (2, 0, 0))

    def test_hyperbolic_has_no_connection(self):
        with self.assertRaises(UnsupportedAmbientError):
            SpaceFormN(3, -1.0).christoffels((0, 0, 0))


class KillingTest(SimpleTestCase):
    def test_basis_at_origin(self):
        space = BCVSpace(1, 0.5)
        X1, X2, X3, X4 = (v.array for v in killing_basis(space, (0, 0, 0)))
        F = space.frame_matrix((0, 0, 0))
        np.testing.assert_allclose(X1, F[:, 0])
        np.testing.assert_allclose(X2, F[:, 1])
        np.testing.assert_allclose(X3, 0)
        np.testing.assert_allclose(X4, F[:, 2])

    def test_x3_substitution(self):
        space = BCVSpace(1, 0)
        X3 = killing_basis(space, (1, 0, 0))[2].array
        np.testing.assert_allclose(X3, 0.5 * space.frame_matrix((1, 0, 0))[:, 1])

    def test_space_form_is_refused(self):
        with self.assertRaises(ParameterError):
            killing_basis(BCVSpace(1, 2), (0, 0, 0))

    def test_lie_derivative_vanishes(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            a, b = rng.uniform(-1, 1, size=2)
            if abs(4 * a - b * b) < 1e-3:
                continue
            space = BCVSpace(a, b)
            for _ in range(50):
                p = np.array([*rng.uniform(-0.5, 0.5, size=2), rng.uniform(-2, 2)])
                for index in range(1, 5):
                    residual = lie_derivative_metric(space, space.killing_field(index), p)
                    self.assertLess(np.abs(residual).max(), 1e-5)

    def test_non_killing_field_is_detected(self):
        space = BCVSpace(1, 0)
        residual = lie_derivative_metric(space, lambda q: np.array([q[0], 0.0, 0.0]), (0.2, 0.1, 0.0))
        self.assertGreater(np.abs(residual).max(), 0.1)


class ClassifyTest(SimpleTestCase):
    def test_bullet_list(self):
        self.assertEqual(classify_bcv(0, 1), BCVType.HEISENBERG)
        self.assertEqual(classify_bcv(1, 0), BCVType.S2XR)
        self.assertEqual(classify_bcv(-1, 0), BCVType.H2XR)
        self.assertEqual(classify_bcv(1, 1), BCVType.SU2)
        self.assertEqual(classify_bcv(-1, 1), BCVType.SL2R)
        self.assertEqual(classify_bcv(1, 2), BCVType.SPACE_FORM)
        self.assertEqual(classify_bcv(0, 0), BCVType.SPACE_FORM)

    @given(params, params)
    def test_space_form_iff_4a_equals_b2(self, a, b):
        assume(abs(4 * a - b * b) > 1e-9)
        self.assertNotEqual(classify_bcv(a, b), BCVType.SPACE_FORM)
