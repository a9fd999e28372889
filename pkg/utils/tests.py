import json
import math

import numpy as np
from django.conf import settings
from django.db import connections
from django.test import SimpleTestCase, override_settings
from pydantic import ValidationError

from utils.config import DEFAULT_TOLERANCES, RunConfig, get_run_config, parse_tolerance_flags
from utils.numerics import (
    central_difference, christoffel_from_metric, gram_schmidt, partials, rk4_step, scalar_derivative,
    second_difference,
)
from utils.reports import CheckResult, VerificationReport


class NumericsTest(SimpleTestCase):
    def test_central_difference(self):
        value = central_difference(np.sin, np.array([0.3]), np.array([1.0]), 1e-3)
        self.assertAlmostEqual(float(value[0]), math.cos(0.3), places=6)

    def test_richardson_is_more_accurate(self):
        plain = scalar_derivative(math.exp, 0.5, 1e-2)
        extrapolated = scalar_derivative(math.exp, 0.5, 1e-2, richardson=True)
        self.assertLess(abs(extrapolated - math.exp(0.5)), abs(plain - math.exp(0.5)))
        self.assertAlmostEqual(extrapolated, math.exp(0.5), places=9)

    def test_second_difference(self):
        value = second_difference(lambda x: x[0] ** 3, np.array([2.0]), np.array([1.0]), 1e-3)
        self.assertAlmostEqual(float(value), 12.0, places=5)

    def test_partials_layout(self):
        fn = lambda x: np.array([x[0] * x[1], x[1] ** 2])
        np.testing.assert_allclose(partials(fn, np.array([2.0, 3.0]), 1e-4), [[3.0, 0.0], [2.0, 6.0]], atol=1e-7)

    def test_polar_christoffels(self):
        metric = lambda x: np.diag([1.0, x[0] ** 2])
        gamma = christoffel_from_metric(metric, np.array([2.0, 0.4]), 1e-4)
        self.assertAlmostEqual(gamma[0, 1, 1], -2.0, places=6)
        self.assertAlmostEqual(gamma[1, 0, 1], 0.5, places=6)
        self.assertAlmostEqual(gamma[1, 1, 0], 0.5, places=6)

    def test_rk4_harmonic_oscillator(self):
        state = np.array([1.0, 0.0])
        for _ in range(100):
            state = rk4_step(lambda y: np.array([y[1], -y[0]]), state, 0.01)
        np.testing.assert_allclose(state, [math.cos(1.0), -math.sin(1.0)], atol=1e-9)

    def test_gram_schmidt_drops_dependent_vectors(self):
        inner = lambda v, w: float(v @ w)
        basis = gram_schmidt([np.array([1.0, 1.0]), np.array([2.0, 2.0]), np.array([0.0, 1.0])], inner)
        self.assertEqual(len(basis), 2)
        self.assertAlmostEqual(inner(basis[0], basis[1]), 0.0)


class RunConfigTest(SimpleTestCase):
    def test_defaults(self):
        config = RunConfig()
        self.assertEqual(config.geodesic_count, 64)
        self.assertEqual(config.tol("tb_geodesic"), 1e-5)
        self.assertEqual(config.tol("negative_control"), 0.1)

    def test_validation(self):
        with self.assertRaises(ValidationError):
            RunConfig(fd_step=0)
        with self.assertRaises(ValidationError):
            RunConfig(geodesic_count=0)
        with self.assertRaises(ValidationError):
            RunConfig(tolerances={"tb_s1": -1.0})

    def test_overrides_merge_with_defaults(self):
        config = RunConfig(tolerances={"tb_s1": 1e-3})
        self.assertEqual(config.tol("tb_s1"), 1e-3)
        self.assertEqual(config.tol("tb_s2"), DEFAULT_TOLERANCES["tb_s2"])

    @override_settings(TBVERIFY={"seed": 11, "samples": 5, "tolerances": {"tb_s2": 1e-4}})
    def test_settings_then_flags(self):
        config = get_run_config(seed=None, geodesic_count=8, tolerances={"tb_s3": 1e-2})
        self.assertEqual((config.seed, config.samples, config.geodesic_count), (11, 5, 8))
        self.assertEqual(config.tol("tb_s2"), 1e-4)
        self.assertEqual(config.tol("tb_s3"), 1e-2)

    def test_parse_tolerance_flags(self):
        self.assertEqual(parse_tolerance_flags(["tb_s1=1e-4", " tb_geodesic = 2e-5"]),
                         {"tb_s1": 1e-4, "tb_geodesic": 2e-5})
        self.assertEqual(parse_tolerance_flags(None), {})
        with self.assertRaises(ValueError):
            parse_tolerance_flags(["tb_s1"])

    def test_relative_output(self):
        config = RunConfig(output_dir="/tmp/runs")
        self.assertEqual(str(config.resolve_output("a.json")), "/tmp/runs/a.json")
        self.assertEqual(str(config.resolve_output("/abs/a.json")), "/abs/a.json")
        self.assertIsNone(config.resolve_output(None))


class ReportTest(SimpleTestCase):
    def test_expectations(self):
        self.assertTrue(CheckResult.evaluate("c", 1e-8, 1e-6).passed)
        self.assertFalse(CheckResult.evaluate("c", 1e-3, 1e-6).passed)
        self.assertTrue(CheckResult.evaluate("c", 0.5, 0.1, expect="above").passed)
        self.assertFalse(CheckResult.evaluate("c", 0.05, 0.1, expect="above").passed)
        self.assertFalse(CheckResult.evaluate("c", float("nan"), 1e-6).passed)

    def test_report_schema(self):
        report = VerificationReport(case="equator:n=3")
        report.add("tb_s1", 0.0, 1e-6)
        report.add("tb_s2", 1.0, 1e-6)
        payload = json.loads(report.to_json())
        self.assertEqual(set(payload), {"case", "checks", "meta", "pass"})
        self.assertFalse(payload["pass"])
        self.assertEqual(payload["checks"][0], {"name": "tb_s1", "max_residual": 0.0, "tolerance": 1e-6,
                                                "expect": "below", "pass": True})
        self.assertEqual(report.failing, ["tb_s2"])

    def test_extend_and_lookup(self):
        report = VerificationReport(case="x")
        other = VerificationReport(case="y", meta={"samples": 3})
        other.add("tb_s1", 0.0, 1e-6)
        report.extend(other, prefix="inner_")
        self.assertTrue(report.check("inner_tb_s1").passed)
        self.assertEqual(report.meta["inner_samples"], 3)
        with self.assertRaises(KeyError):
            report.check("missing")

    def test_empty_report_passes(self):
        self.assertTrue(VerificationReport(case="x").passed)


class SettingsTest(SimpleTestCase):
    def test_no_database_is_configured(self):
        # an empty DATABASES setting is filled in with Django's dummy backend
        self.assertEqual(connections['default'].settings_dict['ENGINE'], 'django.db.backends.dummy')
        self.assertNotIn('sqlite', str(settings.DATABASES))

    def test_tasks_run_immediately(self):
        self.assertEqual(settings.TASKS['default']['BACKEND'], 'django.tasks.backends.immediate.ImmediateBackend')
