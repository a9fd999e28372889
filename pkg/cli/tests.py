import json
import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings, tag

from catalog.cases import round_cylinder_r3, tb_cylinder
from catalog.registry import STANDARD_CASES, resolve
from hypersurfaces.checks import tb_geodesic_check, tb_pointwise_check
from utils.config import RunConfig

from .runner import apply_steps, geodesic_rows, run_case

FAST = {"samples": 4, "geodesic_count": 4}


def run(*args):
    out, err = StringIO(), StringIO()
    call_command(*args, stdout=out, stderr=err)
    return out.getvalue(), err.getvalue()


class RunnerTest(SimpleTestCase):
    def test_tb_cylinder_report(self):
        report = run_case(tb_cylinder(4), RunConfig(**FAST))
        self.assertTrue(report.passed, report.failing)
        self.assertLess(report.check("principal_curvatures").max_residual, 1e-6)
        self.assertLess(report.check("hopf_base_kappa_g").max_residual, 1e-5)
        self.assertEqual(report.meta["tb_pointwise"]["branch"], "pointwise")

    def test_negative_control_is_inverted(self):
        report = run_case(round_cylinder_r3(1.0), RunConfig(**FAST))
        self.assertTrue(report.passed, report.failing)
        self.assertEqual(report.check("tb_pointwise_violation").expect, "above")
        self.assertEqual(report.check("tb_geodesic").expect, "above")
        self.assertTrue(report.meta["negative_control"])

    def test_configured_steps_reach_the_ambient(self):
        case = tb_cylinder(4)
        run_case(case, RunConfig(fd_step=2e-4, **FAST))
        self.assertEqual(case.ambient.fd_step, 2e-4)
        self.assertIs(case.immersion.ambient, case.ambient)

    def test_pointwise_and_geodesic_verdicts_agree(self):
        config = RunConfig(**FAST)
        for name in STANDARD_CASES:
            case = resolve(name)
            if case.is_curve_case:
                continue
            apply_steps(case, config)
            points = list(case.immersion.sample_points(3, np.random.default_rng(config.seed)))
            pointwise = tb_pointwise_check(case.immersion, points, outer_step=config.outer_step)
            geodesic = tb_geodesic_check(case.immersion, count=4, outer_step=config.outer_step)
            with self.subTest(case=name):
                self.assertEqual(pointwise.passed, geodesic.passed)
                self.assertEqual(pointwise.passed, case.expected.tb)

    def test_equator_geodesics_are_vacuous(self):
        from catalog.cases import equator
        rows = geodesic_rows(equator(3), RunConfig(**FAST))
        self.assertEqual(len(rows), 4)
        self.assertTrue(all(row[-1] in ("vacuous-pass", "skipped") for row in rows))


@override_settings(TBVERIFY=FAST)
class VerifyCommandTest(SimpleTestCase):
    def test_single_case(self):
        out, err = run('verify', 'clifford-torus:1,1')
        payload = json.loads(out)
        self.assertTrue(payload["pass"])
        self.assertEqual([case["case"] for case in payload["cases"]], ["clifford-torus:1,1"])
        self.assertIn("PASS clifford-torus:1,1", err)

    def test_negative_control_passes(self):
        out, _ = run('verify', 'round-cylinder:r=1')
        self.assertTrue(json.loads(out)["pass"])

    def test_unknown_case_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('verify', 'moebius:1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_malformed_tolerance_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('verify', 'equator:n=3', '--tol', 'tb_s1')
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            run('verify', 'equator:n=3', '--step', '-1')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_mismatch_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            run('verify', 'round-cylinder:r=1', '--tol', 'negative_control=100')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("round-cylinder:r=1", str(ctx.exception))

    def test_csv_and_out(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "report.csv"
            run('verify', 'equator:n=3', '--format', 'csv', '--out', str(target))
            lines = target.read_text().splitlines()
        self.assertEqual(lines[0], "case,check,max_residual,tolerance,expect,pass")
        self.assertTrue(all(line.endswith(",true") for line in lines[1:]))

    def test_relative_out_uses_output_dir(self):
        with tempfile.TemporaryDirectory() as tmp:
            with override_settings(TBVERIFY={**FAST, "output_dir": tmp}):
                run('verify', 'equator:n=3', '--out', 'equator.json')
            self.assertTrue((Path(tmp) / "equator.json").exists())

    def test_failed_task_is_reported(self):
        with patch('cli.tasks.run_case', side_effect=RuntimeError("boom")):
            with self.assertRaises(CommandError) as ctx:
                run('verify', 'equator:n=3')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_full_precision_radius_is_kept(self):
        r = math.sqrt(2.0) - 1.0
        selector = f"hopf:a=1,b=0,r={r!r}"
        out, err = run('verify', selector)
        payload = json.loads(out)
        report = payload["cases"][0]
        self.assertEqual(report["case"], selector)
        self.assertEqual(report["meta"]["params"], {"a": 1.0, "b": 0.0, "r": r})
        self.assertTrue(report["meta"]["expected_tb"])
        self.assertFalse(report["meta"]["negative_control"])
        self.assertTrue(payload["pass"])
        self.assertIn(f"PASS {selector}", err)

    def test_negative_partner_is_kept(self):
        out, _ = run('verify', 'clifford-geodesic:a=0.6,b=-0.8')
        payload = json.loads(out)
        report = payload["cases"][0]
        self.assertEqual(report["case"], "clifford-geodesic:a=0.6,b=-0.8")
        self.assertEqual(report["meta"]["params"], {"a": 0.6, "b": -0.8})
        self.assertTrue(payload["pass"])

    def test_task_receives_the_selector(self):
        with patch('cli.management.commands.verify.run_case_task') as task:
            task.enqueue.side_effect = RuntimeError("stop")
            with self.assertRaises(RuntimeError):
                run('verify', 'hopf:a=1,b=0,r=0.41421356237')
        self.assertEqual(task.enqueue.call_args.args[0], 'hopf:a=1,b=0,r=0.41421356237')

    def test_all_is_deterministic(self):
        first, _ = run('verify', 'all', '--seed', '7')
        second, _ = run('verify', 'all', '--seed', '7')
        self.assertEqual(first, second)
        payload = json.loads(first)
        self.assertTrue(payload["pass"])
        names = [case["case"] for case in payload["cases"]]
        self.assertEqual(names, sorted(names))


class ScanQuarticCommandTest(SimpleTestCase):
    def test_b_zero_is_mu_independent(self):
        out, err = run('scan_quartic', '--a', '1', '--b', '0')
        lines = out.splitlines()
        self.assertEqual(lines[0], "mu,r2_minus,r2_plus,admissible,rejected,degenerate")
        self.assertEqual(len(lines), 6)
        first = lines[1].split(",")
        self.assertAlmostEqual(float(first[1]), 3 - 2 * 2 ** 0.5, places=10)
        self.assertIn("mu-independent", err)

    def test_b_nonzero_is_mu_dependent(self):
        out, err = run('scan_quartic', '--a', '1', '--b', '1', '--mu', '0', '0.5', '1', '--format', 'json')
        self.assertEqual(json.loads(out)["verdict"], "mu-dependent")
        self.assertIn("mu-dependent", err)

    def test_space_form_is_refused(self):
        with self.assertRaises(CommandError) as ctx:
            run('scan_quartic', '--a', '1', '--b', '2', '--mu', '0')
        self.assertEqual(ctx.exception.returncode, 2)


@override_settings(TBVERIFY=FAST)
class GeodesicsCommandTest(SimpleTestCase):
    def test_rows(self):
        out, err = run('geodesics', 'tb-cylinder:rho=4')
        lines = out.splitlines()
        self.assertEqual(lines[0], "geodesic,u0,dir0,tangent,normal,binormal,verdict")
        self.assertEqual(len(lines), 5)
        self.assertNotIn("fail", {line.split(",")[-1] for line in lines[1:]})
        self.assertIn("tb-cylinder:rho=4", err)

    def test_count_flag(self):
        out, _ = run('geodesics', 'hopf:a=1,b=0,r=2', '--count', '2')
        self.assertEqual(len(out.splitlines()), 3)

    def test_curve_case_dumps_frenet_rows(self):
        out, _ = run('geodesics', 'clifford-geodesic:a=0.6')
        self.assertTrue(out.startswith("s,kappa,tau,n3,b3,res_t,res_n,res_b"))

    def test_horizontal_geodesic_residual(self):
        # along the base circle of radius 2 in N(1, 0): kappa = 3/2, tau = 0, K(t, n) = 4
        start = (np.array([0.0, 0.0]), np.array([1.0, 0.0]))
        with patch('hypersurfaces.geodesics.random_start', return_value=start):
            out, _ = run('geodesics', 'hopf:a=1,b=0,r=2', '--count', '1')
        row = out.splitlines()[1].split(",")
        self.assertAlmostEqual(float(row[4]), 7 / 4, delta=1e-4)
        self.assertEqual(row[-1], "fail")


@tag('slow')
class AcceptanceTest(SimpleTestCase):
    """Full-size runs at the RunConfig defaults: 50 sample points, 64 geodesics."""

    def test_tb_cylinder(self):
        config = RunConfig()
        report = run_case(resolve("tb-cylinder:rho=4"), config)
        self.assertTrue(report.passed, report.failing)
        self.assertLess(report.check("principal_curvatures").max_residual, 1e-6)
        self.assertLess(report.check("hopf_base_kappa_g").max_residual, 1e-5)
        self.assertLess(report.check("hopf_base_K_e").max_residual, 1e-6)
        geodesic = report.check("tb_geodesic")
        self.assertEqual(geodesic.tolerance, 1e-5)
        self.assertLess(geodesic.max_residual, 1e-5)
        self.assertEqual(report.meta["tb_geodesic"]["count"], 64)
        self.assertEqual(report.meta["tb_pointwise"]["samples"], 50)

    def test_sphere_catalog(self):
        config = RunConfig()
        for name in ("clifford-torus:1,1", "small-hypersphere:n=3"):
            report = run_case(resolve(name), config)
            with self.subTest(case=name):
                self.assertTrue(report.passed, report.failing)
                for check in ("tb_s1", "tb_s2", "tb_s3"):
                    self.assertLess(report.check(check).max_residual, 1e-6)
                self.assertLess(report.check("tb_geodesic").max_residual, 1e-5)
                self.assertEqual(report.meta["tb_geodesic"]["count"], 64)
                self.assertEqual(report.meta["tb_pointwise"]["samples"], 50)
        torus = run_case(resolve("clifford-torus:1,1"), config)
        self.assertAlmostEqual(torus.meta["tb_geodesic"]["kappa2_tau2_max"], 1.0, delta=1e-5)
