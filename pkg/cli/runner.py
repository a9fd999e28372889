"""
Runs the checks that apply to a catalog case and compares them with its expected verdict.

Cases expected to be totally biharmonic must pass every check. Negative controls are
turned around: their TB residuals are checked with expect='above' against the
negative_control tolerance, so a correct implementation still reports PASS.
"""
import dataclasses
import logging
from typing import List, Optional

import numpy as np

from catalog.cases import CatalogCase
from curves.frenet import biharmonic_residuals, is_vacuous, max_residuals
from hypersurfaces.checks import (
    biharmonic_check, hopf_base_data, isoparametric_spread, tb_geodesic_check, tb_pointwise_check,
    tb_principal_constraint,
)
from hypersurfaces.geodesics import sample_geodesics
from hypersurfaces.immersion import shape_operator
from spaces.ambients import BCVSpace, SpaceFormN
from utils.config import RunConfig
from utils.reports import VerificationReport

logger = logging.getLogger(__name__)


def _merge(report: VerificationReport, sub: VerificationReport, section: str) -> None:
    report.checks.extend(sub.checks)
    report.meta[section] = sub.meta


def _principal_checks(case: CatalogCase, samples: List[np.ndarray], config: RunConfig,
                      report: VerificationReport) -> None:
    data = [shape_operator(case.immersion, u) for u in samples]
    expected = case.expected
    if expected.principal is not None:
        worst = max(float(np.abs(np.array(d.principal) - np.array(expected.principal)).max()) for d in data)
        report.add("principal_curvatures", worst, config.tol("principal_curvatures"))
    if expected.mean_curvature is not None:
        worst = max(abs(d.H - expected.mean_curvature) for d in data)
        report.add("mean_curvature", worst, config.tol("principal_curvatures"))
    if expected.isoparametric:
        report.add("isoparametric", isoparametric_spread(case.immersion, samples), config.tol("isoparametric"))
    ambient = case.ambient
    if expected.tb and not expected.totally_geodesic and isinstance(ambient, SpaceFormN):
        allowed = np.array(tb_principal_constraint(ambient.rho))
        worst = max(float(np.abs(value - allowed).min()) for d in data for value in d.principal)
        report.add("tb_principal_constraint", worst, config.tol("principal_curvatures"))


def _hopf_checks(case: CatalogCase, samples: List[np.ndarray], config: RunConfig,
                 report: VerificationReport) -> None:
    base = hopf_base_data(case.ambient, case.immersion, samples[:5])
    tol = config.tol("hopf_base")
    report.add("hopf_base_S_norm2", base.residuals["S_norm2"], tol)
    report.add("hopf_base_K_e", base.residuals["K_e"], tol)
    if case.expected.kappa_g is not None:
        report.add("hopf_base_kappa_g", abs(base.kappa_g - case.expected.kappa_g), tol)
    report.meta["hopf_base"] = {
        "kappa_g": base.kappa_g, "K_e": base.K_e, "K_e_sign": base.K_e_sign,
        "kappa_relation": base.residuals["kappa_g"],
    }


def _biharmonic_checks(case: CatalogCase, samples: List[np.ndarray], config: RunConfig,
                       report: VerificationReport) -> None:
    if case.expected.biharmonic is None:
        return
    sub = biharmonic_check(case.immersion, samples, config.laplace_step, config.tolerances)
    if case.expected.biharmonic:
        _merge(report, sub, "biharmonic")
        return
    worst = max(check.max_residual for check in sub.checks)
    report.add("biharmonic_violation", worst, config.tol("negative_control"), expect="above")
    report.meta["biharmonic"] = sub.meta


def _tb_checks(case: CatalogCase, samples: List[np.ndarray], config: RunConfig,
               report: VerificationReport) -> None:
    imm = case.immersion
    pointwise = tb_pointwise_check(imm, samples, seed=config.seed, outer_step=config.outer_step,
                                   tolerances=config.tolerances)
    geodesic_kwargs = dict(count=config.geodesic_count, length=config.geodesic_length, step=config.geodesic_step,
                           seed=config.seed, stride=config.residual_stride, curve_step=config.curve_step,
                           outer_step=config.outer_step, tolerances=config.tolerances)
    if case.expected.tb:
        _merge(report, pointwise, "tb_pointwise")
        _merge(report, tb_geodesic_check(imm, **geodesic_kwargs), "tb_geodesic")
        return
    worst = max(check.max_residual for check in pointwise.checks)
    report.add("tb_pointwise_violation", worst, config.tol("negative_control"), expect="above")
    report.meta["tb_pointwise"] = pointwise.meta
    _merge(report, tb_geodesic_check(imm, expect="above", **geodesic_kwargs), "tb_geodesic")


def _curve_checks(case: CatalogCase, config: RunConfig, report: VerificationReport) -> None:
    curve = case.curve
    samples = biharmonic_residuals(case.ambient, curve, curve.grid(config.samples))
    worst = max_residuals(samples)
    tol = config.tol("tb_geodesic")
    report.add("curve_tangent", worst["tangent"], tol)
    report.add("curve_normal", worst["normal"], tol)
    report.add("curve_binormal", worst["binormal"], tol)
    proper = [sample for sample in samples if not sample.geodesic]
    report.meta.update({
        "vacuous": is_vacuous(samples),
        "binormal_consistent_max": worst["binormal_consistent"],
        "speed_error_max": max(abs(curve.speed(s.s) - 1.0) for s in samples),
        "kappa2_tau2_max": max((s.kappa ** 2 + s.tau ** 2 for s in proper), default=0.0),
    })


def apply_steps(case: CatalogCase, config: RunConfig) -> CatalogCase:
    """Rebuild the ambient with the configured difference steps and point the case at it."""
    ambient = dataclasses.replace(case.ambient, fd_step=config.fd_step, outer_step=config.outer_step,
                                  richardson=config.richardson)
    case.ambient = ambient
    if case.immersion is not None:
        case.immersion.ambient = ambient
        case.immersion.fd_step = config.fd_step
    if case.curve is not None:
        case.curve.ambient = ambient
        case.curve.step = config.curve_step
    return case


def run_case(case: CatalogCase, config: Optional[RunConfig] = None) -> VerificationReport:
    config = config or RunConfig()
    apply_steps(case, config)
    logger.info(f"Verifying {case.name} (seed {config.seed})")
    report = VerificationReport(case=case.name, meta={
        "expected_tb": case.expected.tb,
        "negative_control": case.negative_control,
        "params": dict(sorted(case.params.items())),
        "provenance": dict(sorted(case.provenance.items())),
    })
    if case.is_curve_case:
        _curve_checks(case, config, report)
    else:
        samples = list(case.immersion.sample_points(config.samples, np.random.default_rng(config.seed)))
        _principal_checks(case, samples, config, report)
        if isinstance(case.ambient, BCVSpace):
            _hopf_checks(case, samples, config, report)
        _biharmonic_checks(case, samples, config, report)
        _tb_checks(case, samples, config, report)
    verdict = "PASS" if report.passed else "FAIL"
    logger.info(f"{case.name}: {verdict}" + (f" (failing: {', '.join(report.failing)})" if report.failing else ""))
    return report


def geodesic_rows(case: CatalogCase, config: RunConfig) -> List[List[str]]:
    """CSV rows for the geodesics command, one per sampled geodesic."""
    apply_steps(case, config)
    results = sample_geodesics(case.immersion, config.geodesic_count, config.geodesic_length,
                               config.geodesic_step, config.seed, config.residual_stride,
                               config.curve_step, config.outer_step)
    tol = config.tol("tb_geodesic")
    rows = []
    for r in results:
        rows.append([
            str(r.index),
            " ".join(f"{v:.10g}" for v in r.u0),
            " ".join(f"{v:.10g}" for v in r.dir0),
            f"{r.tangent:.6e}", f"{r.normal:.6e}", f"{r.binormal:.6e}",
            r.verdict(tol),
        ])
    return rows


GEODESIC_HEADER = ["geodesic", "u0", "dir0", "tangent", "normal", "binormal", "verdict"]
