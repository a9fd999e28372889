"""
Frenet apparatus, covariant derivatives and the bitension field along arc-length curves.

All covariant quantities are evaluated as D_t V + Gamma(gamma)(t, V); the curve supplies
ordinary derivatives and the ambient supplies Gamma and its s-derivatives along the curve.
"""
import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from spaces.ambients import AmbientSpace, BCVSpace, TangentVector
from utils.numerics import central_difference, scalar_derivative
from utils.reports import VerificationReport

from .base import BitensionSample, Curve, FrenetSample, ResidualSample

logger = logging.getLogger(__name__)

KAPPA_FLOOR = 1e-9
# rank-3 detection in dimension >= 4, where tau is a norm and never cancels to zero
TORSION_FLOOR = 1e-7

CSV_HEADER = ["s", "kappa", "tau", "n3", "b3", "res_t", "res_n", "res_b"]


def _conn(gamma: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return np.einsum('kij,i,j->k', gamma, X, Y)


def covariant_jet(space: AmbientSpace, curve: Curve, s: float) -> List[np.ndarray]:
    """[gamma, t, nabla_t t, nabla_t^2 t] from the 3-jet of the curve."""
    d = curve.jet(s, 3)
    f = space.christoffel_jet(d, 1)
    t = d[1]
    A1 = d[2] + _conn(f[0], t, t)
    dA1 = d[3] + _conn(f[1], t, t) + 2.0 * _conn(f[0], d[2], t)
    A2 = dA1 + _conn(f[0], t, A1)
    return [d[0], t, A1, A2]


def covariant_derivative_along(space: AmbientSpace, curve: Curve, field: Callable[[float], np.ndarray],
                               s: float, h: Optional[float] = None, richardson: bool = True) -> TangentVector:
    """nabla_t V at s for a vector field V(s) along the curve."""
    h = curve.step if h is None else h
    curve.require_stencil(s, h)
    d = curve.jet(s, 1)
    dV = central_difference(lambda v: np.asarray(field(float(v[0])), dtype=float), np.array([s]),
                            np.array([1.0]), h, richardson)
    value = dV + _conn(space.christoffels(d[0]), d[1], np.asarray(field(s), dtype=float))
    return TangentVector.at(d[0], value)


def _frenet_from_jet(space: AmbientSpace, s: float, p: np.ndarray, t: np.ndarray, A1: np.ndarray,
                     A2: np.ndarray) -> FrenetSample:
    kappa = space.norm(p, A1)
    if kappa < KAPPA_FLOOR:
        return FrenetSample(s=s, t=TangentVector.at(p, t))
    n = A1 / kappa
    kappa_prime = space.inner(p, A2, n)
    dn = (A2 - kappa_prime * n) / kappa
    if space.dim == 3:
        b = space.cross(p, t, n)
        tau = space.inner(p, dn, b)
        rank = 3
    else:
        w = dn + kappa * t
        w = w - space.inner(p, w, t) * t - space.inner(p, w, n) * n
        tau = space.norm(p, w)
        if tau > TORSION_FLOOR:
            b, rank = w / tau, 3
        else:
            b, tau, rank = None, 0.0, 2
    sample = FrenetSample(
        s=s, t=TangentVector.at(p, t), kappa=kappa, tau=tau, kappa_prime=kappa_prime,
        n=TangentVector.at(p, n), b=None if b is None else TangentVector.at(p, b), rank=rank,
    )
    if isinstance(space, BCVSpace):
        sample.n3 = float(space.to_frame(p, n)[2])
        sample.b3 = float(space.to_frame(p, b)[2])
    return sample


def frenet_apparatus(space: AmbientSpace, curve: Curve, s: float) -> FrenetSample:
    """
    Frenet frame {t, n, b} with curvature and torsion at s.
    Points with kappa < KAPPA_FLOOR come back as geodesic samples (rank 1, kappa = 0).
    """
    p, t, A1, A2 = covariant_jet(space, curve, s)
    return _frenet_from_jet(space, s, p, t, A1, A2)


def torsion_derivative(space: AmbientSpace, curve: Curve, s: float, h: Optional[float] = None,
                       richardson: bool = False) -> float:
    h = curve.step if h is None else h
    curve.require_stencil(s, h)
    return scalar_derivative(lambda v: frenet_apparatus(space, curve, v).tau, s, h, richardson)


def bitension(space: AmbientSpace, curve: Curve, s: float, h: Optional[float] = None) -> BitensionSample:
    """tau2 = nabla_t^3 t + R(nabla_t t, t)t with its Frenet components."""
    p, t, A1, A2 = covariant_jet(space, curve, s)
    A3 = covariant_derivative_along(space, curve, lambda v: covariant_jet(space, curve, v)[3], s, h).array
    tau2 = A3 + space.curvature(p, A1, t, t)
    sample = _frenet_from_jet(space, s, p, t, A1, A2)
    frame = [t] + [v.array for v in (sample.n, sample.b) if v is not None]
    components = [space.inner(p, tau2, e) for e in frame]
    components += [0.0] * (3 - len(components))
    remainder = tau2 - sum(c * e for c, e in zip(components, frame))
    return BitensionSample(s=s, tau2=TangentVector.at(p, tau2), components=tuple(components),
                           remainder=space.norm(p, remainder))


def _binormal_term(space: AmbientSpace, p: np.ndarray, sample: FrenetSample) -> float:
    """<R(t, n)t, b>; for rank-2 frames in dimension >= 4, the norm of R(t, n)t off span{t, n}."""
    t, n = sample.t.array, sample.n.array
    Rtnt = space.curvature(p, t, n, t)
    if sample.b is not None:
        return space.inner(p, Rtnt, sample.b.array)
    off = Rtnt - space.inner(p, Rtnt, t) * t - space.inner(p, Rtnt, n) * n
    return space.norm(p, off)


def biharmonic_residuals(space: AmbientSpace, curve: Curve, grid: Sequence[float],
                         h: Optional[float] = None, richardson: bool = False) -> List[ResidualSample]:
    """
    Per-sample residuals of the curve equation along the Frenet frame:
    tangent |kappa - mean kappa|, normal |kappa^2 + tau^2 - K(t, n)|,
    binormal |tau' + <R(t, n)t, b>| and its bitension-consistent form |tau' - <R(t, n)t, b>|.
    Geodesic samples are vacuous (all residuals zero).
    """
    frenet = [(s, frenet_apparatus(space, curve, float(s))) for s in grid]
    proper = [sample.kappa for _, sample in frenet if not sample.is_geodesic]
    if not proper:
        logger.debug(f"{curve.name}: geodesic on the whole grid, vacuously biharmonic")
    kappa_mean = float(np.mean(proper)) if proper else 0.0

    out: List[ResidualSample] = []
    for s, sample in frenet:
        if sample.is_geodesic:
            out.append(ResidualSample(s=float(s), kappa=0.0, tau=0.0, geodesic=True))
            continue
        p = curve.point(float(s))
        t, n = sample.t.array, sample.n.array
        sectional = space.inner(p, space.curvature(p, t, n, n), t)
        binormal = _binormal_term(space, p, sample)
        if sample.b is None:
            tau_prime, plus, minus = 0.0, binormal, binormal
        else:
            tau_prime = torsion_derivative(space, curve, float(s), h, richardson)
            plus, minus = abs(tau_prime + binormal), abs(tau_prime - binormal)
        out.append(ResidualSample(
            s=float(s), kappa=sample.kappa, tau=sample.tau,
            tangent=abs(sample.kappa - kappa_mean),
            normal=abs(sample.kappa ** 2 + sample.tau ** 2 - sectional),
            binormal=plus, binormal_consistent=minus,
            n3=sample.n3, b3=sample.b3,
            extras={"tau_prime": tau_prime, "sectional": sectional},
        ))
    return out


def is_vacuous(samples: Sequence[ResidualSample]) -> bool:
    return all(sample.geodesic for sample in samples)


def max_residuals(samples: Sequence[ResidualSample]) -> dict:
    keys = ("tangent", "normal", "binormal", "binormal_consistent")
    return {key: max((getattr(sample, key) for sample in samples), default=0.0) for key in keys}


def bcv_biharmonic_system(space: BCVSpace, curve: Curve, grid: Sequence[float],
                          tolerance: float = 1e-6) -> VerificationReport:
    """
    Residuals of the BCV curve system: kappa constant and nonzero, tau constant, n3 = 0,
    kappa^2 + tau^2 = b^2/4 - (b^2 - 4a) b3^2.
    """
    space.require_non_space_form()
    report = VerificationReport(case=curve.name, meta={"samples": len(grid), "a": space.a, "b": space.b})
    frenet = [frenet_apparatus(space, curve, float(s)) for s in grid]
    proper = [sample for sample in frenet if not sample.is_geodesic]
    report.meta["vacuous"] = not proper
    if not proper:
        for name in ("kappa_constant", "tau_constant", "n3", "kappa_tau_relation"):
            report.add(name, 0.0, tolerance)
        return report

    kappas = np.array([sample.kappa for sample in proper])
    taus = np.array([sample.tau for sample in proper])
    b3 = np.array([sample.b3 for sample in proper])
    rhs = space.b ** 2 / 4.0 - (space.b ** 2 - 4.0 * space.a) * b3 ** 2
    report.add("kappa_constant", float(np.abs(kappas - kappas.mean()).max()), tolerance)
    report.add("tau_constant", float(np.abs(taus - taus.mean()).max()), tolerance)
    report.add("n3", max(abs(sample.n3) for sample in proper), tolerance)
    report.add("kappa_tau_relation", float(np.abs(kappas ** 2 + taus ** 2 - rhs).max()), tolerance)
    report.meta.update({"kappa": float(kappas.mean()), "tau": float(taus.mean())})
    return report


def frenet_csv_rows(space: AmbientSpace, curve: Curve, grid: Sequence[float]) -> List[List[str]]:
    """Rows (s, kappa, tau, n3, b3, res_t, res_n, res_b) for plotting."""
    def fmt(value):
        return "" if value is None else f"{value:.12g}"

    return [
        [fmt(r.s), fmt(r.kappa), fmt(r.tau), fmt(r.n3), fmt(r.b3), fmt(r.tangent), fmt(r.normal), fmt(r.binormal)]
        for r in biharmonic_residuals(space, curve, grid)
    ]
