"""
The helix family of BCV spaces:
gamma(s) = (r sin(lambda s), -r cos(lambda s), lambda mu s), unit speed for
lambda = lambda_a / sqrt(r^2 + ((b/2) r^2 - mu lambda_a)^2).
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from curves.base import AnalyticCurve
from spaces.ambients import BCVSpace
from utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

GEODESIC_FLOOR = 1e-12


def _check(a: float, r: float) -> float:
    if r <= 0:
        raise ParameterError(f"helix radius must be > 0, got {r}")
    lam_a = 1.0 + a * r * r
    if lam_a <= 0:
        raise ParameterError(f"1 + a r^2 = {lam_a:.4g} <= 0: the circle leaves the chart")
    return lam_a


def helix_angles(a: float, b: float, r: float, mu: float) -> Tuple[float, float]:
    """(sin w, cos w) with sin w = r / N, cos w = ((b/2) r^2 - mu lambda_a) / N."""
    lam_a = _check(a, r)
    c = 0.5 * b * r * r - mu * lam_a
    norm = math.hypot(r, c)
    return r / norm, c / norm


@dataclass(frozen=True)
class HelixParams:
    a: float
    b: float
    r: float
    mu: float

    def __post_init__(self):
        _check(self.a, self.r)

    @property
    def lambda_a(self) -> float:
        return 1.0 + self.a * self.r * self.r

    @cached_property
    def angles(self) -> Tuple[float, float]:
        return helix_angles(self.a, self.b, self.r, self.mu)

    @property
    def sin_omega(self) -> float:
        return self.angles[0]

    @property
    def cos_omega(self) -> float:
        return self.angles[1]

    @property
    def vertical(self) -> float:
        """<t, E3> along the curve; equals -cos w."""
        return -self.cos_omega

    @property
    def lam(self) -> float:
        return self.lambda_a / math.hypot(self.r, 0.5 * self.b * self.r ** 2 - self.mu * self.lambda_a)

    @property
    def varpi(self) -> float:
        # b enters through <t, E3>, the angle the Frenet computation actually sees
        return self.lam - 2.0 * self.a * self.r * self.sin_omega - self.b * self.vertical

    @property
    def kappa(self) -> float:
        return abs(self.varpi) * self.sin_omega

    @property
    def tau(self) -> float:
        """Torsion in the metric-cross orientation b = t x n."""
        return self.varpi * self.vertical + 0.5 * self.b

    @property
    def b3(self) -> float:
        return math.copysign(self.sin_omega, self.varpi)

    @property
    def is_geodesic(self) -> bool:
        return abs(self.varpi * self.sin_omega) <= GEODESIC_FLOOR

    def derivative(self, s: float, k: int) -> np.ndarray:
        lam = self.lam
        phase = lam * s + k * math.pi / 2
        scale = self.r * lam ** k
        if k == 0:
            z = lam * self.mu * s
        else:
            z = lam * self.mu if k == 1 else 0.0
        return np.array([scale * math.sin(phase), -scale * math.cos(phase), z])


class HelixCurve(AnalyticCurve):
    def __init__(self, params: HelixParams, space: BCVSpace):
        super().__init__(space, params.derivative, label=f"helix:a={params.a:g},b={params.b:g},r={params.r:g},mu={params.mu:g}")
        self.params = params


def make_helix(a: float, b: float, r: float, mu: float, space: Optional[BCVSpace] = None) -> HelixCurve:
    params = HelixParams(a, b, r, mu)
    if space is None:
        space = BCVSpace(a, b)
    elif (space.a, space.b) != (a, b):
        raise ParameterError(f"helix parameters ({a}, {b}) do not match N({space.a}, {space.b})")
    return HelixCurve(params, space)


def helix_kappa_tau(a: float, b: float, r: float, mu: float) -> Tuple[float, float]:
    """
    Closed-form curvature and torsion, kappa = |varpi| sin w >= 0.
    Returns (0, 0) on geodesic helices; use helix_is_geodesic to tell them apart.
    """
    params = HelixParams(a, b, r, mu)
    if params.is_geodesic:
        logger.debug(f"helix ({a}, {b}, {r}, {mu}) is a geodesic")
        return 0.0, 0.0
    return params.kappa, params.tau


def helix_is_geodesic(params: HelixParams) -> bool:
    return params.is_geodesic
