"""
Arc-length curves in an ambient space and the per-sample records computed along them.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from spaces.ambients import AmbientSpace, Point, TangentVector
from utils.exceptions import StencilError
from utils.numerics import DEFAULT_CURVE_STEP

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]


class Curve:
    """
    A curve s -> gamma(s) in ambient coordinates.
    jet(s, order) returns [gamma, gamma', ..., gamma^(order)].
    """
    name: str = "curve"

    def __init__(self, ambient: AmbientSpace, domain: Interval = (-math.inf, math.inf),
                 step: float = DEFAULT_CURVE_STEP):
        self.ambient = ambient
        self.domain = domain
        self.step = step

    def point(self, s: float) -> np.ndarray:
        raise NotImplementedError("Each curve must implement point evaluation.")

    def jet(self, s: float, order: int) -> List[np.ndarray]:
        raise NotImplementedError

    def derivative(self, s: float, k: int) -> np.ndarray:
        return self.jet(s, k)[k]

    def eval(self, s: float) -> Point:
        return Point(tuple(float(c) for c in self.point(s)))

    def tangent(self, s: float) -> TangentVector:
        d = self.jet(s, 1)
        return TangentVector.at(d[0], d[1])

    def speed(self, s: float) -> float:
        d = self.jet(s, 1)
        return self.ambient.norm(d[0], d[1])

    def contains(self, s: float) -> bool:
        lo, hi = self.domain
        return lo <= s <= hi

    def require_stencil(self, s: float, reach: float) -> None:
        if not (self.contains(s - reach) and self.contains(s + reach)):
            raise StencilError(f"stencil [{s - reach:.4g}, {s + reach:.4g}] leaves the curve domain {self.domain}")

    def grid(self, count: int, margin: Optional[float] = None) -> np.ndarray:
        """count evenly spaced parameters, kept `margin` inside finite domain ends."""
        lo, hi = self.domain
        margin = 2.0 * self.step if margin is None else margin
        lo = 0.0 if math.isinf(lo) else lo + margin
        hi = 2.0 * math.pi if math.isinf(hi) else hi - margin
        return np.linspace(lo, hi, count)


class AnalyticCurve(Curve):
    """Curve given by a closed-form derivative function derivative_fn(s, k)."""
    name = "analytic"

    def __init__(self, ambient: AmbientSpace, derivative_fn: Callable[[float, int], np.ndarray],
                 domain: Interval = (-math.inf, math.inf), step: float = DEFAULT_CURVE_STEP,
                 label: str = "analytic"):
        super().__init__(ambient, domain, step)
        self._derivative = derivative_fn
        self.name = label

    def point(self, s: float) -> np.ndarray:
        return np.asarray(self._derivative(s, 0), dtype=float)

    def jet(self, s: float, order: int) -> List[np.ndarray]:
        return [np.asarray(self._derivative(s, k), dtype=float) for k in range(order + 1)]


class SampledCurve(Curve):
    """Curve known only through point evaluations; derivatives by central differences of step `step`."""
    name = "sampled"

    def __init__(self, ambient: AmbientSpace, point_fn: Callable[[float], Sequence[float]],
                 domain: Interval = (-math.inf, math.inf), step: float = 1e-3):
        super().__init__(ambient, domain, step)
        self._point = point_fn

    def point(self, s: float) -> np.ndarray:
        return np.asarray(self._point(s), dtype=float)

    def jet(self, s: float, order: int) -> List[np.ndarray]:
        if order > 3:
            raise ValueError("sampled curves provide derivatives up to third order")
        h = self.step
        if order:
            self.require_stencil(s, 2 * h if order == 3 else h)
        f0 = self.point(s)
        out = [f0]
        if order >= 1:
            fp, fm = self.point(s + h), self.point(s - h)
            out.append((fp - fm) / (2 * h))
        if order >= 2:
            out.append((fp - 2 * f0 + fm) / (h * h))
        if order >= 3:
            fpp, fmm = self.point(s + 2 * h), self.point(s - 2 * h)
            out.append((fpp - 2 * fp + 2 * fm - fmm) / (2 * h ** 3))
        return out


@dataclass
class FrenetSample:
    s: float
    t: TangentVector
    kappa: float = 0.0
    tau: float = 0.0
    kappa_prime: float = 0.0
    n: Optional[TangentVector] = None
    b: Optional[TangentVector] = None
    rank: int = 1
    n3: Optional[float] = None
    b3: Optional[float] = None

    @property
    def is_geodesic(self) -> bool:
        return self.rank == 1


@dataclass
class BitensionSample:
    s: float
    tau2: TangentVector
    components: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    remainder: float = 0.0


@dataclass
class ResidualSample:
    """Residuals of the curve equation split along the Frenet frame at one parameter."""
    s: float
    kappa: float
    tau: float
    tangent: float = 0.0
    normal: float = 0.0
    binormal: float = 0.0
    binormal_consistent: float = 0.0
    geodesic: bool = False
    n3: Optional[float] = None
    b3: Optional[float] = None
    extras: dict = field(default_factory=dict)
