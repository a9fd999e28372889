"""
Intrinsic geodesics of an immersion, integrated in the chart and traced in the ambient.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from curves.base import Curve
from curves.frenet import biharmonic_residuals, is_vacuous, max_residuals
from utils.exceptions import ChartExitError
from utils.numerics import (
    DEFAULT_CURVE_STEP, DEFAULT_OUTER_STEP, central_difference, christoffel_from_metric, rk4_step,
)

from .immersion import Immersion

logger = logging.getLogger(__name__)


def induced_christoffels(imm: Immersion, u: np.ndarray) -> np.ndarray:
    return christoffel_from_metric(imm.metric, u, imm.fd_step)


def _geodesic_rhs(imm: Immersion):
    m = imm.param_dim

    def rhs(state):
        u, du = state[:m], state[m:]
        return np.concatenate([du, -np.einsum('kij,i,j->k', induced_christoffels(imm, u), du, du)])
    return rhs


class GeodesicTrace(Curve):
    """
    Ambient trace s -> x(u(s)) of an integrated chart geodesic on [0, length].
    Between nodes the state is advanced by one partial RK4 step from the nearest node;
    gamma'' and gamma''' come from the geodesic equation itself.
    """
    name = "geodesic"

    def __init__(self, imm: Immersion, nodes: np.ndarray, step: float, curve_step: float = DEFAULT_CURVE_STEP,
                 outer_step: float = DEFAULT_OUTER_STEP, label: Optional[str] = None):
        super().__init__(imm.ambient, (0.0, step * (len(nodes) - 1)), curve_step)
        self.imm = imm
        self.nodes = nodes
        self.node_step = step
        self.outer_step = outer_step
        self._rhs = _geodesic_rhs(imm)
        if label:
            self.name = label

    @property
    def length(self) -> float:
        return self.domain[1]

    def state(self, s: float) -> np.ndarray:
        k = int(round(s / self.node_step))
        k = min(max(k, 0), len(self.nodes) - 1)
        offset = s - k * self.node_step
        if offset == 0.0:
            return self.nodes[k].copy()
        return rk4_step(self._rhs, self.nodes[k], offset)

    def chart_jet(self, s: float) -> List[np.ndarray]:
        """[u, u', u'', u''']."""
        m = self.imm.param_dim
        state = self.state(s)
        u, du = state[:m], state[m:]
        gamma = induced_christoffels(self.imm, u)
        d2u = -np.einsum('kij,i,j->k', gamma, du, du)
        dgamma = central_difference(lambda v: induced_christoffels(self.imm, v), u, du, self.outer_step)
        d3u = -np.einsum('kij,i,j->k', dgamma, du, du) - 2.0 * np.einsum('kij,i,j->k', gamma, d2u, du)
        return [u, du, d2u, d3u]

    def point(self, s: float) -> np.ndarray:
        return self.imm.point(self.state(s)[:self.imm.param_dim])

    def jet(self, s: float, order: int) -> List[np.ndarray]:
        if order > 3:
            raise ValueError("geodesic traces provide derivatives up to third order")
        u, du, d2u, d3u = self.chart_jet(s)
        x = self.imm.point(u)
        J = self.imm.jacobian(u)
        out = [x, J @ du]
        if order >= 2:
            D2 = self.imm.hessian(u)
            out.append(np.einsum('kij,i,j->k', D2, du, du) + J @ d2u)
        if order >= 3:
            D3 = self.imm.third(u)
            out.append(np.einsum('kijl,i,j,l->k', D3, du, du, du)
                       + 3.0 * np.einsum('kij,i,j->k', D2, d2u, du) + J @ d3u)
        return out[:order + 1]


def surface_geodesic(imm: Immersion, u0, dir0, length: float, step: float,
                     curve_step: float = DEFAULT_CURVE_STEP, outer_step: float = DEFAULT_OUTER_STEP) -> GeodesicTrace:
    """
    Fixed-step RK4 integration of u'' + Gamma(u)(u', u') = 0 from (u0, dir0), |dir0|_g = 1.
    Raises ChartExitError as soon as a node leaves the chart.
    """
    m = imm.param_dim
    u0 = imm.require(u0)
    dir0 = np.asarray(dir0, dtype=float)
    count = max(1, int(math.ceil(length / step - 1e-12)))
    h = length / count
    rhs = _geodesic_rhs(imm)
    nodes = [np.concatenate([u0, dir0])]
    for index in range(count):
        nxt = rk4_step(rhs, nodes[-1], h)
        if not imm.contains(nxt[:m]):
            raise ChartExitError(f"geodesic from {u0} left the chart of {imm.name} at s = {(index + 1) * h:.4g}")
        nodes.append(nxt)
    return GeodesicTrace(imm, np.array(nodes), h, curve_step, outer_step, label=f"{imm.name}:geodesic")


def random_start(imm: Immersion, rng: np.random.Generator):
    """Chart-uniform start point in the sample box and a g-unit direction."""
    lo, hi = imm.sample_box
    u0 = rng.uniform(lo, hi)
    direction = rng.normal(size=imm.param_dim)
    g = imm.metric(u0)
    return u0, direction / math.sqrt(direction @ g @ direction)


@dataclass
class GeodesicResult:
    index: int
    u0: np.ndarray
    dir0: np.ndarray
    tangent: float = 0.0
    normal: float = 0.0
    binormal: float = 0.0
    binormal_consistent: float = 0.0
    skipped: bool = False
    vacuous: bool = False
    speed_error: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def worst(self) -> float:
        return max(self.tangent, self.normal, self.binormal)

    def verdict(self, tolerance: float) -> str:
        if self.skipped:
            return "skipped"
        if self.vacuous:
            return "vacuous-pass"
        return "pass" if self.worst <= tolerance else "fail"


def geodesic_residuals(imm: Immersion, u0, dir0, length: float, step: float, stride: int = 5,
                       curve_step: float = DEFAULT_CURVE_STEP, outer_step: float = DEFAULT_OUTER_STEP,
                       index: int = 0) -> GeodesicResult:
    """Integrate one geodesic and evaluate the biharmonic curve residuals on every stride-th node."""
    result = GeodesicResult(index=index, u0=np.asarray(u0, dtype=float), dir0=np.asarray(dir0, dtype=float))
    try:
        trace = surface_geodesic(imm, u0, dir0, length, step, curve_step, outer_step)
    except ChartExitError as exc:
        logger.warning(f"{imm.name}: geodesic {index} skipped ({exc})")
        result.skipped = True
        return result
    margin = 2.0 * curve_step
    grid = [s for s in trace.node_step * np.arange(0, len(trace.nodes), stride) if margin <= s <= trace.length - margin]
    if not grid:
        grid = [0.5 * trace.length]
    samples = biharmonic_residuals(imm.ambient, trace, grid)
    worst = max_residuals(samples)
    result.tangent, result.normal = worst["tangent"], worst["normal"]
    result.binormal, result.binormal_consistent = worst["binormal"], worst["binormal_consistent"]
    result.vacuous = is_vacuous(samples)
    result.speed_error = max(abs(trace.speed(s) - 1.0) for s in grid)
    proper = [sample for sample in samples if not sample.geodesic]
    if proper:
        result.extras = {
            "kappa": float(np.mean([sample.kappa for sample in proper])),
            "tau": float(np.mean([sample.tau for sample in proper])),
            "kappa2_tau2": max(sample.kappa ** 2 + sample.tau ** 2 for sample in proper),
        }
    return result


def sample_geodesics(imm: Immersion, count: int, length: float, step: float, seed: int, stride: int = 5,
                     curve_step: float = DEFAULT_CURVE_STEP, outer_step: float = DEFAULT_OUTER_STEP) -> List[GeodesicResult]:
    rng = np.random.default_rng(seed)
    starts = [random_start(imm, rng) for _ in range(count)]
    return [geodesic_residuals(imm, u0, dir0, length, step, stride, curve_step, outer_step, index)
            for index, (u0, dir0) in enumerate(starts)]
