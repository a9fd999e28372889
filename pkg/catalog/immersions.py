"""
Closed-form immersions used by the example catalog.
Every class overrides jacobian, hessian and third so the checks never stack
finite differences on top of the chart.
"""
import logging
import math
from typing import Optional

import numpy as np

from hypersurfaces.immersion import Immersion
from spaces.ambients import BCVSpace, SpaceFormN
from utils.exceptions import ParameterError

from .charts import AngleChart, sphere_chart

logger = logging.getLogger(__name__)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def format_param(value: float) -> str:
    """Short form when it reads back as the same float, repr otherwise, so labels resolve to the same case."""
    short = f"{value:g}"
    return short if float(short) == value else repr(float(value))


class CliffordTorus(Immersion):
    """
    S^p[1/sqrt 2] x S^q[1/sqrt 2] in the unit sphere S^{p+q+1}.
    The normal (-y1, y2)/sqrt 2 gives principal curvature +1 on the first factor, -1 on the second.
    """
    name = "clifford_torus"

    def __init__(self, p: int, q: int, orientation: int = 1):
        if p < 1 or q < 1:
            raise ParameterError(f"Clifford torus factors need p, q >= 1, got ({p}, {q})")
        self.p, self.q = p, q
        self.first, self.second = sphere_chart(p), sphere_chart(q)
        box = (np.concatenate([self.first.box[0], self.second.box[0]]),
               np.concatenate([self.first.box[1], self.second.box[1]]))
        super().__init__(SpaceFormN(p + q + 1, 1.0), p + q, box, orientation,
                         label=f"clifford-torus:{p},{q}")

    def _split(self, u):
        u = np.asarray(u, dtype=float)
        return u[:self.p], u[self.p:]

    def contains(self, u) -> bool:
        w1, w2 = self._split(u)
        return self.first.contains(w1) and self.second.contains(w2)

    def point(self, u) -> np.ndarray:
        w1, w2 = self._split(u)
        return INV_SQRT2 * np.concatenate([self.first.point(w1), self.second.point(w2)])

    def _blocks(self, u, order: int) -> np.ndarray:
        w1, w2 = self._split(u)
        getter = {1: 'jacobian', 2: 'hessian', 3: 'third'}[order]
        A = getattr(self.first, getter)(w1)
        B = getattr(self.second, getter)(w2)
        m = self.param_dim
        out = np.zeros((self.p + self.q + 2,) + (m,) * order)
        first_rows = slice(0, self.p + 1)
        second_rows = slice(self.p + 1, None)
        out[(first_rows,) + (slice(0, self.p),) * order] = A
        out[(second_rows,) + (slice(self.p, m),) * order] = B
        return INV_SQRT2 * out

    def jacobian(self, u) -> np.ndarray:
        return self._blocks(u, 1)

    def hessian(self, u) -> np.ndarray:
        return self._blocks(u, 2)

    def third(self, u) -> np.ndarray:
        return self._blocks(u, 3)

    def normal_hint(self, u) -> np.ndarray:
        w1, w2 = self._split(u)
        return np.concatenate([-self.first.point(w1), self.second.point(w2)])


class _SphereGraph(Immersion):
    """x(w) = (scale * y(w), height) for the chart y of S^{n-1}."""

    def __init__(self, n: int, scale: float, height: float, orientation: int, label: str):
        if n < 3:
            raise ParameterError(f"sphere catalog hypersurfaces need n >= 3, got {n}")
        self.n = n
        self.scale, self.height = scale, height
        self.chart = sphere_chart(n - 1)
        super().__init__(SpaceFormN(n, 1.0), n - 1, self.chart.box, orientation, label=label)

    def contains(self, u) -> bool:
        return self.chart.contains(u)

    def point(self, u) -> np.ndarray:
        return np.append(self.scale * self.chart.point(u), self.height)

    def _pad(self, block: np.ndarray) -> np.ndarray:
        return np.concatenate([self.scale * block, np.zeros((1,) + block.shape[1:])])

    def jacobian(self, u) -> np.ndarray:
        return self._pad(self.chart.jacobian(u))

    def hessian(self, u) -> np.ndarray:
        return self._pad(self.chart.hessian(u))

    def third(self, u) -> np.ndarray:
        return self._pad(self.chart.third(u))


class SmallSphere(_SphereGraph):
    """S^{n-1}[1/sqrt 2] at height 1/sqrt 2 in S^n; every principal curvature is 1."""
    name = "small_hypersphere"

    def __init__(self, n: int, orientation: int = 1):
        super().__init__(n, INV_SQRT2, INV_SQRT2, orientation, f"small-hypersphere:n={n}")

    def normal_hint(self, u) -> np.ndarray:
        hint = -self.point(u)
        hint[-1] += 1.0
        return hint


class Equator(_SphereGraph):
    """The totally geodesic great sphere x_{n+1} = 0."""
    name = "equator"

    def __init__(self, n: int, orientation: int = 1):
        super().__init__(n, 1.0, 0.0, orientation, f"equator:n={n}")

    def normal_hint(self, u) -> np.ndarray:
        hint = np.zeros(self.n + 1)
        hint[-1] = 1.0
        return hint


class HopfCylinder(Immersion):
    """
    Preimage under the Hopf fibration of the Euclidean circle of radius r about the origin:
    x(s, t) = (r cos theta, r sin theta, c theta + t), theta = lambda_a s / r, c = b r^2 / (2 lambda_a).
    s is arc length on the base, t runs along E3, and the induced metric is the identity.
    The normal hint points radially inwards, so II_11 = (1 - a r^2)/r.
    """
    name = "hopf_cylinder"

    def __init__(self, space: BCVSpace, r: float, orientation: int = 1, label: Optional[str] = None):
        lam = 1.0 + space.a * r * r
        if r <= 0 or lam <= 0:
            raise ParameterError(f"Hopf cylinder radius r = {r} outside the chart of N({space.a}, {space.b})")
        self.r = r
        self.lam = lam
        self.omega = lam / r
        self.c = space.b * r * r / (2.0 * lam)
        period = math.pi / self.omega
        box = (np.array([-period, -1.0]), np.array([period, 1.0]))
        label = label or f"hopf:a={format_param(space.a)},b={format_param(space.b)},r={format_param(r)}"
        super().__init__(space, 2, box, orientation, label=label)

    def contains(self, u) -> bool:
        return True

    def _theta(self, u) -> float:
        return self.omega * float(u[0])

    def _circle(self, theta: float, k: int) -> np.ndarray:
        return self.r * AngleChart._d(theta, k)

    def point(self, u) -> np.ndarray:
        theta = self._theta(u)
        return np.append(self._circle(theta, 0), self.c * theta + float(u[1]))

    def jacobian(self, u) -> np.ndarray:
        theta = self._theta(u)
        J = np.zeros((3, 2))
        J[:2, 0] = self.omega * self._circle(theta, 1)
        J[2, 0] = self.c * self.omega
        J[2, 1] = 1.0
        return J

    def hessian(self, u) -> np.ndarray:
        D2 = np.zeros((3, 2, 2))
        D2[:2, 0, 0] = self.omega ** 2 * self._circle(self._theta(u), 2)
        return D2

    def third(self, u) -> np.ndarray:
        D3 = np.zeros((3, 2, 2, 2))
        D3[:2, 0, 0, 0] = self.omega ** 3 * self._circle(self._theta(u), 3)
        return D3

    def normal_hint(self, u) -> np.ndarray:
        return -np.append(AngleChart._d(self._theta(u), 0), 0.0)
