"""
Charts of the unit sphere S^p in R^{p+1} with closed-form derivatives up to third order.
Arrays follow the immersion layout: jacobian[:, i], hessian[:, i, j], third[:, i, j, k].
"""
import math

import numpy as np

# graph charts stop where the last coordinate drops below sqrt(0.1)
GRAPH_LIMIT = 0.9


class AngleChart:
    """S^1: theta -> (cos theta, sin theta); global."""
    dim = 1
    ambient_dim = 2
    box = (np.array([-math.pi]), np.array([math.pi]))

    def contains(self, w) -> bool:
        return True

    @staticmethod
    def _d(theta: float, k: int) -> np.ndarray:
        return np.array([math.cos(theta + k * math.pi / 2), math.sin(theta + k * math.pi / 2)])

    def point(self, w) -> np.ndarray:
        return self._d(float(w[0]), 0)

    def jacobian(self, w) -> np.ndarray:
        return self._d(float(w[0]), 1).reshape(2, 1)

    def hessian(self, w) -> np.ndarray:
        return self._d(float(w[0]), 2).reshape(2, 1, 1)

    def third(self, w) -> np.ndarray:
        return self._d(float(w[0]), 3).reshape(2, 1, 1, 1)


class GraphChart:
    """S^p, p >= 2: w -> (w, sqrt(1 - |w|^2)) on |w|^2 < GRAPH_LIMIT."""
    ambient_dim: int

    def __init__(self, dim: int):
        if dim < 2:
            raise ValueError("graph charts are used for S^p with p >= 2")
        self.dim = dim
        self.ambient_dim = dim + 1
        edge = math.sqrt(GRAPH_LIMIT)
        self.box = (-edge * np.ones(dim), edge * np.ones(dim))

    def contains(self, w) -> bool:
        w = np.asarray(w, dtype=float)
        return bool(w @ w < GRAPH_LIMIT)

    def _height(self, w: np.ndarray) -> float:
        return math.sqrt(1.0 - float(w @ w))

    def point(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        return np.append(w, self._height(w))

    def jacobian(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        s = self._height(w)
        return np.vstack([np.eye(self.dim), -w / s])

    def hessian(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        s = self._height(w)
        out = np.zeros((self.ambient_dim, self.dim, self.dim))
        out[-1] = -np.eye(self.dim) / s - np.outer(w, w) / s ** 3
        return out

    def third(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        s = self._height(w)
        eye = np.eye(self.dim)
        out = np.zeros((self.ambient_dim, self.dim, self.dim, self.dim))
        out[-1] = (-(np.einsum('ij,k->ijk', eye, w) + np.einsum('ik,j->ijk', eye, w)
                     + np.einsum('jk,i->ijk', eye, w)) / s ** 3
                   - 3.0 * np.einsum('i,j,k->ijk', w, w, w) / s ** 5)
        return out


def sphere_chart(p: int):
    return AngleChart() if p == 1 else GraphChart(p)
