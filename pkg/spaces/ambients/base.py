"""
Uniform interface to a Riemannian ambient space.
Realizations: SpaceFormN (round embedding / flat chart) and BCVSpace (chart metric).
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from utils.exceptions import UnsupportedAmbientError
from utils.numerics import (
    DEFAULT_FD_STEP, DEFAULT_OUTER_STEP, central_difference, partials, second_difference,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Point:
    coords: tuple

    @classmethod
    def of(cls, *coords: float) -> "Point":
        return cls(tuple(float(c) for c in coords))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


@dataclass(frozen=True)
class TangentVector:
    base: Point
    components: tuple

    @classmethod
    def at(cls, base: Union[Point, np.ndarray], components: Sequence[float]) -> "TangentVector":
        point = base if isinstance(base, Point) else Point(tuple(float(c) for c in base))
        return cls(point, tuple(float(c) for c in components))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.components, dtype=float)


@dataclass(frozen=True)
class FrameTriple:
    E1: TangentVector
    E2: TangentVector
    E3: TangentVector

    def as_matrix(self) -> np.ndarray:
        """Columns are the frame vectors in chart components."""
        return np.column_stack([self.E1.array, self.E2.array, self.E3.array])


PointLike = Union[Point, Sequence[float], np.ndarray]
VectorLike = Union[TangentVector, Sequence[float], np.ndarray]


def as_coords(value: Union[PointLike, VectorLike]) -> np.ndarray:
    """Accept Point / TangentVector / raw sequences and return a float array."""
    if isinstance(value, (Point, TangentVector)):
        return value.array
    return np.asarray(value, dtype=float)


class AmbientSpace:
    """
    Base class for ambient Riemannian spaces.
    Coordinates are chart coordinates (BCV, flat) or embedding coordinates (round spheres);
    in both cases nabla_X Y = D_X Y + Gamma(p)(X, Y) for tangent X, Y.
    """
    name: str = "ambient"
    fd_step: float = DEFAULT_FD_STEP
    outer_step: float = DEFAULT_OUTER_STEP
    richardson: bool = False

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def coord_dim(self) -> int:
        return self.dim

    def check_point(self, p: PointLike) -> np.ndarray:
        return as_coords(p)

    def metric(self, p: PointLike) -> np.ndarray:
        raise NotImplementedError("Each ambient must implement its metric.")

    def inner(self, p: PointLike, X: VectorLike, Y: VectorLike) -> float:
        return float(as_coords(X) @ self.metric(p) @ as_coords(Y))

    def norm(self, p: PointLike, X: VectorLike) -> float:
        return float(np.sqrt(max(self.inner(p, X, X), 0.0)))

    def project_tangent(self, p: PointLike, v: VectorLike) -> np.ndarray:
        return as_coords(v)

    def christoffels(self, p: PointLike) -> np.ndarray:
        raise UnsupportedAmbientError(f"{self.name} has no connection model")

    def connection_term(self, p: PointLike, X: VectorLike, Y: VectorLike) -> np.ndarray:
        return np.einsum('kij,i,j->k', self.christoffels(p), as_coords(X), as_coords(Y))

    def christoffel_jet(self, derivs: List[np.ndarray], order: int) -> List[np.ndarray]:
        """
        s-derivatives of Gamma(gamma(s)) up to `order` (<= 2) given curve derivatives
        derivs = [gamma, gamma', gamma'', ...].
        """
        p = derivs[0]
        jet = [self.christoffels(p)]
        if order >= 1:
            jet.append(central_difference(self.christoffels, p, derivs[1], self.outer_step,
                                          self.richardson))
        if order >= 2:
            d2 = second_difference(self.christoffels, p, derivs[1], 10.0 * self.outer_step, True)
            d1 = central_difference(self.christoffels, p, derivs[2], self.outer_step, self.richardson)
            jet.append(d2 + d1)
        return jet

    def riemann(self, p: PointLike) -> np.ndarray:
        """R[l, i, j, k] with R(d_i, d_j) d_k = R[l, i, j, k] d_l."""
        x = self.check_point(p)
        gamma = self.christoffels(x)
        dgamma = partials(self.christoffels, x, self.outer_step, self.richardson)
        return (np.einsum('iljk->lijk', dgamma) - np.einsum('jlik->lijk', dgamma)
                + np.einsum('lim,mjk->lijk', gamma, gamma)
                - np.einsum('ljm,mik->lijk', gamma, gamma))

    def curvature(self, p: PointLike, X: VectorLike, Y: VectorLike, Z: VectorLike) -> np.ndarray:
        """R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z."""
        return np.einsum('lijk,i,j,k->l', self.riemann(p), as_coords(X), as_coords(Y), as_coords(Z))

    def orthonormal_basis(self, p: PointLike) -> List[np.ndarray]:
        raise NotImplementedError

    def cross(self, p: PointLike, X: VectorLike, Y: VectorLike) -> np.ndarray:
        """Metric cross product (dimension 3 only), positively oriented."""
        raise NotImplementedError(f"{self.name} has no cross product")
