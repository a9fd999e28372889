"""
Space forms N^n(rho).
rho > 0: round sphere S^n[1/sqrt(rho)] in its embedding (projection model).
rho = 0: Euclidean chart.
rho < 0: constant-curvature tensor algebra only (orthonormal components at a point).
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from utils.exceptions import DomainError, ParameterError, UnsupportedAmbientError
from utils.numerics import DEFAULT_FD_STEP, DEFAULT_OUTER_STEP

from .base import AmbientSpace, PointLike, as_coords

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpaceFormN(AmbientSpace):
    n: int
    rho: float
    fd_step: float = DEFAULT_FD_STEP
    outer_step: float = DEFAULT_OUTER_STEP
    richardson: bool = False

    name = "space_form"

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"space forms need n >= 2, got {self.n}")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def is_sphere(self) -> bool:
        return self.rho > 0

    @property
    def radius(self) -> float:
        if not self.is_sphere:
            raise ParameterError("only spheres have a radius")
        return 1.0 / np.sqrt(self.rho)

    @property
    def coord_dim(self) -> int:
        return self.n + 1 if self.is_sphere else self.n

    def check_point(self, p: PointLike) -> np.ndarray:
        coords = as_coords(p)
        if coords.shape != (self.coord_dim,):
            raise DomainError(f"expected {self.coord_dim} coordinates, got {coords.shape}")
        if self.is_sphere:
            r2 = 1.0 / self.rho
            if abs(coords @ coords - r2) > 1e-8 * max(1.0, r2):
                raise DomainError(f"|P|^2 = {coords @ coords:.12g} off the sphere of radius^2 {r2:.12g}")
        return coords

    def metric(self, p: PointLike) -> np.ndarray:
        return np.eye(self.coord_dim)

    def project_tangent(self, p: PointLike, v) -> np.ndarray:
        vec = as_coords(v)
        if not self.is_sphere:
            return vec
        P = as_coords(p)
        return vec - self.rho * (vec @ P) * P

    def christoffels(self, p: PointLike) -> np.ndarray:
        if self.rho < 0:
            raise UnsupportedAmbientError("hyperbolic space forms are modelled at the tensor level only")
        P = self.check_point(p)
        if not self.is_sphere:
            return np.zeros((self.n, self.n, self.n))
        # nabla_X Y = D_X Y + rho <X, Y> P for X, Y tangent at P
        return self.rho * np.einsum('k,ij->kij', P, np.eye(self.coord_dim))

    def christoffel_jet(self, derivs: List[np.ndarray], order: int) -> List[np.ndarray]:
        if self.rho < 0:
            raise UnsupportedAmbientError("hyperbolic space forms are modelled at the tensor level only")
        eye = np.eye(self.coord_dim)
        return [self.rho * np.einsum('k,ij->kij', derivs[m], eye) for m in range(order + 1)]

    def curvature(self, p: PointLike, X, Y, Z) -> np.ndarray:
        x, y, z = as_coords(X), as_coords(Y), as_coords(Z)
        return self.rho * ((y @ z) * x - (x @ z) * y)

    def riemann(self, p: PointLike) -> np.ndarray:
        d = self.coord_dim
        eye = np.eye(d)
        # R[l, i, j, k] = rho (delta_jk delta_il - delta_ik delta_jl)
        return self.rho * (np.einsum('jk,li->lijk', eye, eye) - np.einsum('ik,lj->lijk', eye, eye))

    def orthonormal_basis(self, p: PointLike) -> List[np.ndarray]:
        if not self.is_sphere:
            return list(np.eye(self.n))
        P = self.check_point(p)
        unit = P / np.linalg.norm(P)
        # first column of q is +-unit; the remaining columns span the tangent space
        q, _ = np.linalg.qr(np.column_stack([unit, np.eye(self.coord_dim)]))
        return [q[:, i] for i in range(1, self.coord_dim)]

    def cross(self, p: PointLike, X, Y) -> np.ndarray:
        if self.n != 3:
            raise ParameterError("cross products need a 3-dimensional ambient")
        x, y = as_coords(X), as_coords(Y)
        if not self.is_sphere:
            return np.cross(x, y)
        P = self.check_point(p)
        unit = P / np.linalg.norm(P)
        eye = np.eye(4)
        return np.array([np.linalg.det(np.vstack([unit, x, y, eye[i]])) for i in range(4)])
