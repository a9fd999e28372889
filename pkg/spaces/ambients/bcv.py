"""
Bianchi-Cartan-Vranceanu spaces N(a, b):
h = (dx^2 + dy^2) / lambda_a^2 + (dz + (b/2)(y dx - x dy) / lambda_a)^2,  lambda_a = 1 + a(x^2 + y^2).
"""
import enum
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from utils.exceptions import DomainError, ParameterError
from utils.numerics import DEFAULT_FD_STEP, DEFAULT_OUTER_STEP, christoffel_from_metric

from .base import AmbientSpace, FrameTriple, PointLike, TangentVector, as_coords

logger = logging.getLogger(__name__)


class BCVType(str, enum.Enum):
    SPACE_FORM = "SpaceForm"
    HEISENBERG = "Heisenberg"
    S2XR = "S2xR"
    H2XR = "H2xR"
    SU2 = "SU2"
    SL2R = "SL2R"


def classify_bcv(a: float, b: float, tol: float = 1e-12) -> BCVType:
    """Model geometry of N(a, b)."""
    if abs(4.0 * a - b * b) <= tol:
        return BCVType.SPACE_FORM
    if abs(a) <= tol:
        return BCVType.HEISENBERG
    if abs(b) <= tol:
        return BCVType.S2XR if a > 0 else BCVType.H2XR
    return BCVType.SU2 if a > 0 else BCVType.SL2R


@dataclass(frozen=True)
class BCVSpace(AmbientSpace):
    a: float
    b: float
    fd_step: float = DEFAULT_FD_STEP
    outer_step: float = DEFAULT_OUTER_STEP
    richardson: bool = False

    name = "bcv"

    @property
    def dim(self) -> int:
        return 3

    @property
    def kind(self) -> BCVType:
        return classify_bcv(self.a, self.b)

    @property
    def is_space_form(self) -> bool:
        return self.kind is BCVType.SPACE_FORM

    def require_non_space_form(self) -> None:
        if self.is_space_form:
            raise ParameterError(f"N({self.a}, {self.b}) is a space form (4a = b^2)")

    def lambda_a(self, p: PointLike) -> float:
        x, y, _ = as_coords(p)
        return 1.0 + self.a * (x * x + y * y)

    def check_point(self, p: PointLike) -> np.ndarray:
        coords = as_coords(p)
        if coords.shape != (3,):
            raise DomainError(f"BCV points have 3 coordinates, got {coords.shape}")
        lam = self.lambda_a(coords)
        if lam <= 0:
            raise DomainError(f"lambda_a = {lam:.3g} <= 0 at {coords}: outside the chart")
        if lam < 10.0 * self.fd_step:
            raise DomainError(f"lambda_a = {lam:.3g} too close to the chart boundary")
        return coords

    def _raw_metric(self, p: np.ndarray) -> np.ndarray:
        x, y, _ = p
        lam = 1.0 + self.a * (x * x + y * y)
        theta = np.array([self.b * y / (2.0 * lam), -self.b * x / (2.0 * lam), 1.0])
        return np.diag([1.0 / lam ** 2, 1.0 / lam ** 2, 0.0]) + np.outer(theta, theta)

    def metric(self, p: PointLike) -> np.ndarray:
        return self._raw_metric(self.check_point(p))

    def frame_matrix(self, p: PointLike) -> np.ndarray:
        x, y, _ = self.check_point(p)
        lam = self.lambda_a((x, y, 0.0))
        return np.array([
            [lam, 0.0, 0.0],
            [0.0, lam, 0.0],
            [-self.b * y / 2.0, self.b * x / 2.0, 1.0],
        ])

    def frame(self, p: PointLike) -> FrameTriple:
        coords = self.check_point(p)
        F = self.frame_matrix(coords)
        return FrameTriple(*(TangentVector.at(coords, F[:, i]) for i in range(3)))

    def to_frame(self, p: PointLike, v) -> np.ndarray:
        """Frame components (v^1, v^2, v^3) of a chart vector."""
        return np.linalg.solve(self.frame_matrix(p), as_coords(v))

    def connection_table(self, p: PointLike) -> np.ndarray:
        """C[i, j] = frame components of nabla_{E_i} E_j (closed form)."""
        x, y, _ = self.check_point(p)
        a, h = self.a, self.b / 2.0
        return np.array([
            [[0.0, 2 * a * y, 0.0], [-2 * a * y, 0.0, h], [0.0, -h, 0.0]],
            [[0.0, -2 * a * x, -h], [2 * a * x, 0.0, 0.0], [h, 0.0, 0.0]],
            [[0.0, -h, 0.0], [h, 0.0, 0.0], [0.0, 0.0, 0.0]],
        ])

    def christoffels(self, p: PointLike) -> np.ndarray:
        coords = self.check_point(p)
        return christoffel_from_metric(self._raw_metric, coords, self.fd_step, self.richardson)

    def orthonormal_basis(self, p: PointLike) -> List[np.ndarray]:
        F = self.frame_matrix(p)
        return [F[:, i] for i in range(3)]

    def cross(self, p: PointLike, X, Y) -> np.ndarray:
        F = self.frame_matrix(p)
        return F @ np.cross(np.linalg.solve(F, as_coords(X)), np.linalg.solve(F, as_coords(Y)))

    def killing_frame_coefficients(self, p: PointLike) -> np.ndarray:
        """Rows: frame components of X1..X4."""
        x, y, _ = self.check_point(p)
        a, b = self.a, self.b
        lam = self.lambda_a((x, y, 0.0))
        return np.array([
            [1 - 2 * a * y * y / lam, 2 * a * x * y / lam, b * y / lam],
            [2 * a * x * y / lam, 1 - 2 * a * x * x / lam, -b * x / lam],
            [-y / lam, x / lam, -b * (x * x + y * y) / (2 * lam)],
            [0.0, 0.0, 1.0],
        ])

    def killing_field(self, index: int):
        """Chart components of X_index as a function of the point (index 1..4)."""
        def field(p):
            return self.frame_matrix(p) @ self.killing_frame_coefficients(p)[index - 1]
        return field
