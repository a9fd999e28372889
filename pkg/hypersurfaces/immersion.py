"""
Codimension-one immersions and their second-order geometry.

An Immersion maps chart parameters u (dimension m = n - 1) to ambient coordinates.
For sphere ambients the ambient coordinates are the embedding, so the unit normal is
taken orthogonal to both the tangent columns and the position vector.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from spaces.ambients import AmbientSpace, SpaceFormN
from utils.exceptions import DegenerateImmersionError, DomainError, StencilError
from utils.numerics import DEFAULT_FD_STEP, DEFAULT_LAPLACE_STEP, DEFAULT_OUTER_STEP, central_difference, partials

logger = logging.getLogger(__name__)

Box = Tuple[np.ndarray, np.ndarray]


class Immersion:
    """
    Base class for parametrized hypersurfaces.
    Subclasses implement point(u); jacobian, hessian and third fall back to central
    differences of step fd_step when no closed form is provided.
    """
    name: str = "immersion"

    def __init__(self, ambient: AmbientSpace, param_dim: int, box: Box, orientation: int = 1,
                 fd_step: float = DEFAULT_FD_STEP, label: Optional[str] = None):
        self.ambient = ambient
        self.param_dim = param_dim
        self.box = (np.asarray(box[0], dtype=float), np.asarray(box[1], dtype=float))
        self.orientation = 1 if orientation >= 0 else -1
        self.fd_step = fd_step
        if label:
            self.name = label

    def point(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError("Each immersion must implement point evaluation.")

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        """J[:, i] = d_i x."""
        return partials(self.point, u, self.fd_step).T

    def hessian(self, u: np.ndarray) -> np.ndarray:
        """D2[:, i, j] = d_i d_j x."""
        return np.moveaxis(partials(self.jacobian, u, self.fd_step), 0, -1)

    def third(self, u: np.ndarray) -> np.ndarray:
        """D3[:, i, j, k] = d_i d_j d_k x."""
        return np.moveaxis(partials(self.hessian, u, self.fd_step), 0, -1)

    def normal_hint(self, u: np.ndarray) -> Optional[np.ndarray]:
        """An ambient vector with <eta, hint> > 0, or None for the determinant rule."""
        return None

    def contains(self, u: np.ndarray) -> bool:
        u = np.asarray(u, dtype=float)
        return bool(np.all(u > self.box[0]) and np.all(u < self.box[1]))

    @property
    def sample_box(self) -> Box:
        """Middle half of the chart box; samples and geodesic starts are drawn here."""
        lo, hi = self.box
        mid, half = 0.5 * (lo + hi), 0.25 * (hi - lo)
        return mid - half, mid + half

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lo, hi = self.sample_box
        return rng.uniform(lo, hi, size=(count, self.param_dim))

    def require(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.param_dim,):
            raise DomainError(f"{self.name} takes {self.param_dim} parameters, got {u.shape}")
        if not self.contains(u):
            raise DomainError(f"{u} lies outside the chart of {self.name}")
        return u

    def metric(self, u: np.ndarray) -> np.ndarray:
        J = self.jacobian(u)
        return J.T @ self.ambient.metric(self.point(u)) @ J


@dataclass
class SecondFundamentalData:
    u: np.ndarray
    point: np.ndarray
    jacobian: np.ndarray
    g: np.ndarray
    eta: np.ndarray
    II: np.ndarray
    S: np.ndarray
    principal: Tuple[float, ...]
    directions: np.ndarray
    H: float
    S_norm2: float
    K_e: Optional[float] = None

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.principal).max()) if self.principal else 0.0


def _unit_normal(imm: Immersion, u: np.ndarray, p: np.ndarray, J: np.ndarray) -> np.ndarray:
    space = imm.ambient
    G = space.metric(p)
    constraints = J.T @ G
    sphere = isinstance(space, SpaceFormN) and space.is_sphere
    if sphere:
        constraints = np.vstack([constraints, p])
    _, sigma, vt = np.linalg.svd(constraints)
    eta = vt[-1]
    eta = eta / np.sqrt(eta @ G @ eta)
    hint = imm.normal_hint(u)
    if hint is not None:
        sign = np.sign(eta @ G @ np.asarray(hint, dtype=float))
    else:
        columns = [p] if sphere else []
        sign = np.sign(np.linalg.det(np.column_stack(columns + [J[:, i] for i in range(J.shape[1])] + [eta])))
    return (sign if sign != 0 else 1.0) * imm.orientation * eta


def first_fundamental(imm: Immersion, u: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Induced metric g and oriented unit normal eta at u."""
    u = imm.require(u)
    p = imm.point(u)
    J = imm.jacobian(u)
    g = J.T @ imm.ambient.metric(p) @ J
    eigenvalues = np.linalg.eigvalsh(g)
    if eigenvalues[0] <= 1e-12 * max(1.0, eigenvalues[-1]):
        raise DegenerateImmersionError(f"{imm.name}: singular first fundamental form at u = {u}")
    return g, _unit_normal(imm, u, p, J)


def second_fundamental_form(imm: Immersion, u: np.ndarray, eta: Optional[np.ndarray] = None) -> np.ndarray:
    """II_ij = <d_i d_j x + Gamma(d_i x, d_j x), eta>."""
    space = imm.ambient
    p = imm.point(u)
    J = imm.jacobian(u)
    if eta is None:
        eta = _unit_normal(imm, u, p, J)
    acc = imm.hessian(u) + np.einsum('kab,ai,bj->kij', space.christoffels(p), J, J)
    II = np.einsum('kij,kl,l->ij', acc, space.metric(p), eta)
    return 0.5 * (II + II.T)


def shape_operator(imm: Immersion, u: Sequence[float]) -> SecondFundamentalData:
    """
    S = g^-1 II with principal curvatures ordered by descending absolute value;
    H = trace(S)/(n - 1) where n - 1 is the hypersurface dimension.
    """
    g, eta = first_fundamental(imm, u)
    u = np.asarray(u, dtype=float)
    II = second_fundamental_form(imm, u, eta)
    S = np.linalg.solve(g, II)
    L = np.linalg.cholesky(g)
    Linv = np.linalg.inv(L)
    values, vectors = np.linalg.eigh(Linv @ II @ Linv.T)
    order = sorted(range(len(values)), key=lambda i: (-abs(values[i]), -values[i]))
    values = values[order]
    directions = Linv.T @ vectors[:, order]
    m = imm.param_dim
    return SecondFundamentalData(
        u=u, point=imm.point(u), jacobian=imm.jacobian(u), g=g, eta=eta, II=II, S=S,
        principal=tuple(float(v) for v in values), directions=directions,
        H=float(np.trace(S)) / m, S_norm2=float(np.sum(values ** 2)),
        K_e=float(np.prod(values)) if m == 2 else None,
    )


def weingarten_residual(imm: Immersion, u: Sequence[float], h: float = DEFAULT_OUTER_STEP) -> float:
    """max_ij |<nabla_{d_i} eta, d_j x> + II_ij|."""
    u = imm.require(u)
    space = imm.ambient
    p = imm.point(u)
    J = imm.jacobian(u)
    G = space.metric(p)
    eta = first_fundamental(imm, u)[1]
    II = second_fundamental_form(imm, u, eta)
    gamma = space.christoffels(p)
    eye = np.eye(imm.param_dim)
    worst = 0.0
    for i in range(imm.param_dim):
        d_eta = central_difference(lambda v: first_fundamental(imm, v)[1], u, eye[i], h, True)
        nabla = d_eta + np.einsum('kab,a,b->k', gamma, J[:, i], eta)
        for j in range(imm.param_dim):
            worst = max(worst, abs(nabla @ G @ J[:, j] + II[i, j]))
    return float(worst)


def laplace_beltrami(imm: Immersion, f: Callable[[np.ndarray], float], u: Sequence[float],
                     h: float = DEFAULT_LAPLACE_STEP) -> float:
    """Delta f = -(1/sqrt g) d_i (sqrt g g^ij d_j f), the geometer's sign."""
    u = imm.require(u)
    m = imm.param_dim
    eye = np.eye(m)
    for i in range(m):
        if not (imm.contains(u + 2 * h * eye[i]) and imm.contains(u - 2 * h * eye[i])):
            raise StencilError(f"Laplace stencil of step {h} leaves the chart of {imm.name} at {u}")

    def flux(v):
        g = imm.metric(v)
        grad = np.array([float(central_difference(lambda w: np.array(f(w)), v, eye[j], h)) for j in range(m)])
        return np.sqrt(np.linalg.det(g)) * np.linalg.solve(g, grad)

    divergence = sum(float(central_difference(flux, u, eye[i], h)[i]) for i in range(m))
    return -divergence / np.sqrt(np.linalg.det(imm.metric(u)))


def gradient(imm: Immersion, f: Callable[[np.ndarray], float], u: np.ndarray,
             h: float = DEFAULT_LAPLACE_STEP) -> np.ndarray:
    """grad_g f in chart components."""
    eye = np.eye(imm.param_dim)
    df = np.array([float(central_difference(lambda w: np.array(f(w)), u, eye[i], h)) for i in range(imm.param_dim)])
    return np.linalg.solve(imm.metric(u), df)
