"""
Tensor-level operations on ambient spaces: metric, frame, connection,
curvature, Ricci and Killing fields.
"""
import logging
from typing import Callable, List, Tuple

import numpy as np

from utils.exceptions import DegeneratePlaneError
from utils.numerics import partials

from .ambients import AmbientSpace, BCVSpace, BCVType, FrameTriple, TangentVector, as_coords, classify_bcv
from .ambients.base import PointLike, VectorLike

logger = logging.getLogger(__name__)


def bcv_metric_at(space: BCVSpace, p: PointLike) -> np.ndarray:
    """Gram matrix of h_{a,b} in (x, y, z)."""
    return space.metric(p)


def bcv_frame_at(space: BCVSpace, p: PointLike) -> FrameTriple:
    """E1 = lambda_a d_x - (b y/2) d_z, E2 = lambda_a d_y + (b x/2) d_z, E3 = d_z."""
    return space.frame(p)


def bcv_connection_frame(space: BCVSpace, p: PointLike, i: int, j: int) -> TangentVector:
    """nabla_{E_i} E_j from the closed-form table, in chart components (i, j in 1..3)."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError(f"frame indices must be in 1..3, got ({i}, {j})")
    coords = space.check_point(p)
    coeffs = space.connection_table(coords)[i - 1, j - 1]
    return TangentVector.at(coords, space.frame_matrix(coords) @ coeffs)


def christoffels_at(space: AmbientSpace, p: PointLike) -> np.ndarray:
    """Gamma[k, i, j]; symmetric in (i, j)."""
    return space.christoffels(p)


def curvature_at(space: AmbientSpace, p: PointLike, X: VectorLike, Y: VectorLike,
                 Z: VectorLike) -> TangentVector:
    coords = space.check_point(p)
    return TangentVector.at(coords, space.curvature(coords, X, Y, Z))


def curvature_form(space: AmbientSpace, p: PointLike, X, Y, Z, W) -> float:
    """<R(X, Y)Z, W>."""
    return space.inner(p, space.curvature(p, X, Y, Z), W)


def ricci_tensor(space: AmbientSpace, p: PointLike) -> np.ndarray:
    """
    Ric[j, k] in ambient coordinates, Ric(X, Y) = sum_a <R(E_a, X)Y, E_a> over an orthonormal basis.
    The trace runs over the tangent space only, so embedded sphere models are handled correctly.
    """
    G = space.metric(p)
    basis = np.array(space.orthonormal_basis(p))
    # Q[l, i] = sum_a (G e_a)_l e_a^i
    Q = np.einsum('lm,am,ai->li', G, basis, basis)
    return np.einsum('lijk,li->jk', space.riemann(p), Q)


def ricci(space: AmbientSpace, p: PointLike, X: VectorLike, Y: VectorLike) -> float:
    """Ric(X, Y) = sum_a <R(E_a, X)Y, E_a> over an orthonormal basis."""
    return float(as_coords(X) @ ricci_tensor(space, p) @ as_coords(Y))


def ricci_vector(space: AmbientSpace, p: PointLike, X: VectorLike) -> np.ndarray:
    """The vector V with <V, W> = Ric(X, W) for all tangent W."""
    row = as_coords(X) @ ricci_tensor(space, p)
    return sum((row @ e) * e for e in space.orthonormal_basis(p))


def sectional_and_ricci(space: AmbientSpace, p: PointLike, X: VectorLike,
                        Y: VectorLike) -> Tuple[float, float, TangentVector]:
    """(K(X, Y), Ric(X, Y), Ric(X)^sharp)."""
    coords = space.check_point(p)
    xx, yy, xy = space.inner(coords, X, X), space.inner(coords, Y, Y), space.inner(coords, X, Y)
    area2 = xx * yy - xy * xy
    if area2 <= 1e-14 * max(xx * yy, 1e-300):
        raise DegeneratePlaneError("X and Y are parallel")
    K = curvature_form(space, coords, X, Y, Y, X) / area2
    return K, ricci(space, coords, X, Y), TangentVector.at(coords, ricci_vector(space, coords, X))


def sectional(space: AmbientSpace, p: PointLike, X: VectorLike, Y: VectorLike) -> float:
    return sectional_and_ricci(space, p, X, Y)[0]


def riemann_frame_components(space: AmbientSpace, p: PointLike) -> np.ndarray:
    """T[i, j, k, l] = <R(E_i, E_j)E_k, E_l> in the ambient orthonormal basis (so R_1212 = T[0, 1, 1, 0])."""
    basis = space.orthonormal_basis(p)
    n = len(basis)
    table = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                Rijk = space.curvature(p, basis[i], basis[j], basis[k])
                for l in range(n):
                    table[i, j, k, l] = space.inner(p, Rijk, basis[l])
    return table


def ricci_frame_matrix(space: AmbientSpace, p: PointLike) -> np.ndarray:
    basis = np.array(space.orthonormal_basis(p))
    return basis @ ricci_tensor(space, p) @ basis.T


def killing_basis(space: BCVSpace, p: PointLike) -> List[TangentVector]:
    """X1..X4 evaluated at p."""
    space.require_non_space_form()
    coords = space.check_point(p)
    return [TangentVector.at(coords, space.killing_field(i)(coords)) for i in range(1, 5)]


def lie_derivative_metric(space: AmbientSpace, field: Callable[[np.ndarray], np.ndarray],
                          p: PointLike) -> np.ndarray:
    """
    (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k,
    i.e. the derivative at t = 0 of the pullback of g under the flow of X.
    """
    coords = space.check_point(p)
    g = space.metric(coords)
    X = np.asarray(field(coords))
    dg = partials(space.metric, coords, space.fd_step, space.richardson)   # dg[k, i, j]
    dX = partials(field, coords, space.fd_step, space.richardson)          # dX[i, k] = d_i X^k
    return np.einsum('k,kij->ij', X, dg) + np.einsum('kj,ik->ij', g, dX) + np.einsum('ik,jk->ij', g, dX)


__all__ = [
    "bcv_metric_at", "bcv_frame_at", "bcv_connection_frame", "christoffels_at", "curvature_at",
    "curvature_form", "ricci_tensor", "ricci", "ricci_vector", "sectional_and_ricci", "sectional",
    "riemann_frame_components", "ricci_frame_matrix", "killing_basis", "lie_derivative_metric",
    "classify_bcv", "BCVType",
]
