"""
Finite differences, Richardson extrapolation and a fixed-step RK4 integrator.
Every tensor path of the package goes through these helpers so that the
closed-form tables can serve as independent oracles.
"""
import logging
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_FD_STEP = 1e-4
DEFAULT_OUTER_STEP = 1e-3
DEFAULT_CURVE_STEP = 1e-2
DEFAULT_LAPLACE_STEP = 1e-2


def central_difference(fn: Callable, x: np.ndarray, direction: np.ndarray, h: float,
                       richardson: bool = False) -> np.ndarray:
    """Directional derivative of fn at x along direction (second order, optional Richardson)."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)

    def _d(step):
        return (np.asarray(fn(x + step * d)) - np.asarray(fn(x - step * d))) / (2.0 * step)

    if not richardson:
        return _d(h)
    return (4.0 * _d(h / 2.0) - _d(h)) / 3.0


def second_difference(fn: Callable, x: np.ndarray, direction: np.ndarray, h: float,
                      richardson: bool = False) -> np.ndarray:
    """Second directional derivative of fn at x along direction."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    f0 = np.asarray(fn(x))

    def _d2(step):
        return (np.asarray(fn(x + step * d)) - 2.0 * f0 + np.asarray(fn(x - step * d))) / (step * step)

    if not richardson:
        return _d2(h)
    return (4.0 * _d2(h / 2.0) - _d2(h)) / 3.0


def partials(fn: Callable, x: np.ndarray, h: float, richardson: bool = False) -> np.ndarray:
    """Stack of coordinate partial derivatives; result[i] = d fn / d x_i."""
    x = np.asarray(x, dtype=float)
    eye = np.eye(x.size)
    return np.stack([central_difference(fn, x, eye[i], h, richardson) for i in range(x.size)])


def scalar_derivative(fn: Callable[[float], float], s: float, h: float,
                      richardson: bool = False) -> float:
    """Derivative of a scalar function of one real variable."""
    return float(central_difference(lambda v: fn(float(v[0])), np.array([s]), np.array([1.0]), h,
                                    richardson))


def christoffel_from_metric(metric_fn: Callable, x: np.ndarray, h: float,
                            richardson: bool = False) -> np.ndarray:
    """
    Levi-Civita symbols Gamma[k, i, j] of the metric field metric_fn at x.
    Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
    """
    g = np.asarray(metric_fn(x))
    dg = partials(metric_fn, x, h, richardson)  # dg[l, i, j] = d_l g_ij
    ginv = np.linalg.inv(g)
    # lowered[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    lowered = np.einsum('ijl->lij', dg) + np.einsum('jil->lij', dg) - dg
    gamma = 0.5 * np.einsum('kl,lij->kij', ginv, lowered)
    return 0.5 * (gamma + np.swapaxes(gamma, 1, 2))


def rk4_step(rhs: Callable[[np.ndarray], np.ndarray], state: np.ndarray, h: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of an autonomous system."""
    k1 = rhs(state) * h
    k2 = rhs(state + 0.5 * k1) * h
    k3 = rhs(state + 0.5 * k2) * h
    k4 = rhs(state + k3) * h
    return state + (k1 + 2.0 * (k2 + k3) + k4) / 6.0


def gram_schmidt(vectors: list[np.ndarray], inner: Callable, floor: float = 1e-12) -> list[np.ndarray]:
    """Orthonormalize vectors under the given inner product, dropping dependent ones."""
    basis: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for e in basis:
            w = w - inner(w, e) * e
        norm = np.sqrt(max(inner(w, w), 0.0))
        if norm > floor:
            basis.append(w / norm)
    return basis
