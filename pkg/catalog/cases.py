"""
Catalog of closed-form examples with their expected verdicts.
Sphere ambients are normalized to rho = 1; Hopf cylinders are preimages of Euclidean
circles of radius r about the origin of the BCV chart.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from curves.base import AnalyticCurve, Curve
from helices.quartic import tb_radii
from hypersurfaces.immersion import Immersion
from spaces.ambients import AmbientSpace, BCVSpace, SpaceFormN
from utils.exceptions import ParameterError

from .immersions import CliffordTorus, Equator, HopfCylinder, SmallSphere, format_param

logger = logging.getLogger(__name__)

RADIUS_MATCH = 1e-9


@dataclass(frozen=True)
class Expected:
    """What a correct implementation must report for a case."""
    tb: bool
    biharmonic: Optional[bool] = None
    totally_geodesic: bool = False
    principal: Optional[Tuple[float, ...]] = None
    mean_curvature: Optional[float] = None
    isoparametric: bool = True
    kappa_g: Optional[float] = None
    K_e: Optional[float] = None


@dataclass
class CatalogCase:
    name: str
    ambient: AmbientSpace
    expected: Expected
    immersion: Optional[Immersion] = None
    curve: Optional[Curve] = None
    provenance: Dict[str, str] = field(default_factory=dict)
    params: Dict[str, float] = field(default_factory=dict)
    # selector the case was resolved from; set by the registry
    selector: Optional[str] = None

    @property
    def is_curve_case(self) -> bool:
        return self.curve is not None

    @property
    def negative_control(self) -> bool:
        return not self.expected.tb


def _ordered(values: Sequence[float]) -> Tuple[float, ...]:
    return tuple(sorted((float(v) for v in values), key=lambda v: (-abs(v), -v)))


def default_partner(a_const: float) -> float:
    """The b >= 0 completing a^2 + b^2 = 1."""
    return math.sqrt(max(1.0 - a_const * a_const, 0.0))


def clifford_torus(p: int, q: int) -> CatalogCase:
    imm = CliffordTorus(p, q)
    return CatalogCase(
        name=imm.name, ambient=imm.ambient, immersion=imm,
        expected=Expected(tb=True, biharmonic=True, principal=_ordered([1.0] * p + [-1.0] * q),
                          mean_curvature=(p - q) / (p + q)),
        provenance={"radii": "1/sqrt(2), 1/sqrt(2)", "ambient": f"S^{p + q + 1}(1)",
                    "normal": "(-y1, y2)/sqrt(2)"},
        params={"p": p, "q": q},
    )


def clifford_geodesic(a_const: float, b_const: float, vectors: Optional[Sequence[Sequence[float]]] = None,
                      p: int = 1, q: int = 1) -> CatalogCase:
    """
    gamma(s) = cos(sqrt2 a s) v1 + sin(sqrt2 a s) v2 + cos(sqrt2 b s) v3 + sin(sqrt2 b s) v4,
    a geodesic of the Clifford torus S^p x S^q, hence a biharmonic curve of the sphere.
    v1, v2 span a plane of the first factor, v3, v4 one of the second, all of length 1/sqrt 2.
    """
    if abs(a_const ** 2 + b_const ** 2 - 1.0) > 1e-12:
        raise ParameterError(f"a^2 + b^2 must be 1, got {a_const ** 2 + b_const ** 2}")
    dim = p + q + 2
    if vectors is None:
        eye = np.eye(dim) / math.sqrt(2.0)
        vectors = [eye[0], eye[1], eye[p + 1], eye[p + 2]]
    V = np.array(vectors, dtype=float)
    if V.shape != (4, dim):
        raise ParameterError(f"need four vectors in R^{dim}, got shape {V.shape}")
    if not np.allclose(V @ V.T, 0.5 * np.eye(4), atol=1e-12):
        raise ParameterError("v1..v4 must be mutually orthogonal of length 1/sqrt(2)")
    if np.abs(V[:2, p + 1:]).max() > 1e-12 or np.abs(V[2:, :p + 1]).max() > 1e-12:
        raise ParameterError("v1, v2 must lie in the first factor and v3, v4 in the second")
    wa, wb = math.sqrt(2.0) * a_const, math.sqrt(2.0) * b_const

    def derivative(s: float, k: int) -> np.ndarray:
        shift = k * math.pi / 2
        return (wa ** k * (math.cos(wa * s + shift) * V[0] + math.sin(wa * s + shift) * V[1])
                + wb ** k * (math.cos(wb * s + shift) * V[2] + math.sin(wb * s + shift) * V[3]))

    space = SpaceFormN(p + q + 1, 1.0)
    label = f"clifford-geodesic:a={format_param(a_const)}"
    if b_const != default_partner(a_const):
        label += f",b={format_param(b_const)}"
    curve = AnalyticCurve(space, derivative, label=label)
    return CatalogCase(name=label, ambient=space, curve=curve, expected=Expected(tb=True, biharmonic=True),
                       provenance={"torus": f"clifford-torus:{p},{q}", "b": f"{b_const:g}"},
                       params={"a": a_const, "b": b_const})


def small_hypersphere(n: int) -> CatalogCase:
    imm = SmallSphere(n)
    return CatalogCase(
        name=imm.name, ambient=imm.ambient, immersion=imm,
        expected=Expected(tb=True, biharmonic=True, principal=(1.0,) * (n - 1), mean_curvature=1.0),
        provenance={"radius": "1/sqrt(2)", "ambient": f"S^{n}(1)"},
        params={"n": n},
    )


def equator(n: int) -> CatalogCase:
    imm = Equator(n)
    return CatalogCase(
        name=imm.name, ambient=imm.ambient, immersion=imm,
        expected=Expected(tb=True, biharmonic=True, totally_geodesic=True, principal=(0.0,) * (n - 1),
                          mean_curvature=0.0),
        provenance={"ambient": f"S^{n}(1)"},
        params={"n": n},
    )


def _hopf_expectations(a: float, b: float, r: float) -> Expected:
    kappa = (1.0 - a * r * r) / r
    disc = math.sqrt(kappa * kappa + b * b) / 2
    principal = _ordered([kappa / 2 + disc, kappa / 2 - disc])
    geodesic_base = abs(kappa) < RADIUS_MATCH
    tb = False
    if b == 0 and a > 0:
        tb = geodesic_base or any(abs(r * r - root) <= RADIUS_MATCH * root for root in tb_radii(a))
    biharmonic = geodesic_base or abs(kappa * kappa - (4 * a - b * b)) < RADIUS_MATCH * max(1.0, 4 * abs(a))
    return Expected(tb=tb, biharmonic=biharmonic, totally_geodesic=geodesic_base and b == 0,
                    principal=principal, mean_curvature=kappa / 2, kappa_g=abs(kappa), K_e=-b * b / 4)


def hopf_cylinder(a: float, b: float, r: float) -> CatalogCase:
    space = BCVSpace(a, b)
    if space.is_space_form and b != 0:
        raise ParameterError(f"N({a}, {b}) is a round sphere; use the sphere catalog")
    imm = HopfCylinder(space, r)
    return CatalogCase(name=imm.name, ambient=space, immersion=imm, expected=_hopf_expectations(a, b, r),
                       provenance={"r": "Euclidean radius of the base circle in the chart",
                                   "normal": "radially inward"},
                       params={"a": a, "b": b, "r": r})


def tb_cylinder(rho: float, sign: str = "-") -> CatalogCase:
    """The totally biharmonic Hopf cylinders of N(rho/4, 0): r^2 = (3 -+ 2 sqrt 2) 4/rho."""
    if sign not in ("-", "+"):
        raise ParameterError(f"sign must be '-' or '+', got {sign!r}")
    a = rho / 4.0
    minus, plus = tb_radii(a)
    r = math.sqrt(minus if sign == "-" else plus)
    space = BCVSpace(a, 0.0)
    imm = HopfCylinder(space, r, label=f"tb-cylinder:rho={format_param(rho)}" + (",sign=+" if sign == "+" else ""))
    return CatalogCase(name=imm.name, ambient=space, immersion=imm, expected=_hopf_expectations(a, 0.0, r),
                       provenance={"r^2": f"(3 {sign} 2 sqrt 2)/a", "a": f"{a:g}"},
                       params={"a": a, "b": 0.0, "r": r})


def round_cylinder_r3(r: float) -> CatalogCase:
    """Negative control: the round cylinder of Euclidean 3-space, not biharmonic."""
    space = BCVSpace(0.0, 0.0)
    imm = HopfCylinder(space, r, label=f"round-cylinder:r={format_param(r)}")
    return CatalogCase(name=imm.name, ambient=space, immersion=imm, expected=_hopf_expectations(0.0, 0.0, r),
                       provenance={"ambient": "E^3 = N(0, 0)"},
                       params={"a": 0.0, "b": 0.0, "r": r})
