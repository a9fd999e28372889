"""
Radii of helices that can be geodesics of a totally biharmonic Hopf cylinder:
c4 r^4 + c2 r^2 + c0 = 0 with
c4 = a(2a(1 - mu b) + b^2), c2 = b^2 - 12a, c0 = 2(1 + mu b).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from spaces.ambients import BCVType, classify_bcv
from utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

COEFFICIENT_FLOOR = 1e-14


@dataclass(frozen=True)
class QuarticRoots:
    a: float
    b: float
    mu: float
    c4: float
    c2: float
    c0: float
    roots: Tuple[float, ...] = ()
    rejected: Tuple[Tuple[float, str], ...] = ()
    degenerate: bool = False

    @property
    def r2_minus(self):
        return self.roots[0] if self.roots else None

    @property
    def r2_plus(self):
        return self.roots[-1] if self.roots else None


def _real_roots(c4: float, c2: float, c0: float) -> Tuple[List[float], bool]:
    if abs(c4) <= COEFFICIENT_FLOOR:
        if abs(c2) <= COEFFICIENT_FLOOR:
            return [], True
        return [-c0 / c2], True
    disc = c2 * c2 - 4.0 * c4 * c0
    if disc < 0:
        return [], False
    # cancellation-free pair
    q = -0.5 * (c2 + math.copysign(math.sqrt(disc), c2))
    if q == 0:
        return [0.0], False
    return sorted({q / c4, c0 / q}), False


def tb_radius_quartic(a: float, b: float, mu: float) -> QuarticRoots:
    c4 = a * (2.0 * a * (1.0 - mu * b) + b * b)
    c2 = b * b - 12.0 * a
    c0 = 2.0 * (1.0 + mu * b)
    candidates, degenerate = _real_roots(c4, c2, c0)
    if degenerate:
        logger.debug(f"quartic for (a={a}, b={b}, mu={mu}) has c4 = 0; solved the reduced equation")
    roots, rejected = [], []
    for value in candidates:
        if value <= 0:
            rejected.append((value, "r^2 <= 0"))
        elif 1.0 + a * value <= 0:
            rejected.append((value, "1 + a r^2 <= 0"))
        else:
            roots.append(value)
    return QuarticRoots(a, b, mu, c4, c2, c0, tuple(roots), tuple(rejected), degenerate)


def tb_radii(a: float) -> Tuple[float, float]:
    """{(3 - 2 sqrt 2)/a, (3 + 2 sqrt 2)/a}, the b = 0 roots."""
    if a <= 0:
        raise ParameterError(f"totally biharmonic radii need a > 0, got {a}")
    return (math.sqrt(2.0) - 1.0) ** 2 / a, (math.sqrt(2.0) + 1.0) ** 2 / a


@dataclass
class QuarticScan:
    a: float
    b: float
    rows: List[QuarticRoots] = field(default_factory=list)
    mu_independent: bool = False


def scan_quartic(a: float, b: float, mus: Sequence[float], tol: float = 1e-9) -> QuarticScan:
    """Roots over a mu grid; mu-independent when every admissible root set agrees within tol."""
    if len(mus) == 0:
        raise ParameterError("the mu grid is empty")
    if classify_bcv(a, b) is BCVType.SPACE_FORM:
        raise ParameterError(f"N({a}, {b}) is a space form (4a = b^2); the scan does not apply")
    scan = QuarticScan(a, b, [tb_radius_quartic(a, b, mu) for mu in mus])
    first = scan.rows[0].roots
    scan.mu_independent = all(
        len(row.roots) == len(first) and all(abs(x - y) <= tol * max(1.0, abs(y)) for x, y in zip(row.roots, first))
        for row in scan.rows
    )
    logger.info(f"quartic scan a={a} b={b} over {len(mus)} values of mu: "
                f"{'mu-independent' if scan.mu_independent else 'mu-dependent'}")
    return scan
