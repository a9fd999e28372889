"""
Catalog selectors: 'family:args' names resolved to CatalogCase instances.
"""
import logging
from typing import Callable, Dict, List, Tuple

from utils.exceptions import GeometryError, UnknownCaseError

from . import cases
from .cases import CatalogCase

logger = logging.getLogger(__name__)

# cases run by `verify all`, in report order
STANDARD_CASES = [
    "clifford-torus:1,1",
    "clifford-torus:1,2",
    "clifford-geodesic:a=0.6",
    "small-hypersphere:n=3",
    "small-hypersphere:n=4",
    "equator:n=3",
    "tb-cylinder:rho=4",
    "tb-cylinder:rho=4,sign=+",
    "hopf:a=1,b=0,r=2",
    "hopf:a=1,b=1,r=1",
    "round-cylinder:r=1",
]


def _split_args(args: str) -> Tuple[List[str], Dict[str, str]]:
    positional, named = [], {}
    for part in filter(None, (piece.strip() for piece in args.split(","))):
        if "=" in part:
            key, value = part.split("=", 1)
            named[key.strip()] = value.strip()
        else:
            positional.append(part)
    return positional, named


def _clifford_torus(positional, named) -> CatalogCase:
    p, q = (int(v) for v in positional) if positional else (int(named["p"]), int(named["q"]))
    return cases.clifford_torus(p, q)


def _clifford_geodesic(positional, named) -> CatalogCase:
    a_const = float(named["a"])
    b_const = float(named["b"]) if "b" in named else cases.default_partner(a_const)
    return cases.clifford_geodesic(a_const, b_const)


FAMILIES: Dict[str, Callable[[List[str], Dict[str, str]], CatalogCase]] = {
    "clifford-torus": _clifford_torus,
    "clifford-geodesic": _clifford_geodesic,
    "small-hypersphere": lambda positional, named: cases.small_hypersphere(int(named["n"])),
    "equator": lambda positional, named: cases.equator(int(named["n"])),
    "tb-cylinder": lambda positional, named: cases.tb_cylinder(float(named["rho"]), named.get("sign", "-")),
    "hopf": lambda positional, named: cases.hopf_cylinder(float(named["a"]), float(named["b"]),
                                                           float(named["r"])),
    "round-cylinder": lambda positional, named: cases.round_cylinder_r3(float(named["r"])),
}


def resolve(selector: str) -> CatalogCase:
    """Build the case named by `selector`; unknown families and malformed arguments raise UnknownCaseError."""
    family, _, args = selector.strip().partition(":")
    builder = FAMILIES.get(family)
    if builder is None:
        raise UnknownCaseError(f"Unknown catalog family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    positional, named = _split_args(args)
    try:
        case = builder(positional, named)
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, GeometryError):
            raise
        raise UnknownCaseError(f"Malformed arguments for {family!r}: {args!r} ({exc})") from exc
    case.selector = selector.strip()
    return case


def resolve_many(selector: str) -> List[CatalogCase]:
    if selector.strip() == "all":
        return [resolve(name) for name in STANDARD_CASES]
    return [resolve(selector)]
