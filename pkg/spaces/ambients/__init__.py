from .base import AmbientSpace, Point, TangentVector, FrameTriple, as_coords
from .bcv import BCVSpace, BCVType, classify_bcv
from .space_form import SpaceFormN

__all__ = [
    "AmbientSpace", "Point", "TangentVector", "FrameTriple", "as_coords",
    "BCVSpace", "BCVType", "classify_bcv", "SpaceFormN",
]
