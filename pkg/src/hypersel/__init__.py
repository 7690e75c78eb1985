"""hypersel: exact checking of extreme hyperspace selections on ordinal amalgam spaces."""

from hypersel.ordinal import Ordinal, OMEGA, ZERO, parse_ordinal
from hypersel.space import Space, Point, Region, closed_set, open_set

__all__ = [
    "Ordinal",
    "OMEGA",
    "ZERO",
    "parse_ordinal",
    "Space",
    "Point",
    "Region",
    "closed_set",
    "open_set",
]
