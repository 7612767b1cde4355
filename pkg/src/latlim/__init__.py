"""Exact, seeded checks for lattice maps, direct systems and their limits."""

from .errors import LatlimError
from .ratcore import rat
from .report import Report, Verdict
from .seqlat import EPSeq, SpaceTag
from .latmaps import (
    MatrixMap,
    SequenceMap,
    check_duality,
    is_almost_interval_preserving,
    is_interval_preserving,
    is_lattice_hom,
    is_positive,
)
from .dirlimit import ColimitElement, DirectSystem, averaging_system, validate_system
from .ordercont import EXAMPLE_IDS, build_example, example_53_lower_bound

__all__ = [
    "LatlimError", "rat", "Report", "Verdict", "EPSeq", "SpaceTag", "MatrixMap", "SequenceMap",
    "check_duality", "is_almost_interval_preserving", "is_interval_preserving", "is_lattice_hom",
    "is_positive", "ColimitElement", "DirectSystem", "averaging_system", "validate_system",
    "EXAMPLE_IDS", "build_example", "example_53_lower_bound",
]
