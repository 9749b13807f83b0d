"""figmod: exact computations with truncated FI_G-modules over prime fields and the rationals."""

from __future__ import annotations

__version__ = "0.1.0"

from .category import FIGMorphism, FiniteGroup, WreathElement, compose, enumerate_hom, hom_count
from .degree import GradedDegree, GradedDims
from .errors import (
    FigmodError,
    ParseError,
    TruncationInsufficient,
    TruncationTooSmall,
    ValidationError,
)
from .functors import depth, derivative, derived_derivative, shift
from .homology import homology_report, resolution, torsion_submodule
from .linalg import PrimeField, RationalField
from .local_cohomology import fi_ext_oracle, local_cohomology
from .module import Presentation, TruncatedModule, free_module, free_relative, realize_presentation
from .nagpal import build_complex, stabilization_index

__all__ = [
    "FIGMorphism",
    "FiniteGroup",
    "FigmodError",
    "GradedDegree",
    "GradedDims",
    "ParseError",
    "Presentation",
    "PrimeField",
    "RationalField",
    "TruncatedModule",
    "TruncationInsufficient",
    "TruncationTooSmall",
    "ValidationError",
    "WreathElement",
    "build_complex",
    "compose",
    "depth",
    "derivative",
    "derived_derivative",
    "enumerate_hom",
    "fi_ext_oracle",
    "free_module",
    "free_relative",
    "hom_count",
    "homology_report",
    "local_cohomology",
    "realize_presentation",
    "resolution",
    "shift",
    "stabilization_index",
    "torsion_submodule",
]
