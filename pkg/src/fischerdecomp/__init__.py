"""Exact harmonic (Fischer) decomposition of polynomials in k vector variables of R^m,
with the invariant operators of the dual pair (O(m), sp(2k))."""

from .errors import AmbientMismatch, FischerError, ParseError, ResourceCapExceeded
from .fischer import (
    DirectnessReport,
    ExponentMatrix,
    FischerComponent,
    directness_report,
    fischer_decompose,
    fischer_ip,
    harmonic_split,
)
from .harmonics import harmonic_basis, isotypic_dimension_check, simplicial_basis
from .ratpoly import Polynomial, VarIndex, parse, render
from .repcomb import gl_dim, is_admissible, kostka, shift, transpose
from .verma import check_partition, check_weight, collapse_detect, semistable, verma_graded_dim
from .weyl import WeylElement, commutator, compose, euler, laplacian, rsquared, span_membership

__version__ = "0.1.0"
