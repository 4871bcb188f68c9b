"""Effective secular equation resummation and exceptional-point location."""

__version__ = "0.1.0"

from .exactnum import Polynomial, TruncatedSeries, parse_rational, poly_resultant
from .models import BandedOperator, ModelKind, ModelSpec, build_generic, build_mathieu
from .rspt import EigenSeries, minimal_dim, rs_series
from .ese import EsePolynomial, TruncationMode, build_ese, ese_discriminant, ese_roots_in_W
from .roots import RootSet, find_roots, smallest_modulus_roots
from .eplocate import ExceptionalPointEstimate, ep_table, estimate_radius, locate_ep, oracle_eigenvalues

__all__ = [
    "BandedOperator",
    "EigenSeries",
    "EsePolynomial",
    "ExceptionalPointEstimate",
    "ModelKind",
    "ModelSpec",
    "Polynomial",
    "RootSet",
    "TruncatedSeries",
    "TruncationMode",
    "build_ese",
    "build_generic",
    "build_mathieu",
    "ep_table",
    "ese_discriminant",
    "ese_roots_in_W",
    "estimate_radius",
    "find_roots",
    "locate_ep",
    "minimal_dim",
    "oracle_eigenvalues",
    "parse_rational",
    "poly_resultant",
    "rs_series",
    "smallest_modulus_roots",
]
