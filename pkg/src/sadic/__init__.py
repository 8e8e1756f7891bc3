"""Exact-arithmetic toolkit for substitution and S-adic subshifts."""

from .words import Alphabet, Morphism, Word, parse_morphism, format_morphism
from .directive import DirectiveSequence, parse_directive_file, format_directive_file
from .exactalg import QuadNumber, PolyZ, parse_quad
from .language import factors, extension_graph, connected_components, return_words
from .coboundary import coboundary_space, is_trivial_space, stable_coboundaries
from .measures import letter_frequencies, base_measures, itau_module
from .spectra import certify_eigenvalue, verify_certificate, host_diagnostic, parse_alpha

__all__ = [
    "Alphabet",
    "Morphism",
    "Word",
    "DirectiveSequence",
    "QuadNumber",
    "PolyZ",
    "parse_morphism",
    "format_morphism",
    "parse_directive_file",
    "format_directive_file",
    "parse_quad",
    "parse_alpha",
    "factors",
    "extension_graph",
    "connected_components",
    "return_words",
    "coboundary_space",
    "is_trivial_space",
    "stable_coboundaries",
    "letter_frequencies",
    "base_measures",
    "itau_module",
    "certify_eigenvalue",
    "verify_certificate",
    "host_diagnostic",
]

__version__ = "0.1.0"
