"""Energy densities of harmonic functions on N-corner gasket networks.

Exact rationals cross the C++/Python boundary as ``"p/q"`` strings; use
:func:`frac` to lift them into :class:`fractions.Fraction`.
"""

from fractions import Fraction

from ._core import (
    L,
    M,
    M_general,
    M_inverse,
    brute_max,
    cell_energy,
    cell_ratio,
    classify_edge,
    cone_density,
    cone_tables,
    contraction,
    corner_limit,
    edge_profile,
    eigen_lines,
    extension_matrix,
    harmonic_extension,
    holder_exponent,
    holder_sup,
    itinerary,
    kusuoka_mass,
    vanishing_cell,
    verify_ok,
    vertex_density,
)

__all__ = [
    "L",
    "M",
    "M_general",
    "M_inverse",
    "brute_max",
    "cell_energy",
    "cell_ratio",
    "classify_edge",
    "cone_density",
    "cone_tables",
    "contraction",
    "corner_limit",
    "edge_profile",
    "eigen_lines",
    "extension_matrix",
    "frac",
    "harmonic_extension",
    "holder_exponent",
    "holder_sup",
    "itinerary",
    "kusuoka_mass",
    "vanishing_cell",
    "verify_ok",
    "vertex_density",
]


def frac(text):
    """Lift an exact ``"p/q"`` string into a :class:`fractions.Fraction`."""
    return Fraction(text)
