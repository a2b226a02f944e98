"""Torsional rigidity, heat content and spectra of quantum graphs.

Exact quantities (lengths, moments, linear systems) are Fractions; spectral
quantities are floats carrying explicit error bounds.
"""
from .bcds import (
    SeedLengths,
    build_71_combinatorial_pair,
    build_71_glued_pair,
    build_71_quantum_pair,
    combinatorial_char_polys,
    combinatorial_difference_formula,
    combinatorial_torsion,
    combinatorial_torsion_difference,
    native_torsion_difference,
    paper_L1_system,
    paper_torsion_difference,
    torsion_difference_formula,
)
from .exact import Matrix, UniPoly, char_poly, determinant, inverse, solve_linear
from .exceptions import (
    ComputationError,
    GraphValidationError,
    InsufficientDepth,
    MissedRootRisk,
    NoBoundaryVertex,
    QGTError,
)
from .graph import MetricEdge, MetricGraph, build_graph, clean, interval, load_graph, star, subdivide
from .inversion import RecoveredSpectrum, invert_moments, moments_from_pairs
from .spectral import (
    Eigenpair,
    Estimate,
    HeatContentSeries,
    SpectralOptions,
    eigenvalues_up_to,
    heat_content,
    heat_content_series,
    projection_coefficients,
    spectral_moment,
    weyl_check,
)
from .torsion import MomentSequence, moment_hierarchy, solve_torsion, torsional_rigidity

__version__ = "0.1.0"

__all__ = [
    "SeedLengths",
    "build_71_combinatorial_pair",
    "build_71_glued_pair",
    "build_71_quantum_pair",
    "combinatorial_char_polys",
    "combinatorial_difference_formula",
    "combinatorial_torsion",
    "combinatorial_torsion_difference",
    "native_torsion_difference",
    "paper_L1_system",
    "paper_torsion_difference",
    "torsion_difference_formula",
    "Matrix",
    "UniPoly",
    "char_poly",
    "determinant",
    "inverse",
    "solve_linear",
    "ComputationError",
    "GraphValidationError",
    "InsufficientDepth",
    "MissedRootRisk",
    "NoBoundaryVertex",
    "QGTError",
    "MetricEdge",
    "MetricGraph",
    "build_graph",
    "clean",
    "interval",
    "load_graph",
    "star",
    "subdivide",
    "RecoveredSpectrum",
    "invert_moments",
    "moments_from_pairs",
    "Eigenpair",
    "Estimate",
    "HeatContentSeries",
    "SpectralOptions",
    "eigenvalues_up_to",
    "heat_content",
    "heat_content_series",
    "projection_coefficients",
    "spectral_moment",
    "weyl_check",
    "MomentSequence",
    "moment_hierarchy",
    "solve_torsion",
    "torsional_rigidity",
]
