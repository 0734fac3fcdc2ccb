"""Counting periodic orbits of planar rational recurrences.

The package pairs an exact prediction (trace of the pullback action on a
modified surface, minus spurious contributions at infinity) with an
independent numeric census of the period-n points.
"""
from .cohomology import CountPrediction, CohomologyModel, lefschetz_number, predicted_count, spurious_census
from .families import FamilySpec, build, random_params
from .poly import MultiPoly, gcd, parse, resultant
from .projmap import (
    ProjPoint,
    ProjectiveMap,
    classify_critical_curve,
    critical_curves,
    degree_sequence,
    exceptional_orbit_check,
    homogenize,
    indeterminacy_locus,
    jacobian_factorization,
    topological_degree,
)
from .solver import PeriodicPoint, PeriodicReport, census, solve_system

__version__ = "0.1.0"

__all__ = [
    "CohomologyModel", "CountPrediction", "FamilySpec", "MultiPoly", "PeriodicPoint", "PeriodicReport",
    "ProjPoint", "ProjectiveMap", "build", "census", "classify_critical_curve", "critical_curves",
    "degree_sequence", "exceptional_orbit_check", "gcd", "homogenize", "indeterminacy_locus",
    "jacobian_factorization", "lefschetz_number", "parse", "predicted_count", "random_params", "resultant",
    "solve_system", "spurious_census", "topological_degree",
]
