"""Exact metric geometry on finite spaces: Chebyshev towers, central measures,
orbit quotients and canonical orderings."""

from .central import central_measure, fix_polytope, lambda_measure, verify_theorem_iso
from .isometry import enumerate_isometries, is_transitive, orbits
from .metric import FiniteMetricSpace, chebyshev_tower, validate, weak_convexity_check
from .quotient import quotient, quotient_dual_distance, quotient_tower
from .sampler import canonical_metric, canonical_orbit_sequence, representations
from .transport import Measure, kantorovich, pushforward

__version__ = "0.1.0"

__all__ = [
    "FiniteMetricSpace",
    "Measure",
    "canonical_metric",
    "canonical_orbit_sequence",
    "central_measure",
    "chebyshev_tower",
    "enumerate_isometries",
    "fix_polytope",
    "is_transitive",
    "kantorovich",
    "lambda_measure",
    "orbits",
    "pushforward",
    "quotient",
    "quotient_dual_distance",
    "quotient_tower",
    "representations",
    "validate",
    "verify_theorem_iso",
    "weak_convexity_check",
]
