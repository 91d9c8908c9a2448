"""Numerical certificates for singular value gap growth, ping-pong dynamics,
and irreducibility of explicit matrix representations of free products.

The toolkit evaluates whole word balls with renormalized products, fits
exponential lower bounds on singular value gaps, checks quantitative
ping-pong configurations by sampling and by a contraction bound, constructs
the block-diagonal and quaternionic example families, and runs finite
linear-algebra tests (matrix span, adjoint density heuristic, genericity
determinants, centralizer orbits).

Everything a verdict depends on (seed, thresholds, radius) is embedded in
the verdict itself.  All certificates are finite-ball statements; the
caveat strings spell that out.
"""

from .config import ConfigError, DEFAULT_THRESHOLDS, Thresholds
from .words import FactorPresentation, FreeProduct, Word
from .reps import FreenessReport, Rep
from .linalg import (ContractionCheck, DisplacementCheck, Flag, GapTooSmall,
                     Subspace, cartan_attractor, cartan_attractor_of_inverse,
                     contraction_bound_check, dist_to_subspace,
                     hyperplane_from_normal, near_identity_displacement_check,
                     proj_metric)
from .quaternion import QuatMat, Quaternion, complexify
from .ballcore import BACKEND, ball_evaluate_rep
from .gapcert import (GapProfile, GrowthFit, compute_profile, fit_gap_growth,
                      fit_qie_growth, index_set_report, limit_flag_sample,
                      limit_set_sample, qie_report)
from .projsets import (BallSet, ProjectiveSet, SetValidationError,
                       SubspaceComplementSet, UnionSet, set_from_json)
from .pingpong import (Certificate, CheckFailure, PingPongConfig,
                       check_pingpong, flags_from_limit_sample,
                       recheck_failure, sets_from_transverse_flag,
                       suggest_alpha, transversality_margin)
from .constructions import (BlockSpec, centralizer_basis,
                            centralizer_orbit_dim,
                            conjugated_free_product_rep, diagonal_copies_rep,
                            exterior_square, invariant_wedge_vector,
                            last_block_rep, quat_hyperbolic_element,
                            wedge_limit_flag)
from .algebra import (NotProximal, ProximalData, adjoint_rep,
                      burnside_span_dim, conjugate_family_rep,
                      genericity_check, invariant_subspace_refute,
                      proximal_data, zariski_density_heuristic)
from . import families

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DEFAULT_THRESHOLDS", "Thresholds",
    "FactorPresentation", "FreeProduct", "Word",
    "FreenessReport", "Rep",
    "ContractionCheck", "DisplacementCheck", "Flag", "GapTooSmall",
    "Subspace", "cartan_attractor", "cartan_attractor_of_inverse",
    "contraction_bound_check", "dist_to_subspace", "hyperplane_from_normal",
    "near_identity_displacement_check", "proj_metric",
    "QuatMat", "Quaternion", "complexify",
    "BACKEND", "ball_evaluate_rep",
    "GapProfile", "GrowthFit", "compute_profile", "fit_gap_growth",
    "fit_qie_growth", "index_set_report", "limit_flag_sample",
    "limit_set_sample", "qie_report",
    "BallSet", "ProjectiveSet", "SetValidationError",
    "SubspaceComplementSet", "UnionSet", "set_from_json",
    "Certificate", "CheckFailure", "PingPongConfig", "check_pingpong",
    "flags_from_limit_sample", "recheck_failure", "sets_from_transverse_flag",
    "suggest_alpha", "transversality_margin",
    "BlockSpec", "centralizer_basis", "centralizer_orbit_dim",
    "conjugated_free_product_rep", "diagonal_copies_rep", "exterior_square",
    "invariant_wedge_vector", "last_block_rep", "quat_hyperbolic_element",
    "wedge_limit_flag",
    "NotProximal", "ProximalData", "adjoint_rep", "burnside_span_dim",
    "conjugate_family_rep", "genericity_check", "invariant_subspace_refute",
    "proximal_data", "zariski_density_heuristic",
    "families",
    "__version__",
]
