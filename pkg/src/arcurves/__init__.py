"""Exact Auslander-Reiten sequence construction over graded hypersurface curves."""

from .arengine import (ARSequence, GammaDatum, double_extension,
                       double_push_report, e_avg, explore_component,
                       gamma_endo, gamma_for, push, solve_W, syz_transport,
                       verify_main_theorem, verify_syz_gamma)
from .branches import (Branch, BranchFraction, factor_hypersurface,
                       gamma_prime, singular_branch)
from .errors import (ArcError, CertificationError, FieldTooSmallError,
                     FormSplitError, InconclusiveSplitError, InputError,
                     NotSquarefreeError, VerificationError,
                     WindowNotSaturatedError)
from .fields import QQ, PrimeField, RationalField, field_from_string
from .modmat import (GradedHom, GradedMatrix, GradedModule, HomSpace,
                     MatrixFactorization, block_matrix, decompose,
                     ext1_dim, free_module, hom_graded, iso_up_to_shift,
                     mf_check, mf_complete, mf_from_ideal, multiplicity,
                     rank_vector, solve_graded_system, stable_end_dim,
                     stably_zero_bruteforce)
from .quiver import (DirectedTree, TranslationQuiver, a_ray,
                     check_subadditive, classify_fragment, orbit_collapse,
                     quotient_tau, to_dot, to_json, tree_class, validate,
                     zt_build)
from .ring import (HypersurfaceRing, QElement, WPoly, poly_from_string,
                   random_ring, semigroup_member)
from .traceoracle import (EndGenerators, branch_images, end_generators,
                          is_integral, min_t_valuation, socle_test,
                          stably_zero_trace, trace_Q, trace_report)

__all__ = [
    "ARSequence",
    "ArcError",
    "Branch",
    "BranchFraction",
    "CertificationError",
    "DirectedTree",
    "EndGenerators",
    "FieldTooSmallError",
    "FormSplitError",
    "GammaDatum",
    "GradedHom",
    "GradedMatrix",
    "GradedModule",
    "HomSpace",
    "HypersurfaceRing",
    "InconclusiveSplitError",
    "InputError",
    "MatrixFactorization",
    "NotSquarefreeError",
    "PrimeField",
    "QElement",
    "QQ",
    "RationalField",
    "TranslationQuiver",
    "VerificationError",
    "WPoly",
    "WindowNotSaturatedError",
    "a_ray",
    "block_matrix",
    "branch_images",
    "check_subadditive",
    "classify_fragment",
    "decompose",
    "double_extension",
    "double_push_report",
    "e_avg",
    "end_generators",
    "explore_component",
    "ext1_dim",
    "factor_hypersurface",
    "field_from_string",
    "free_module",
    "gamma_endo",
    "gamma_for",
    "gamma_prime",
    "hom_graded",
    "is_integral",
    "iso_up_to_shift",
    "mf_check",
    "mf_complete",
    "mf_from_ideal",
    "min_t_valuation",
    "multiplicity",
    "orbit_collapse",
    "poly_from_string",
    "push",
    "quotient_tau",
    "random_ring",
    "rank_vector",
    "semigroup_member",
    "singular_branch",
    "socle_test",
    "solve_W",
    "solve_graded_system",
    "stable_end_dim",
    "stably_zero_bruteforce",
    "stably_zero_trace",
    "syz_transport",
    "to_dot",
    "to_json",
    "trace_Q",
    "trace_report",
    "tree_class",
    "validate",
    "verify_main_theorem",
    "verify_syz_gamma",
    "zt_build",
]
