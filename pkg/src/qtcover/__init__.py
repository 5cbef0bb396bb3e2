"""Exact construction and verification of coverings of quantum tori."""

from .phase import (PhaseExponent, Poly, Scalar, parse_poly, parse_scalar, phase_combine,
                    phase_is_trivial, scalar_add, scalar_conj, scalar_mul)
from .lattice import (QuotientGroup, enumerate_sublattices, hermite_normal_form, quotient_group,
                      smith_normal_form)
from .torus import (ThetaMatrix, TorusElement, adjoint, gauge, inner_ad, isotypic_project,
                    lattice_transform, monomial, multiply)
from .covering import (CoveringSystem, build_connected_covering, check_connected_covering,
                       check_freeness_ergodic, classify_coverings, enumerate_theta_corrections,
                       profinite_tower, solve_theta_prime)
from .groups import FiniteAbelianGroup
from .smooth import (GradedSystem, MonomialAutomorphism, OutSmoothElement, build_smooth_covering,
                     check_homomorphism, compute_cocycle, inflate_by_extension, morita_module_of,
                     out_inv, out_mul, picard_of, solve_associativity)
from .expr import parse_expr

__version__ = "0.1.0"

__all__ = [
    "PhaseExponent", "Poly", "Scalar", "parse_poly", "parse_scalar", "phase_combine", "phase_is_trivial",
    "scalar_add", "scalar_conj", "scalar_mul",
    "QuotientGroup", "enumerate_sublattices", "hermite_normal_form", "quotient_group", "smith_normal_form",
    "ThetaMatrix", "TorusElement", "adjoint", "gauge", "inner_ad", "isotypic_project", "lattice_transform",
    "monomial", "multiply",
    "CoveringSystem", "build_connected_covering", "check_connected_covering", "check_freeness_ergodic",
    "classify_coverings", "enumerate_theta_corrections", "profinite_tower", "solve_theta_prime",
    "FiniteAbelianGroup",
    "GradedSystem", "MonomialAutomorphism", "OutSmoothElement", "build_smooth_covering", "check_homomorphism",
    "compute_cocycle", "inflate_by_extension", "morita_module_of", "out_inv", "out_mul", "picard_of",
    "solve_associativity",
    "parse_expr",
]
