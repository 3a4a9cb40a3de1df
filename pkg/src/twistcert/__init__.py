"""Exact infinite-generation certificates for separating-twist subgroups.

The pipeline: Laurent polynomial coefficients of lifted cycles in an
abelian cover (laurent, homology), the induced 2x2 twist representation
(rep), double-coset separation inside an amalgam of SL2 groups over
function rings (amalgam), and the Bruhat-Tits tree that grounds the
amalgam's membership predicates geometrically (tree).
"""

from .laurent import (
    LaurentPoly,
    LaurentRing,
    ParseError,
    RingHom,
    RingMismatchError,
    ValuationError,
    parse_poly,
    phi_hom,
    single_variable_ring,
    specialize_phi,
    specialize_single,
    surface_ring,
)
from .homology import (
    CycleClass,
    EpsilonTable,
    Generator,
    LiftClass,
    ValidationReport,
    canonical_lift,
    comm_pairs,
    excluded_pair,
    pair_generators,
    pair_kernel,
    pairing_polynomial,
    pushforward_b1_twist,
    twist_apply,
    validate_lift,
)
from .rep import (
    HFormReport,
    Matrix2,
    h_form,
    matrix_Mk,
    matrix_N,
    multiply,
    rho,
    rho_pre_phi,
)
from .tree import (
    RationalFunction,
    TranslationReport,
    TreeVertex,
    act,
    ball_dot,
    base_vertex,
    canonical_vertex,
    distance,
    first_step,
    fixes_edge,
    fixes_vertex,
    geodesic,
    odd_base_vertex,
    parse_vertex,
    series_ring,
    translation_length,
    vertex_matrix,
)
from .amalgam import (
    AmalgamLetter,
    Certificate,
    DoubleCosetReport,
    IdentityForcingReport,
    amalgam_normal_form,
    build_certificate,
    double_cosets_distinct,
    h_cap_a_forces_identity,
    in_A,
    in_B,
    in_U,
)

__version__ = "0.1.0"
