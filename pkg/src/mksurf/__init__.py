"""Markoff surfaces, SL2 commutator lifting, free-product word algorithms,
and machine-checkable Hasse-failure certificates."""

from .rings import (
    INF,
    LocalizedInt,
    ModInt,
    IntegerRing,
    RationalField,
    ResidueRing,
    SIntegerRing,
    factorize,
    hilbert,
    jacobi,
    legendre,
    parse_ring,
    squarefree_part,
)
from .mat2 import (
    Mat2,
    commutator,
    count_conic_modp,
    fricke_level,
    in_trace_set,
    mat_mod,
    sl2_conjugacy_test_modp,
)
from .markoff import (
    MarkoffMove,
    MarkoffPoint,
    admissible_k,
    admissible_t,
    apply_move,
    apply_path,
    class_data,
    e2_good_test,
    level,
    reduce_point,
    same_orbit,
    search_integral,
    search_localized,
)
from .quadforms import (
    HasseProfile,
    TernaryForm,
    form_isotropic,
    hasse_profile,
    legendre_isotropic,
    mtype_conjugate,
    mtype_matrix,
)
from .lifting import (
    LiftError,
    LiftResult,
    lift2,
    lift_point,
    minus_identity_commutator,
    pair_move,
    pid_commutator_via_trace_set,
    universal_pair,
    universal_point,
)
from .words import (
    SRingElem,
    Word,
    alg1_representatives,
    cyclic_conjugacy_equal,
    embedding_matrix,
    in_derived_subgroup,
    is_unit_in_S,
    metabelian_image,
    psl2_class_reps,
    reduce_word,
    table1_trace_filter,
    word,
    word_trace,
)
from .quotients import (
    BudgetExceeded,
    commutator_test_modq,
    sl2_order,
    sl2_tuples,
    trace_commutator_image,
)
from .certify import (
    Certificate,
    build_hfe1_matrix,
    catalogue_congruence_obstructions,
    certify_e2_failure,
    certify_hfz,
    certify_sint_failure,
    check_certificate,
    verify_hfe1,
)

__version__ = "0.1.0"
