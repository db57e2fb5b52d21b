"""Exact computations with heaps, affine modules, affgebras and Lie affgebras."""

from .affgebra import (
    Affgebra,
    BiAffineMap,
    EndomorphismAffgebra,
    abelian_affgebra,
    check_associative,
    check_sigma_compat,
    check_truss,
    derivation_bracket,
    derivations,
    endo_compose,
    endomorphism_affgebra,
    is_derivation_along,
    multiply,
    retract_algebra,
)
from .engine import Law, VerdictReport, check, exhaustive_check, frame_check
from .errors import (
    AlgebraError,
    BudgetExceededError,
    DocumentError,
    DomainError,
    InternalConsistencyError,
    LawViolation,
    NotAUnitError,
    UnsupportedError,
)
from .heap import CoordinateHeap, TableHeap, check_heap_axioms, fold, retract_group, ternary, z_action
from .lie import (
    LieAffgebra,
    adjoint_map,
    are_isomorphic_small,
    bracket,
    check_antisymmetry,
    check_jacobi,
    check_pre_lie,
    from_vector_valued,
    make_action_bracket,
    make_commutator_bracket,
    make_pre_lie_bracket,
    make_sigma_bracket,
    retract_lie,
    to_vector_valued,
)
from .module import (
    AffineMap,
    CoordinateModule,
    TableModule,
    act_on_maps,
    action,
    apply_map,
    check_affine_axioms,
    heap_of_maps,
    is_affine_hom,
    linearise,
    retract_module,
    translate,
)
from .nijenhuis import (
    blend_operator,
    compatibility_bracket,
    deform,
    is_nijenhuis,
    is_nijenhuis_linear,
    nijenhuis_bracket,
    power_tower,
    retract_operator,
    search_nijenhuis,
)
from .scalars import GF, QQ, ZZ, Ring, Scalar, Zmod, enumerate_scalars, invert, ring_arith

__version__ = "0.1.0"
