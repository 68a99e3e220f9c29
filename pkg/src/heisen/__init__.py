"""Finite Heisenberg groups: alternating forms, symplectic reduction and central extensions."""

__version__ = "0.1.0"

from .classify import ClassificationRecord, classify_heisenberg, enumerate_abelian_groups
from .errors import (
    BoundExceededError,
    ConstraintError,
    DegenerateFormError,
    GroupMismatchError,
    HeisenError,
    InvariantError,
    ParseError,
)
from .exact_arith import ext_gcd, mod_inverse, smith_normal_form
from .finab import (
    FiniteAbelianGroup,
    GroupElement,
    HomMatrix,
    element_add,
    enumerate_elements,
    enumerate_homs,
    hom_apply,
    hom_compose,
    hom_inverse,
    hom_transpose,
    is_automorphism,
    make_group,
    pairing,
    parse_group,
)
from .forms import (
    AlternatingForm,
    enumerate_forms,
    flat,
    form_eval,
    is_nondegenerate,
    op_scale,
    op_shear,
    op_swap,
    standard_form,
    transform,
)
from .heisenberg import (
    HeisenbergElement,
    HeisenbergGroup,
    WeylOperators,
    commutator_form,
    extension_equivalent,
    from_form,
    standard_heisenberg,
    verify_weyl_relations,
    weyl_operators,
)
from .kernels import BACKEND
from .reduction import (
    Decomposition,
    TraceStep,
    canonical_invariants,
    exists_nondegenerate,
    symplectic_reduce,
    verify_decomposition,
)
