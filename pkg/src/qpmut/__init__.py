"""Exact-arithmetic toolkit for quivers with potential.

Mutation of QPs, Jacobian algebras via noncommutative rewriting, Nakayama
permutations, Okuyama-Rickard silting mutation, and a verifier for the
endomorphism-algebra comparison on desk-scale instances.
"""

from .fields import QQ, FieldError, PrimeField, Rationals, field_from_name
from .pathalg import (
    Arrow,
    Element,
    PathAlgebraError,
    Path,
    Potential,
    Quiver,
    compose_paths,
    cyclic_derivative,
    pair_derivative,
    right_derivative,
    substitute,
)
from .qpcore import (
    DEFAULT_BOUND,
    MutationError,
    MutationPlan,
    QP,
    TrivialSummary,
    ViolationReport,
    check_mutability,
    mutate,
    opposite,
    premutate,
    split_reduce,
)
from .jacobian import (
    RewriteSystem,
    UnboundedAtD,
    complete_rewrite,
    fd_algebra,
    jacobian_relations,
)
from .fdalg import AlgebraError, BasisElem, FDAlgebra
from .fixtures import fixture, grid3_qp, hex_qp, tub_qp

__all__ = [name for name in dir() if not name.startswith("_")]
