"""Structure-constant algebras over exact fields."""

from .algebra import (  # noqa: F401
    AlgebraMorphism,
    StructureAlgebra,
    algebra_from_json,
    block_diagonal_embedding,
    conjugate_morphism,
    direct_sum,
    field_algebra,
    from_matrix,
    full_tensor,
    identity_morphism,
    inner_automorphism,
    kronecker_embedding,
    matrix_algebra,
    matrix_degree,
    morphism_from_json,
    opposite,
    quaternion,
    quaternion_norm,
    split_commutative,
    subalgebra,
    to_matrix,
    truncated_polynomial,
    unit_embedding,
)
from .structure import (  # noqa: F401
    IdempotentFamily,
    centralizer,
    center,
    degree,
    double_centralizer_check,
    reduced_trace,
    regular_representation,
    separability_idempotent,
    skolem_noether,
)
from .tensor import AmitsurReport, RelativeTensor, amitsur_exactness, relative_tensor  # noqa: F401
