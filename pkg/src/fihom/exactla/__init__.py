"""Exact dense linear algebra over Q and F_p."""

from .field import RATIONALS, FieldError, FieldSpec, parse_exact, prime_field
from .kernels import IMPL as KERNEL_IMPL
from .linalg import (
    BACKENDS,
    BackendMismatch,
    ColumnSolver,
    column_basis,
    complement_projection,
    get_backend,
    inverse,
    kernel_basis,
    rank,
    rank_rational_rows,
    rank_stats,
    rref,
    set_backend,
    use_backend,
)
from .subquotient import (
    NotAChainMapError,
    NotAComplexError,
    SubquotientBasis,
    induced_on_subquotient,
    subquotient,
)

__all__ = [
    "BACKENDS",
    "BackendMismatch",
    "ColumnSolver",
    "FieldError",
    "FieldSpec",
    "KERNEL_IMPL",
    "NotAChainMapError",
    "NotAComplexError",
    "RATIONALS",
    "SubquotientBasis",
    "column_basis",
    "complement_projection",
    "get_backend",
    "induced_on_subquotient",
    "inverse",
    "kernel_basis",
    "parse_exact",
    "prime_field",
    "rank",
    "rank_rational_rows",
    "rank_stats",
    "rref",
    "set_backend",
    "subquotient",
    "use_backend",
]
