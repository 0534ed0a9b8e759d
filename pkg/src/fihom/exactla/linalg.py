from __future__ import annotations

import contextlib
import os
from collections import Counter

import numpy as np

from . import rational
from .field import FieldSpec
from .kernels import bareiss_rank_modp, echelon_modp

BACKENDS = ("gauss", "bareiss", "both")


class BackendMismatch(ArithmeticError):
    """The two rank backends disagreed; always a bug."""


def _backend_from_env() -> str:
    name = os.environ.get("FIHOM_BACKEND", "gauss").lower()
    if name not in BACKENDS:
        raise ValueError(f"FIHOM_BACKEND={name!r}; expected one of {BACKENDS}")
    return name


_backend = _backend_from_env()

# calls per backend and cross-checks performed in "both" mode
rank_stats: Counter = Counter()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    name = name.lower()
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    _backend = name


@contextlib.contextmanager
def use_backend(name: str):
    old = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


def _rank_gauss(M: np.ndarray, field: FieldSpec) -> int:
    if field.is_rational:
        return rational.rank_gauss(M)
    return len(echelon_modp(M, field.p)[1])


def _rank_bareiss(M: np.ndarray, field: FieldSpec) -> int:
    if field.is_rational:
        return rational.rank_bareiss(M)
    return bareiss_rank_modp(M, field.p)


def rank(M: np.ndarray, field: FieldSpec, backend: str | None = None) -> int:
    backend = (backend or _backend).lower()
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    if backend == "gauss":
        rank_stats["gauss"] += 1
        return _rank_gauss(M, field)
    if backend == "bareiss":
        rank_stats["bareiss"] += 1
        return _rank_bareiss(M, field)
    if backend == "both":
        g = _rank_gauss(M, field)
        b = _rank_bareiss(M, field)
        rank_stats["both"] += 1
        if g != b:
            rank_stats["mismatch"] += 1
            raise BackendMismatch(f"gauss rank {g} != bareiss rank {b} on a {M.shape} matrix over {field}")
        return g
    raise ValueError(f"unknown backend {backend!r}")


def rank_rational_rows(rows: list[dict], backend: str | None = None) -> int:
    """Rank over Q of a matrix given as sparse rows ``{column: Fraction}``."""
    backend = (backend or _backend).lower()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    g = b = None
    if backend in ("gauss", "both"):
        g = len(rational.echelon_rows([dict(r) for r in rows] if backend == "both" else rows))
    if backend in ("bareiss", "both"):
        b = rational.rank_bareiss_rows(rows)
    rank_stats[backend] += 1
    if backend == "both" and g != b:
        rank_stats["mismatch"] += 1
        raise BackendMismatch(f"gauss rank {g} != bareiss rank {b} on {len(rows)} sparse rows over Q")
    return g if g is not None else b


def rref(M: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form, zero rows dropped, and its pivot columns."""
    rows, cols = M.shape
    if field.is_rational:
        sparse, pivots = rational.rref(M)
        R = field.zeros(len(sparse), cols)
        for i, row in enumerate(sparse):
            for j, x in row.items():
                R[i, j] = x
        return R, pivots
    E, pivots = echelon_modp(M, field.p, reduced=True)
    return E[: len(pivots)].copy(), pivots


def kernel_basis(M: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Columns spanning the null space, one per non-pivot column."""
    rows, cols = M.shape
    R, pivots = rref(M, field)
    pivset = set(pivots)
    free = [j for j in range(cols) if j not in pivset]
    K = field.zeros(cols, len(free))
    for t, f in enumerate(free):
        K[f, t] = field.one()
    if pivots and free:
        K[pivots, :] = field.neg(R[:, free])
    return K


def column_basis(M: np.ndarray, field: FieldSpec) -> np.ndarray:
    """The pivot columns of ``M``: a basis of its column space."""
    _, pivots = rref(M, field)
    return M[:, pivots].copy()



def inverse(M: np.ndarray, field: FieldSpec) -> np.ndarray:
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"cannot invert a {M.shape} matrix")
    aug = field.zeros(n, 2 * n)
    aug[:, :n] = M
    aug[:, n:] = field.identity(n)
    R, pivots = rref(aug, field)
    if pivots != list(range(n)):
        raise ArithmeticError("matrix is singular")
    return R[:, n:].copy()


class ColumnSolver:
    """Coordinates with respect to a full-column-rank basis ``B``.

    A set of rows where ``B`` is invertible is fixed once; ``solve`` reads
    coordinates from those rows and then checks the full product.
    """

    def __init__(self, B: np.ndarray, field: FieldSpec):
        self.field = field
        self.B = B
        r = B.shape[1]
        if r == 0:
            self.rows: list[int] = []
            self.inv = field.zeros(0, 0)
            return
        _, rows = rref(B.T.copy(), field)
        if len(rows) != r:
            raise ArithmeticError("basis columns are linearly dependent")
        self.rows = rows
        self.inv = inverse(B[rows, :], field)

    def solve(self, Z: np.ndarray, check: bool = True) -> np.ndarray:
        f = self.field
        if self.B.shape[1] == 0:
            X = f.zeros(0, Z.shape[1])
        else:
            X = f.mul(self.inv, Z[self.rows, :])
        if check and not f.equal(f.mul(self.B, X), Z):
            raise ArithmeticError("vector not in the span of the basis")
        return X

    def contains(self, Z: np.ndarray) -> bool:
        try:
            self.solve(Z)
        except ArithmeticError:
            return False
        return True


def complement_projection(S: np.ndarray, field: FieldSpec, dim: int) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Quotient of ``k^dim`` by the column span of ``S``.

    The quotient basis is the set of coordinates that are not pivots of the
    RREF of ``S^T``.  Returns ``(proj, lift, free)``: ``proj`` maps ``k^dim``
    onto quotient coordinates, ``lift`` sends each quotient basis vector to
    its standard basis vector.
    """
    if S.shape[1]:
        R, pivots = rref(S.T.copy(), field)
    else:
        R, pivots = field.zeros(0, dim), []
    pivset = set(pivots)
    free = [j for j in range(dim) if j not in pivset]
    proj = field.zeros(len(free), dim)
    lift = field.zeros(dim, len(free))
    for t, j in enumerate(free):
        proj[t, j] = field.one()
        lift[j, t] = field.one()
    # x is congruent to x - sum_i x[c_i] R_i, whose pivot coordinates vanish
    if pivots and free:
        proj[:, pivots] = field.neg(R[:, free]).T
    return proj, lift, free
