from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import FieldSpec
from .linalg import ColumnSolver, column_basis, kernel_basis, rank, rref


class NotAComplexError(ArithmeticError):
    pass


class NotAChainMapError(ArithmeticError):
    pass


@dataclass
class SubquotientBasis:
    """``ker(D_out) / im(D_in)`` with explicit representatives.

    ``representatives`` are columns of ``cycle_basis`` that complete the
    boundary basis to a basis of the cycles.
    """

    field: FieldSpec
    ambient_dim: int
    cycle_basis: np.ndarray
    boundary_basis: np.ndarray
    representatives: np.ndarray
    _solver: ColumnSolver = dc_field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    def project(self, Z: np.ndarray) -> np.ndarray:
        """Coordinates of the cycles ``Z`` (columns) in the representatives."""
        X = self._solver.solve(Z)
        nb = self.boundary_basis.shape[1]
        return X[nb:, :]

    def is_cycle(self, Z: np.ndarray) -> bool:
        return self._solver.contains(Z)

    def boundary_coordinates(self, Z: np.ndarray) -> np.ndarray:
        return self._solver.solve(Z)[: self.boundary_basis.shape[1], :]


def subquotient(D_out: np.ndarray, D_in: np.ndarray, field: FieldSpec) -> SubquotientBasis:
    """Homology at the middle of ``. --D_in--> C --D_out--> .``."""
    n = D_out.shape[1]
    if D_in.shape[0] != n:
        raise ValueError(f"D_in has {D_in.shape[0]} rows, D_out has {n} columns")
    if not field.is_zero(field.mul(D_out, D_in)):
        raise NotAComplexError("D_out * D_in != 0")
    Z = kernel_basis(D_out, field)
    B = column_basis(D_in, field)
    # pivots of [B | Z] beyond the boundary block select the representatives
    _, piv = rref(np.concatenate([B, Z], axis=1), field)
    nb = B.shape[1]
    if piv[:nb] != list(range(nb)):
        raise NotAComplexError("boundaries are not linearly independent cycles")
    rep_cols = [c - nb for c in piv[nb:]]
    R = Z[:, rep_cols].copy()
    solver = ColumnSolver(np.concatenate([B, R], axis=1), field)
    sq = SubquotientBasis(field, n, Z, B, R, solver)
    expected = Z.shape[1] - rank(D_in, field) if D_in.size else Z.shape[1]
    if sq.dim != expected:
        raise ArithmeticError(f"subquotient dimension {sq.dim} != nullity - rank = {expected}")
    return sq


def induced_on_subquotient(src: SubquotientBasis, dst: SubquotientBasis, chainmap: np.ndarray) -> np.ndarray:
    """Matrix of the map on subquotients induced by ``chainmap``.

    Raises :class:`NotAChainMapError` when cycles do not land in cycles or
    boundaries do not land in boundaries.
    """
    f = src.field
    if chainmap.shape != (dst.ambient_dim, src.ambient_dim):
        raise ValueError(f"chain map shape {chainmap.shape} != {(dst.ambient_dim, src.ambient_dim)}")
    img_cycles = f.mul(chainmap, src.cycle_basis) if src.cycle_basis.shape[1] else f.zeros(dst.ambient_dim, 0)
    if img_cycles.shape[1] and not dst.is_cycle(img_cycles):
        raise NotAChainMapError("a cycle maps outside the cycles of the target")
    img_bd = f.mul(chainmap, src.boundary_basis) if src.boundary_basis.shape[1] else f.zeros(dst.ambient_dim, 0)
    if img_bd.shape[1] and not f.is_zero(dst.project(img_bd)):
        raise NotAChainMapError("a boundary maps to a nonzero class")
    if src.dim == 0:
        return f.zeros(dst.dim, 0)
    return dst.project(f.mul(chainmap, src.representatives))
