"""Koszul complexes of truncated FI-modules and their homology.

At evaluation degree n the layer of homological degree a is the sum over
a-subsets I of {1..n} of V_{n-a} tensor det(I), where V_{[n] - I} is
identified with V_{n-a} by the increasing bijection.  Removing i_p from I
and adding it back to the complement is the coface map that misses the
position of i_p, so every block of the differential is ``+-V.coface``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

import numpy as np

from .exactla import (
    FieldSpec,
    SubquotientBasis,
    get_backend,
    induced_on_subquotient,
    rank,
    rank_rational_rows,
    subquotient,
)
from .fimodule import TruncatedFIModule, WindowError, shift
from .fincat import sorted_wedge_sign

# ---------------------------------------------------------------------------
# the evaluated complex


@dataclass
class KoszulLayerBasis:
    n: int
    a: int
    subsets: list[tuple[int, ...]]
    slot_dim: int

    @property
    def dim(self) -> int:
        return len(self.subsets) * self.slot_dim

    def offset(self, subset: tuple[int, ...]) -> int:
        return self.position[subset] * self.slot_dim

    def __post_init__(self):
        self.position = {I: t for t, I in enumerate(self.subsets)}


@dataclass(eq=False)
class EvaluatedKoszulComplex:
    module: TruncatedFIModule
    n: int
    a_max: int
    _layers: dict = dc_field(default_factory=dict, repr=False)
    _diffs: dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.module.field

    def layer(self, a: int) -> KoszulLayerBasis:
        if a not in self._layers:
            if 0 <= a <= self.n:
                subsets = list(combinations(range(1, self.n + 1), a))
                slot = self.module.dims[self.n - a]
            else:
                subsets, slot = [], 0
            self._layers[a] = KoszulLayerBasis(self.n, a, subsets, slot)
        return self._layers[a]

    def layer_dim(self, a: int) -> int:
        return self.layer(a).dim

    def d(self, a: int) -> np.ndarray:
        """Differential from layer a to layer a-1."""
        if a not in self._diffs:
            self._diffs[a] = self._build(a)
        return self._diffs[a]

    def _blocks(self, a: int):
        """Yield ``(row offset, column offset, q, odd)``: the block is -+coface(n-a, q)."""
        src, dst = self.layer(a), self.layer(a - 1)
        sd = src.slot_dim
        for t, I in enumerate(src.subsets):
            for p in range(1, a + 1):
                J = I[: p - 1] + I[p:]
                yield dst.offset(J), t * sd, I[p - 1] - (p - 1), p % 2

    def _build(self, a: int) -> np.ndarray:
        f = self.field
        src, dst = self.layer(a), self.layer(a - 1)
        D = f.zeros(dst.dim, src.dim)
        if src.dim == 0 or dst.dim == 0:
            return D
        V, m = self.module, self.n - a
        sd, td = src.slot_dim, dst.slot_dim
        blocks = {}
        for r0, c0, q, odd in self._blocks(a):
            if (q, odd) not in blocks:
                block = V.coface(m, q)
                blocks[q, odd] = f.neg(block) if odd else block
            D[r0 : r0 + td, c0 : c0 + sd] = blocks[q, odd]
        return D

    def sparse_rows(self, a: int) -> list[dict]:
        """The differential from layer a as sparse rows, built without a dense matrix."""
        src, dst = self.layer(a), self.layer(a - 1)
        rows: list[dict] = [{} for _ in range(dst.dim)]
        if src.dim == 0 or dst.dim == 0:
            return rows
        V, m = self.module, self.n - a
        entries = {}
        for r0, c0, q, odd in self._blocks(a):
            if (q, odd) not in entries:
                B = V.coface(m, q)
                entries[q, odd] = [
                    (i, j, -x if odd else x) for i, line in enumerate(B.tolist()) for j, x in enumerate(line) if x
                ]
            for i, j, x in entries[q, odd]:
                rows[r0 + i][c0 + j] = x
        return rows


def build_complex(V: TruncatedFIModule, n: int, a_max: int | None = None) -> EvaluatedKoszulComplex:
    V.check_degree(n, "evaluation degree")
    a_max = n if a_max is None else min(a_max, n)
    return EvaluatedKoszulComplex(V, n, a_max)


def differential_rank(V: TruncatedFIModule, n: int, a: int) -> int:
    """rank of d: layer a -> layer a-1 at degree n, cached per backend."""
    if a <= 0 or a > n:
        return 0
    if V.dims[n - a] == 0 or V.dims[n - a + 1] == 0:
        return 0
    backend = get_backend()
    key = ("koszul_rank", n, a, backend)
    hit = V._cache.get(key)
    if hit is None:
        cx = build_complex(V, n)
        if V.field.is_rational:
            hit = rank_rational_rows(cx.sparse_rows(a))
        else:
            hit = rank(cx.d(a), V.field)
        V._cache[key] = hit
    return hit


def homology_dim(V: TruncatedFIModule, a: int, n: int) -> int:
    """dim H_a(V)_n = nullity(d_a) - rank(d_{a+1})."""
    V.check_degree(n, "evaluation degree")
    if a < 0 or a > n:
        return 0
    layer = comb(n, a) * V.dims[n - a]
    if layer == 0:
        return 0
    return layer - differential_rank(V, n, a) - differential_rank(V, n, a + 1)


# ---------------------------------------------------------------------------
# homology tables


@dataclass
class HomologyTable:
    a_max: int
    n_max: int
    h: dict[tuple[int, int], int]
    bases: dict[tuple[int, int], SubquotientBasis] = dc_field(default_factory=dict, repr=False)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.h[key]

    def row(self, a: int) -> list[int]:
        return [self.h[a, n] for n in range(self.n_max + 1)]

    def observed_degree(self, a: int) -> float | int:
        """Largest n in the window with H_a(V)_n != 0, or -inf."""
        nz = [n for n in range(self.n_max + 1) if self.h[a, n]]
        return max(nz) if nz else float("-inf")

    def is_zero(self) -> bool:
        return not any(self.h.values())

    def rows(self, nonzero_only: bool = False):
        for a in range(self.a_max + 1):
            for n in range(self.n_max + 1):
                if nonzero_only and not self.h[a, n]:
                    continue
                yield a, n, self.h[a, n]

    def to_tsv(self, nonzero_only: bool = False) -> str:
        lines = ["a\tn\tdim"]
        lines += [f"{a}\t{n}\t{d}" for a, n, d in self.rows(nonzero_only)]
        return "\n".join(lines) + "\n"

    def to_json(self, nonzero_only: bool = False) -> dict:
        return {
            "a_max": self.a_max,
            "n_max": self.n_max,
            "cells": [{"a": a, "n": n, "dim": d} for a, n, d in self.rows(nonzero_only)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HomologyTable":
        h = {(a, n): 0 for a in range(obj["a_max"] + 1) for n in range(obj["n_max"] + 1)}
        for cell in obj["cells"]:
            h[cell["a"], cell["n"]] = cell["dim"]
        return cls(obj["a_max"], obj["n_max"], h)

    @classmethod
    def from_tsv(cls, text: str, a_max: int, n_max: int) -> "HomologyTable":
        h = {(a, n): 0 for a in range(a_max + 1) for n in range(n_max + 1)}
        for line in text.strip().splitlines()[1:]:
            a, n, d = (int(x) for x in line.split("\t"))
            h[a, n] = d
        return cls(a_max, n_max, h)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def homology_table(V: TruncatedFIModule, a_max: int, n_max: int | None = None, with_bases: bool = False) -> HomologyTable:
    n_max = V.N if n_max is None else n_max
    V.check_degree(n_max, "n_max")
    h = {}
    bases = {}
    for n in range(n_max + 1):
        cx = build_complex(V, n) if with_bases else None
        for a in range(a_max + 1):
            if with_bases:
                sq = subquotient(cx.d(a), cx.d(a + 1), V.field)
                bases[a, n] = sq
                h[a, n] = sq.dim
            else:
                h[a, n] = homology_dim(V, a, n)
    return HomologyTable(a_max, n_max, h, bases)


# ---------------------------------------------------------------------------
# mapping cone of iota~ and the comparison map phi


def _iota_tilde(V: TruncatedFIModule, c1: EvaluatedKoszulComplex, c2: EvaluatedKoszulComplex, a: int) -> np.ndarray:
    """The chain map S~V -> S~SV in layer a: inc on every summand."""
    f = V.field
    L1, L2 = c1.layer(a), c2.layer(a)
    M = f.zeros(L2.dim, L1.dim)
    if L1.dim and L2.dim:
        inc = V.inc[c1.n - a]
        for t, I in enumerate(L1.subsets):
            r0 = L2.offset(I)
            M[r0 : r0 + L2.slot_dim, t * L1.slot_dim : (t + 1) * L1.slot_dim] = inc
    return M


def _phi_parts(c1, c2, T, a: int) -> tuple[np.ndarray, np.ndarray]:
    """phi on cone_a = layer_{a-1}(S~V) + layer_a(S~SV) into layer_a of (S~V) at n+1.

    Returns the two column blocks.  The first inserts the added point n+1
    into the wedge; its sign comes from moving it from the front of the
    wedge to its sorted position.
    """
    f = T.field
    star = T.n
    LT = T.layer(a)
    L1, L2 = c1.layer(a - 1), c2.layer(a)
    P1 = f.zeros(LT.dim, L1.dim)
    P2 = f.zeros(LT.dim, L2.dim)
    one = f.identity(LT.slot_dim)
    if L1.dim:
        for t, J in enumerate(L1.subsets):
            idx, sign = sorted_wedge_sign((star,) + J, star)
            r0 = LT.offset(idx.subset)
            P1[r0 : r0 + LT.slot_dim, t * L1.slot_dim : (t + 1) * L1.slot_dim] = one if sign > 0 else f.neg(one)
    if L2.dim:
        for t, I in enumerate(L2.subsets):
            r0 = LT.offset(I)
            P2[r0 : r0 + LT.slot_dim, t * L2.slot_dim : (t + 1) * L2.slot_dim] = one
    return P1, P2


def _cone_differential(V, c1, c2, a: int) -> np.ndarray:
    """d(b, c) = (-d b, d c - iota~ b) from cone_a to cone_{a-1}."""
    f = V.field
    top1, top2 = c1.layer_dim(a - 1), c2.layer_dim(a)
    bot1, bot2 = c1.layer_dim(a - 2), c2.layer_dim(a - 1)
    D = f.zeros(bot1 + bot2, top1 + top2)
    if a - 1 >= 1:
        D[:bot1, :top1] = f.neg(c1.d(a - 1))
    D[bot1:, :top1] = f.neg(_iota_tilde(V, c1, c2, a - 1))
    D[bot1:, top1:] = c2.d(a)
    return D


@dataclass
class ConeCell:
    n: int
    a: int
    cone_dim: int
    target_dim: int
    square_commutes: bool | None
    phi_bijective: bool

    @property
    def ok(self) -> bool:
        return self.phi_bijective and self.square_commutes is not False


@dataclass
class ConeComparison:
    n_max: int
    a_max: int
    cells: list[ConeCell]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cells)

    def failures(self) -> list[ConeCell]:
        return [c for c in self.cells if not c.ok]


def cone_phi_check(V: TruncatedFIModule, n_max: int | None = None, a_max: int = 4, keep_matrices: bool = False) -> ConeComparison:
    """Compare cone(iota~) with the shifted Koszul complex at each (n, a)."""
    n_max = V.N - 1 if n_max is None else n_max
    if n_max > V.N - 1:
        raise WindowError(f"cone comparison up to n={n_max} needs N >= {n_max + 1}", required_N=n_max + 1)
    f = V.field
    SV = shift(V)
    cells = []
    for n in range(n_max + 1):
        c1, c2, T = build_complex(V, n), build_complex(SV, n), build_complex(V, n + 1)
        phis = {}
        top = min(a_max, n + 1)
        for a in range(0, top + 1):
            P1, P2 = _phi_parts(c1, c2, T, a)
            phis[a] = np.concatenate([P1, P2], axis=1)
        for a in range(0, top + 1):
            phi = phis[a]
            square = None
            if a >= 1:
                lhs = f.mul(phis[a - 1], _cone_differential(V, c1, c2, a))
                rhs = f.mul(T.d(a), phi)
                square = f.equal(lhs, rhs)
            bij = phi.shape[0] == phi.shape[1] and rank(phi, f) == phi.shape[0]
            cells.append(ConeCell(n, a, phi.shape[1], phi.shape[0], square, bij))
    return ConeComparison(n_max, a_max, cells)


# ---------------------------------------------------------------------------
# long exact sequence


@dataclass
class LESNode:
    n: int
    label: str
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.rank_in + self.rank_out == self.dim


@dataclass
class LESReport:
    n_max: int
    a_max: int
    nodes: list[LESNode]

    @property
    def ok(self) -> bool:
        return all(node.exact for node in self.nodes)

    def failures(self) -> list[LESNode]:
        return [node for node in self.nodes if not node.exact]


def _connecting_chain_map(c1, T, a: int) -> np.ndarray:
    """Inverse of phi followed by projection onto the shifted summand."""
    f = T.field
    LT, L1 = T.layer(a), c1.layer(a - 1)
    M = f.zeros(L1.dim, LT.dim)
    if L1.dim:
        one = f.identity(L1.slot_dim)
        star = T.n
        for t, J in enumerate(L1.subsets):
            idx, sign = sorted_wedge_sign((star,) + J, star)
            c0 = LT.offset(idx.subset)
            M[t * L1.slot_dim : (t + 1) * L1.slot_dim, c0 : c0 + LT.slot_dim] = one if sign > 0 else f.neg(one)
    return M


def les_exactness_check(V: TruncatedFIModule, a_max: int = 4, n_max: int | None = None) -> LESReport:
    """Exactness of ... -> H_a(V)_n -> H_a(SV)_n -> H_a(V)_{n+1} -> H_{a-1}(V)_n -> ...

    Homology is computed up to a_max + 1 so that every node with a <= a_max
    has both its incoming and outgoing map.
    """
    n_max = V.N - 1 if n_max is None else n_max
    if n_max > V.N - 1:
        raise WindowError(f"LES check up to n={n_max} needs N >= {n_max + 1}", required_N=n_max + 1)
    f = V.field
    SV = shift(V)
    nodes = []
    A = a_max + 1
    for n in range(n_max + 1):
        c1, c2, T = build_complex(V, n), build_complex(SV, n), build_complex(V, n + 1)
        sq1 = {a: subquotient(c1.d(a), c1.d(a + 1), f) for a in range(A + 1)}
        sq2 = {a: subquotient(c2.d(a), c2.d(a + 1), f) for a in range(A + 1)}
        sqT = {a: subquotient(T.d(a), T.d(a + 1), f) for a in range(A + 1)}
        # (label, subquotient) in sequence order, with the map into the next node
        seq = []
        for a in range(A, -1, -1):
            if a < A:
                seq.append((f"H{a}(V)_{n}", sq1[a]))
                seq.append((f"H{a}(SV)_{n}", sq2[a]))
            seq.append((f"H{a}(V)_{n + 1}", sqT[a]))
        maps = []
        for a in range(A, -1, -1):
            if a < A:
                maps.append(induced_on_subquotient(sq1[a], sq2[a], _iota_tilde(V, c1, c2, a)))
                _, P2 = _phi_parts(c1, c2, T, a)
                maps.append(induced_on_subquotient(sq2[a], sqT[a], P2))
            if a >= 1:
                maps.append(induced_on_subquotient(sqT[a], sq1[a - 1], _connecting_chain_map(c1, T, a)))
        maps.append(f.zeros(0, sqT[0].dim))
        # maps[i] goes from seq[i] to seq[i + 1]; the first node has no incoming map
        for i in range(1, len(seq)):
            label, sq = seq[i]
            g_in, g_out = maps[i - 1], maps[i]
            comp = f.mul(g_out, g_in) if g_in.size and g_out.size else f.zeros(g_out.shape[0], g_in.shape[1])
            nodes.append(
                LESNode(n, label, sq.dim, rank(g_in, f), rank(g_out, f), f.is_zero(comp))
            )
    return LESReport(n_max, a_max, nodes)
