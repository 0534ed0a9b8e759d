"""Truncated FI-modules and their functorial constructions.

A module is stored by generators of FI: for each degree n the matrices of the
adjacent transpositions ``s_i`` acting on ``V_n`` and the matrix of the
standard inclusion ``V_n -> V_{n+1}``.  Everything else (arbitrary induced
maps, the shift, the derivative) is assembled from these.
"""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from itertools import permutations
from typing import Sequence

import numpy as np

from .exactla import ColumnSolver, FieldSpec, complement_projection, kernel_basis, parse_exact
from .exactla.linalg import column_basis
from .fincat import Injection, Permutation, compose_injections, factor_injection

NEG_INF = float("-inf")
POS_INF = float("inf")


class WindowError(ValueError):
    """A computation needs degrees beyond the truncation window."""

    def __init__(self, message: str, required_N: int | None = None):
        super().__init__(message)
        self.required_N = required_N


class ModuleMismatch(ValueError):
    pass


@dataclass(eq=False)
class TruncatedFIModule:
    field: FieldSpec
    N: int
    dims: list[int]
    act: list[list[np.ndarray]]
    inc: list[np.ndarray]
    name: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.dims) != self.N + 1:
            raise ValueError(f"{len(self.dims)} dims for window {self.N}")
        if len(self.inc) != self.N:
            raise ValueError(f"{len(self.inc)} inclusion maps for window {self.N}")
        for n in range(self.N + 1):
            if len(self.act[n]) != max(n - 1, 0):
                raise ValueError(f"degree {n} needs {max(n - 1, 0)} transposition matrices")

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<TruncatedFIModule{label} over {self.field} N={self.N} dims={self.dims}>"

    def s(self, n: int, i: int) -> np.ndarray:
        """Matrix of the transposition (i i+1) on V_n."""
        return self.act[n][i - 1]

    def check_degree(self, n: int, what: str = "degree") -> None:
        if n > self.N:
            raise WindowError(f"{what} {n} exceeds truncation window N={self.N}", required_N=n)

    def permutation_matrix(self, perm: Permutation) -> np.ndarray:
        self.check_degree(perm.n)
        f = self.field
        out = f.identity(self.dims[perm.n])
        for i in perm.word:
            out = f.mul(out, self.s(perm.n, i))
        return out

    def inclusion_chain(self, m: int, n: int) -> np.ndarray:
        """Matrix of the standard inclusion V_m -> V_n."""
        self.check_degree(n)
        f = self.field
        out = f.identity(self.dims[m])
        for k in range(m, n):
            out = f.mul(self.inc[k], out)
        return out

    def coface(self, m: int, q: int) -> np.ndarray:
        """Matrix of V(delta_q): V_m -> V_{m+1}, delta_q the increasing map missing q."""
        key = ("coface", m, q)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.check_degree(m + 1)
        # delta_q = s_q o delta_{q+1}, and delta_{m+1} is the standard inclusion
        if q == m + 1:
            out = self.inc[m]
        else:
            out = self.field.mul(self.s(m + 1, q), self.coface(m, q + 1))
        self._cache[key] = out
        return out

    def induced_map(self, inj: Injection, complement: Sequence[int] | None = None) -> np.ndarray:
        self.check_degree(inj.n)
        sigma, _ = factor_injection(inj, complement)
        return self.field.mul(self.permutation_matrix(sigma), self.inclusion_chain(inj.m, inj.n))

    def is_zero(self) -> bool:
        return not any(self.dims)

    def truncate(self, N: int) -> "TruncatedFIModule":
        if N > self.N:
            raise WindowError(f"cannot extend window {self.N} to {N}", required_N=N)
        if N == self.N:
            return self
        return TruncatedFIModule(
            self.field, N, self.dims[: N + 1], self.act[: N + 1], self.inc[:N], name=self.name
        )

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


@dataclass(eq=False)
class FIMorphism:
    source: TruncatedFIModule
    target: TruncatedFIModule
    mats: list[np.ndarray]

    @property
    def N(self) -> int:
        return len(self.mats) - 1

    def violations(self) -> list[str]:
        V, W, f = self.source, self.target, self.source.field
        out = []
        for n, M in enumerate(self.mats):
            if M.shape != (W.dims[n], V.dims[n]):
                out.append(f"degree {n}: shape {M.shape} != {(W.dims[n], V.dims[n])}")
                continue
            for i in range(1, n):
                if not f.equal(f.mul(M, V.s(n, i)), f.mul(W.s(n, i), M)):
                    out.append(f"degree {n}: does not commute with s_{i}")
            if n < self.N and not f.equal(f.mul(self.mats[n + 1], V.inc[n]), f.mul(W.inc[n], M)):
                out.append(f"degree {n}: does not commute with the inclusion")
        return out


# ---------------------------------------------------------------------------
# constructions


def zero_module(field: FieldSpec, N: int) -> TruncatedFIModule:
    return TruncatedFIModule(
        field,
        N,
        [0] * (N + 1),
        [[field.zeros(0, 0) for _ in range(1, n)] for n in range(N + 1)],
        [field.zeros(0, 0) for _ in range(N)],
        name="0",
    )


def _injection_index(m: int, n: int) -> dict[tuple[int, ...], int]:
    return {img: k for k, img in enumerate(permutations(range(1, n + 1), m))}


def free_module(m: int, N: int, field: FieldSpec) -> TruncatedFIModule:
    """The representable M(m) with basis Inj([m], [n]) in lexicographic order."""
    if m < 0 or N < 0:
        raise ValueError("degrees must be non-negative")
    index = [_injection_index(m, n) for n in range(N + 1)]
    dims = [len(ix) for ix in index]
    act = []
    for n in range(N + 1):
        mats = []
        for i in range(1, n):
            M = field.zeros(dims[n], dims[n])
            for img, k in index[n].items():
                moved = tuple(i + 1 if v == i else i if v == i + 1 else v for v in img)
                M[index[n][moved], k] = field.one()
            mats.append(M)
        act.append(mats)
    inc = []
    for n in range(N):
        M = field.zeros(dims[n + 1], dims[n])
        for img, k in index[n].items():
            M[index[n + 1][img], k] = field.one()
        inc.append(M)
    return TruncatedFIModule(field, N, dims, act, inc, name=f"M({m})")


def _block_diag(field: FieldSpec, blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def direct_sum(*mods: TruncatedFIModule) -> TruncatedFIModule:
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    field, N = mods[0].field, mods[0].N
    for V in mods:
        if V.field != field or V.N != N:
            raise ModuleMismatch("direct summands must share field and window")
    dims = [sum(V.dims[n] for V in mods) for n in range(N + 1)]
    act = [[_block_diag(field, [V.s(n, i) for V in mods]) for i in range(1, n)] for n in range(N + 1)]
    inc = [_block_diag(field, [V.inc[n] for V in mods]) for n in range(N)]
    return TruncatedFIModule(field, N, dims, act, inc, name=" + ".join(V.name or "?" for V in mods))


def quotient(V: TruncatedFIModule, spans: list[np.ndarray], name: str = "") -> tuple[TruncatedFIModule, FIMorphism]:
    """V / U where ``spans[n]`` has columns spanning U_n (assumed a submodule).

    Returns the quotient and the projection morphism.
    """
    f = V.field
    projs, lifts = [], []
    for n in range(V.N + 1):
        proj, lift, _ = complement_projection(spans[n], f, V.dims[n])
        projs.append(proj)
        lifts.append(lift)
    dims = [p.shape[0] for p in projs]
    act = [
        [f.mul(projs[n], f.mul(V.s(n, i), lifts[n])) for i in range(1, n)] for n in range(V.N + 1)
    ]
    inc = [f.mul(projs[n + 1], f.mul(V.inc[n], lifts[n])) for n in range(V.N)]
    Q = TruncatedFIModule(f, V.N, dims, act, inc, name=name)
    return Q, FIMorphism(V, Q, projs)


def submodule(V: TruncatedFIModule, spans: list[np.ndarray], name: str = "") -> tuple[TruncatedFIModule, FIMorphism]:
    """U inside V with ``spans[n]`` spanning U_n; returns U and its inclusion."""
    f = V.field
    bases = [column_basis(S, f) if S.shape[1] else f.zeros(V.dims[n], 0) for n, S in enumerate(spans)]
    solvers = [ColumnSolver(B, f) for B in bases]
    dims = [B.shape[1] for B in bases]
    act = [
        [solvers[n].solve(f.mul(V.s(n, i), bases[n])) for i in range(1, n)] for n in range(V.N + 1)
    ]
    inc = [solvers[n + 1].solve(f.mul(V.inc[n], bases[n])) for n in range(V.N)]
    U = TruncatedFIModule(f, V.N, dims, act, inc, name=name)
    return U, FIMorphism(U, V, bases)


def coker_of(m: FIMorphism) -> TruncatedFIModule:
    if m.N != m.target.N:
        raise ModuleMismatch("morphism and target windows differ")
    return quotient(m.target, m.mats, name="coker")[0]


def ker_of(m: FIMorphism) -> TruncatedFIModule:
    if m.N != m.source.N:
        raise ModuleMismatch("morphism and source windows differ")
    f = m.source.field
    return submodule(m.source, [kernel_basis(M, f) for M in m.mats], name="ker")[0]


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class RelationTerm:
    gen: int
    injection: Injection
    coeff: object


@dataclass(frozen=True)
class Relation:
    degree: int
    terms: tuple[RelationTerm, ...]


@dataclass(frozen=True)
class Presentation:
    generator_degrees: tuple[int, ...]
    relations: tuple[Relation, ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "generator_degrees", tuple(self.generator_degrees))
        object.__setattr__(self, "relations", tuple(self.relations))
        for t, rel in enumerate(self.relations):
            for term in rel.terms:
                if not 0 <= term.gen < len(self.generator_degrees):
                    raise ValueError(f"relation {t}: generator index {term.gen} out of range")
                m = self.generator_degrees[term.gen]
                if term.injection.m != m or term.injection.n != rel.degree:
                    raise ValueError(
                        f"relation {t}: injection [{term.injection.m}]->[{term.injection.n}] "
                        f"does not map generator degree {m} into relation degree {rel.degree}"
                    )

    @property
    def k(self) -> int:
        """Generation bound (0 for the empty presentation)."""
        return max(self.generator_degrees, default=0)

    @property
    def d(self) -> int:
        """Relation bound (0 when there are no relations)."""
        return max((r.degree for r in self.relations), default=0)


def relation_span(p: Presentation, n: int, field: FieldSpec) -> np.ndarray:
    """Columns spanning R_n: all f_*(r) for relations r and injections f: [deg r] -> [n]."""
    degs = p.generator_degrees
    index = [_injection_index(m, n) for m in degs]
    offsets = np.cumsum([0] + [len(ix) for ix in index]).tolist()
    columns = []
    for rel in p.relations:
        if rel.degree > n:
            continue
        terms = [(t.gen, t.injection.image, _exact(t.coeff)) for t in rel.terms]
        for img_f in permutations(range(1, n + 1), rel.degree):
            col: dict[int, Fraction] = {}
            for j, img_g, c in terms:
                k = offsets[j] + index[j][tuple(img_f[v - 1] for v in img_g)]
                col[k] = col.get(k, 0) + c
            columns.append(col)
    out = field.zeros(offsets[-1], len(columns))
    for t, col in enumerate(columns):
        for k, c in col.items():
            out[k, t] = field.scalar(c)
    return out


def _exact(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(parse_exact(value))
    return Fraction(value)


def presentation_parts(p: Presentation, field: FieldSpec, N: int):
    """The projective P = sum M(m_j) and the spans of the relation module inside it."""
    if p.generator_degrees:
        P = direct_sum(*(free_module(m, N, field) for m in p.generator_degrees))
    else:
        P = zero_module(field, N)
    spans = [relation_span(p, n, field) for n in range(N + 1)]
    return P, spans


def from_presentation(p: Presentation, field: FieldSpec, N: int) -> tuple[TruncatedFIModule, int, int]:
    """V = P / R truncated at N, with the presentation bounds (k, d)."""
    P, spans = presentation_parts(p, field, N)
    if not p.relations:
        V = P
    else:
        V, _ = quotient(P, spans, name="V")
    return V, p.k, p.d


# ---------------------------------------------------------------------------
# shift, derivative, kernel


def shift(V: TruncatedFIModule) -> TruncatedFIModule:
    """SV on window N-1; the added point is always the last one."""
    if V.N < 1:
        raise WindowError("shift needs window N >= 1", required_N=1)

    def build():
        f = V.field
        dims = V.dims[1:]
        act = [[V.s(n + 1, i) for i in range(1, n)] for n in range(V.N)]
        inc = [f.mul(V.s(n + 2, n + 1), V.inc[n + 1]) for n in range(V.N - 1)]
        return TruncatedFIModule(f, V.N - 1, dims, act, inc, name=f"S{V.name}" if V.name else "SV")

    return V.cached("shift", build)


def iterated_shift(V: TruncatedFIModule, i: int) -> TruncatedFIModule:
    for _ in range(i):
        V = shift(V)
    return V


def iota(V: TruncatedFIModule) -> FIMorphism:
    """The natural map V -> SV on window N-1."""
    SV = shift(V)
    return FIMorphism(V.truncate(V.N - 1), SV, list(V.inc))


def derivative_kernel(V: TruncatedFIModule) -> tuple[TruncatedFIModule, TruncatedFIModule]:
    """(DV, KV): cokernel and kernel of iota, both on window N-1."""
    if V.N < 1:
        raise WindowError("the derivative needs window N >= 1", required_N=1)

    def build():
        m = iota(V)
        f = V.field
        DV, _ = quotient(m.target, m.mats, name=f"D{V.name}" if V.name else "DV")
        KV, _ = submodule(m.source, [kernel_basis(M, f) for M in m.mats], name=f"K{V.name}" if V.name else "KV")
        return DV, KV

    return V.cached("derivative_kernel", build)


def derivative(V: TruncatedFIModule) -> TruncatedFIModule:
    return derivative_kernel(V)[0]


def iterated_derivative(V: TruncatedFIModule, i: int) -> TruncatedFIModule:
    for _ in range(i):
        V = derivative(V)
    return V


def sub_generated_below(V: TruncatedFIModule, r: int) -> tuple[TruncatedFIModule, TruncatedFIModule]:
    """U generated by the V_n with n < r, and W = V / U."""
    f = V.field
    spans = []
    for n in range(V.N + 1):
        if n < r:
            spans.append(f.identity(V.dims[n]))
            continue
        prev = spans[n - 1] if n else f.zeros(0, 0)
        current = column_basis(f.mul(V.inc[n - 1], prev), f) if prev.shape[1] else f.zeros(V.dims[n], 0)
        # close up under the symmetric group
        while current.shape[1]:
            moved = [current] + [f.mul(V.s(n, i), current) for i in range(1, n)]
            grown = column_basis(np.concatenate(moved, axis=1), f)
            if grown.shape[1] == current.shape[1]:
                break
            current = grown
        spans.append(current)
    U, _ = submodule(V, spans, name="U")
    W, _ = quotient(V, spans, name="W")
    return U, W


# ---------------------------------------------------------------------------
# validation


def validate(V: TruncatedFIModule, samples: int = 20, seed: int = 0) -> list[str]:
    """Every violated defining relation, plus spot checks of functoriality."""
    f = V.field
    out = []
    for n in range(V.N + 1):
        d = V.dims[n]
        I = f.identity(d)
        for i in range(1, n):
            s = V.s(n, i)
            if s.shape != (d, d):
                out.append(f"s_{i} on V_{n}: shape {s.shape} != {(d, d)}")
                continue
            if not f.equal(f.mul(s, s), I):
                out.append(f"s_{i} on V_{n} is not an involution")
            if i + 1 < n:
                t = V.s(n, i + 1)
                if not f.equal(f.mul(s, f.mul(t, s)), f.mul(t, f.mul(s, t))):
                    out.append(f"braid relation fails for s_{i}, s_{i + 1} on V_{n}")
            for j in range(i + 2, n):
                t = V.s(n, j)
                if not f.equal(f.mul(s, t), f.mul(t, s)):
                    out.append(f"s_{i} and s_{j} do not commute on V_{n}")
    for n in range(V.N):
        if V.inc[n].shape != (V.dims[n + 1], V.dims[n]):
            out.append(f"inclusion V_{n} -> V_{n + 1}: shape {V.inc[n].shape}")
            continue
        for i in range(1, n):
            if not f.equal(f.mul(V.inc[n], V.s(n, i)), f.mul(V.s(n + 1, i), V.inc[n])):
                out.append(f"inclusion V_{n} -> V_{n + 1} is not natural for s_{i}")
    for n in range(1, V.N):
        both = f.mul(V.inc[n], V.inc[n - 1])
        if not f.equal(f.mul(V.s(n + 1, n), both), both):
            out.append(f"s_{n} on V_{n + 1} moves the image of V_{n - 1}")
    if out:
        return out
    rng = random.Random(seed)
    for _ in range(samples if V.N else 0):
        a, b, c = sorted(rng.randint(0, V.N) for _ in range(3))
        g1 = Injection(a, b, tuple(rng.sample(range(1, b + 1), a)))
        g2 = Injection(b, c, tuple(rng.sample(range(1, c + 1), b)))
        lhs = V.induced_map(compose_injections(g2, g1))
        rhs = f.mul(V.induced_map(g2), V.induced_map(g1))
        if not f.equal(lhs, rhs):
            out.append(f"induced maps do not compose for {g2.image} o {g1.image}")
    return out
