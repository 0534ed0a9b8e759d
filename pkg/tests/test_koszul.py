from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

import fihom.koszul as koszul
from fihom.exactla import rank
from fihom.fimodule import direct_sum, free_module, from_presentation, zero_module
from fihom.fincat import enumerate_injections
from fihom.koszul import (
    HomologyTable,
    build_complex,
    cone_phi_check,
    homology_dim,
    homology_table,
    les_exactness_check,
)

from conftest import FP, QQ, small_presentation, torsion_module


def fuzzed(seed, field, N=5):
    return from_presentation(small_presentation(seed), field, N)[0]


def h0_oracle(V, n):
    """dim V_n modulo the images of all injections [n-1] -> [n]."""
    if n == 0 or not V.dims[n]:
        return V.dims[n]
    if not V.dims[n - 1]:
        return V.dims[n]
    images = np.concatenate([V.induced_map(f) for f in enumerate_injections(n - 1, n)], axis=1)
    return V.dims[n] - rank(images, V.field)


@given(st.integers(0, 10_000), st.sampled_from([QQ, FP]))
def test_differential_squares_to_zero(seed, field):
    V = fuzzed(seed, field, N=4)
    for n in range(V.N + 1):
        cx = build_complex(V, n)
        for a in range(2, n + 1):
            assert field.is_zero(field.mul(cx.d(a - 1), cx.d(a)))


def test_layer_dimensions(field):
    V = fuzzed(4, field, N=5)
    cx = build_complex(V, 5)
    for a in range(6):
        assert cx.layer_dim(a) == comb(5, a) * V.dims[5 - a]


@pytest.mark.parametrize("seed", range(10))
def test_euler_characteristic(seed, field):
    V = fuzzed(seed, field, N=5)
    for n in range(V.N + 1):
        cx = build_complex(V, n)
        chain = sum((-1) ** a * cx.layer_dim(a) for a in range(n + 1))
        homology = sum((-1) ** a * homology_dim(V, a, n) for a in range(n + 1))
        assert chain == homology


@pytest.mark.parametrize("seed", range(10))
def test_h0_matches_cokernel_oracle(seed, field):
    V = fuzzed(seed, field, N=5)
    for n in range(V.N + 1):
        assert homology_dim(V, 0, n) == h0_oracle(V, n)


def test_torsion_diagonal(field):
    V = torsion_module(field, 6)
    t = homology_table(V, 6)
    assert all(t.h[a, n] == (1 if a == n else 0) for a in range(7) for n in range(7))


@pytest.mark.parametrize("m", range(4))
def test_free_modules_are_acyclic(m, field):
    t = homology_table(free_module(m, 6, field), 4)
    for n in range(7):
        assert t.h[0, n] == (factorial(m) if n == m else 0)
        assert all(t.h[a, n] == 0 for a in range(1, 5))


def test_homology_is_additive(field):
    V, W = fuzzed(2, field), torsion_module(field, 5)
    tv, tw, ts = (homology_table(X, 4) for X in (V, W, direct_sum(V, W)))
    assert all(ts.h[c] == tv.h[c] + tw.h[c] for c in ts.h)


def test_zero_module_table_is_empty(field):
    t = homology_table(zero_module(field, 3), 4)
    assert list(t.rows(nonzero_only=True)) == []


def test_table_serialization_round_trip(field):
    t = homology_table(fuzzed(5, field), 3)
    assert HomologyTable.from_json(t.to_json()).h == t.h
    assert HomologyTable.from_tsv(t.to_tsv(), t.a_max, t.n_max).h == t.h
    assert t.to_tsv().splitlines()[0] == "a\tn\tdim"


def test_bases_agree_with_ranks(field):
    V = fuzzed(6, field, N=4)
    plain = homology_table(V, 3)
    based = homology_table(V, 3, with_bases=True)
    assert plain.h == based.h
    assert all(based.bases[c].dim == based.h[c] for c in based.h)


def test_window_error_for_n_max(field):
    with pytest.raises(koszul.WindowError) as err:
        homology_table(free_module(1, 3, field), 2, 5)
    assert err.value.required_N == 5


@pytest.mark.parametrize("m", range(3))
def test_cone_and_les_on_free_modules(m, field):
    V = free_module(m, 5, field)
    assert cone_phi_check(V).ok
    assert les_exactness_check(V).ok


@pytest.mark.parametrize("seed", range(8))
def test_cone_and_les_on_fuzzed_modules(seed, field):
    V = fuzzed(seed, field, N=5)
    cone = cone_phi_check(V)
    assert cone.ok, cone.failures()
    les = les_exactness_check(V)
    assert les.ok, les.failures()
    assert {node.n for node in les.nodes} == set(range(V.N))


@pytest.mark.parametrize("mutation", ["flipped", "unsigned"])
def test_wrong_phi_sign_is_caught(monkeypatch, mutation):
    """Negative control: a wrong sign on the inserted point must break the cone square.

    The module needs SV != 0; for the torsion module iota~ vanishes and a global
    sign flip on the first block is a cone automorphism.
    """
    original = koszul.sorted_wedge_sign

    def mutated(values, n=None):
        idx, sign = original(values, n)
        return idx, (-sign if mutation == "flipped" else 1)

    V = free_module(1, 4, QQ)
    assert cone_phi_check(V).ok
    monkeypatch.setattr(koszul, "sorted_wedge_sign", mutated)
    broken = cone_phi_check(V)
    assert not broken.ok
    assert any(c.square_commutes is False for c in broken.failures())


def test_dropped_phi_block_is_caught(monkeypatch):
    """Negative control: phi without its shifted block is not bijective."""
    original = koszul._phi_parts

    def half(c1, c2, T, a):
        P1, P2 = original(c1, c2, T, a)
        return T.field.zeros(*P1.shape), P2

    monkeypatch.setattr(koszul, "_phi_parts", half)
    V = fuzzed(1, FP, N=4)
    assert not cone_phi_check(V).ok


@pytest.mark.parametrize("seed", range(6))
def test_sparse_rows_match_dense_differential(seed):
    V = fuzzed(seed, QQ, N=5)
    for n in range(V.N + 1):
        cx = build_complex(V, n)
        for a in range(1, n + 1):
            D = cx.d(a)
            rows = cx.sparse_rows(a)
            dense = [{j: x for j, x in enumerate(line) if x} for line in D.tolist()]
            assert rows == dense
