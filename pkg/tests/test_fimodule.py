import random
from math import perm

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fihom.exactla import kernel_basis, rank
from fihom.fimodule import (
    FIMorphism,
    Presentation,
    Relation,
    RelationTerm,
    WindowError,
    derivative_kernel,
    direct_sum,
    free_module,
    from_presentation,
    iota,
    iterated_shift,
    relation_span,
    shift,
    sub_generated_below,
    validate,
    zero_module,
)
from fihom.fincat import Injection, compose_injections, enumerate_injections

from conftest import FP, QQ, small_presentation, torsion_module


def random_injection(rng, m, n):
    return Injection(m, n, tuple(rng.sample(range(1, n + 1), m)))


def fuzzed_module(seed, field, N=5):
    return from_presentation(small_presentation(seed), field, N)[0]


@pytest.mark.parametrize("m", range(4))
def test_free_module_dimensions(m, field):
    V = free_module(m, 6, field)
    assert V.dims == [perm(n, m) for n in range(7)]
    assert validate(V) == []


def test_free_module_acts_by_composition(field):
    V = free_module(2, 4, field)
    basis = enumerate_injections(2, 3)
    f = Injection(3, 4, (4, 1, 3))
    M = V.induced_map(f)
    targets = enumerate_injections(2, 4)
    for col, g in enumerate(basis):
        image = compose_injections(f, g)
        expect = [field.one() if h == image else field.zero() for h in targets]
        assert [M[r, col] for r in range(len(targets))] == expect


@pytest.mark.parametrize("seed", range(12))
def test_fuzzed_modules_are_valid(seed, field):
    assert validate(fuzzed_module(seed, field)) == []


@pytest.mark.parametrize("seed", range(6))
def test_functoriality_on_composable_pairs(seed):
    """V(g o f) = V(g) V(f) on 200 composable pairs."""
    V = fuzzed_module(seed, FP, N=5)
    f_ = V.field
    rng = random.Random(seed)
    for _ in range(200):
        c = rng.randint(0, V.N)
        b = rng.randint(0, c)
        a = rng.randint(0, b)
        f, g = random_injection(rng, a, b), random_injection(rng, b, c)
        lhs = V.induced_map(compose_injections(g, f))
        rhs = f_.mul(V.induced_map(g), V.induced_map(f))
        assert f_.equal(lhs, rhs)


@pytest.mark.parametrize("seed", range(6))
def test_induced_map_ignores_complement_order(seed, field):
    V = fuzzed_module(seed, field, N=5)
    rng = random.Random(seed)
    for _ in range(30):
        n = rng.randint(0, V.N)
        f = random_injection(rng, rng.randint(0, n), n)
        rest = sorted(set(range(1, n + 1)) - set(f.image))
        rng.shuffle(rest)
        assert field.equal(V.induced_map(f), V.induced_map(f, rest))


@pytest.mark.parametrize("seed", range(6))
def test_shift_is_precomposition_with_the_added_point(seed):
    """(SV)(f) = V(f extended by the added point, sent to the last position)."""
    V = fuzzed_module(seed, FP, N=5)
    SV = shift(V)
    rng = random.Random(seed)
    for _ in range(40):
        b = rng.randint(0, SV.N)
        f = random_injection(rng, rng.randint(0, b), b)
        extended = Injection(f.m + 1, f.n + 1, f.image + (f.n + 1,))
        assert FP.equal(SV.induced_map(f), V.induced_map(extended))


def test_iota_is_a_morphism(field):
    V = fuzzed_module(3, field)
    assert iota(V).violations() == []


@pytest.mark.parametrize("m", range(1, 4))
def test_derivative_of_free_module(m, field):
    # D M(m) is m copies of M(m-1) and M(m) is torsion free
    DV, KV = derivative_kernel(free_module(m, 6, field))
    assert DV.dims == [m * perm(n, m - 1) for n in range(6)]
    assert not any(KV.dims)


@pytest.mark.parametrize("seed", range(10))
def test_shift_and_derivative_commute_dimensionwise(seed, field):
    V = fuzzed_module(seed, field, N=6)
    DV, _ = derivative_kernel(V)
    SDV = shift(DV)
    DSV, _ = derivative_kernel(shift(V))
    assert SDV.dims == DSV.dims


@pytest.mark.parametrize("seed", range(12))
def test_torsion_kernel_matches_brute_force(seed, field):
    """KV_n is the set of vectors killed by every injection [n] -> [n+1]."""
    V = fuzzed_module(seed, field, N=5)
    _, KV = derivative_kernel(V)
    for n in range(V.N):
        if not V.dims[n]:
            assert KV.dims[n] == 0
            continue
        stacked = np.concatenate([V.induced_map(f) for f in enumerate_injections(n, n + 1)], axis=0)
        assert KV.dims[n] == kernel_basis(stacked, field).shape[1]


def test_torsion_module_shape(field):
    V = torsion_module(field, 4)
    assert V.dims == [1, 0, 0, 0, 0]
    DV, KV = derivative_kernel(V)
    assert KV.dims == [1, 0, 0, 0]
    assert not any(DV.dims)
    assert not any(shift(V).dims)


def test_window_errors_name_the_required_degree(field):
    V = free_module(1, 3, field)
    with pytest.raises(WindowError) as err:
        V.induced_map(Injection.standard(1, 5))
    assert err.value.required_N == 5
    with pytest.raises(WindowError) as err:
        shift(zero_module(field, 0))
    assert err.value.required_N == 1
    assert iterated_shift(V, 2).N == 1


@pytest.mark.parametrize("seed", range(8))
def test_sub_generated_below(seed, field):
    V = fuzzed_module(seed, field)
    r = 2
    U, W = sub_generated_below(V, r)
    assert [u + w for u, w in zip(U.dims, W.dims)] == V.dims
    assert U.dims[:r] == V.dims[:r]
    assert not any(W.dims[:r])
    assert validate(U) == [] and validate(W) == []


def test_direct_sum_and_presentation_checks(field):
    S = direct_sum(free_module(0, 3, field), free_module(1, 3, field))
    assert S.dims == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        Presentation((1,), (Relation(2, (RelationTerm(0, Injection(0, 2, ()), 1),)),))


@given(st.integers(0, 10_000))
def test_quotient_dimension_is_corank_of_relations(seed):
    p = small_presentation(seed)
    V, k, d = from_presentation(p, FP, 4)
    assert validate(V) == []
    assert k == p.k and d == p.d
    P = from_presentation(Presentation(p.generator_degrees), FP, 4)[0]
    for n in range(5):
        assert V.dims[n] == P.dims[n] - rank(relation_span(p, n, FP), FP)
    assert isinstance(iota(V), FIMorphism)
