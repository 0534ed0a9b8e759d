from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from fihom.fincat import (
    CompositionError,
    Injection,
    Permutation,
    ZeroWedge,
    compose_injections,
    count_injections,
    enumerate_injections,
    factor_injection,
    sorted_wedge_sign,
)


@st.composite
def injections(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(0, n))
    image = draw(st.permutations(range(1, n + 1)))[:m]
    return Injection(m, n, tuple(image))


@st.composite
def composable_triples(draw):
    f = draw(injections(max_n=4))
    extra = draw(st.integers(0, 2))
    g_img = draw(st.permutations(range(1, f.n + extra + 1)))[: f.n]
    g = Injection(f.n, f.n + extra, tuple(g_img))
    extra2 = draw(st.integers(0, 2))
    h_img = draw(st.permutations(range(1, g.n + extra2 + 1)))[: g.n]
    return f, g, Injection(g.n, g.n + extra2, tuple(h_img))


def inversions(values):
    return sum(1 for i, j in combinations(range(len(values)), 2) if values[i] > values[j])


def test_injection_validation():
    with pytest.raises(ValueError):
        Injection(2, 3, (1, 1))
    with pytest.raises(ValueError):
        Injection(2, 3, (1, 4))
    with pytest.raises(ValueError):
        Injection(3, 2, (1, 2, 3))


def test_coface_misses_q():
    assert Injection.coface(3, 2).image == (1, 3, 4)
    assert Injection.coface(3, 4).image == Injection.standard(3, 4).image
    with pytest.raises(ValueError):
        Injection.coface(2, 4)


def test_compose_rejects_mismatch():
    with pytest.raises(CompositionError):
        compose_injections(Injection.identity(3), Injection.standard(1, 2))


@given(composable_triples())
def test_composition_is_associative(triple):
    f, g, h = triple
    left = compose_injections(h, compose_injections(g, f))
    right = compose_injections(compose_injections(h, g), f)
    assert left == right


@given(injections())
def test_identity_is_neutral(f):
    assert compose_injections(Injection.identity(f.n), f) == f
    assert compose_injections(f, Injection.identity(f.m)) == f


@given(injections())
def test_factorization_recomposes(f):
    sigma, _ = factor_injection(f)
    values = sigma.one_line()
    assert tuple(values[j - 1] for j in range(1, f.m + 1)) == f.image
    # the complement is filled in increasing order
    assert list(values[f.m:]) == sorted(values[f.m:])


@given(injections(), st.randoms())
def test_factorization_with_given_complement(f, rnd):
    rest = sorted(set(range(1, f.n + 1)) - set(f.image))
    rnd.shuffle(rest)
    sigma, k = factor_injection(f, rest)
    assert k == f.n - f.m
    assert sigma.one_line() == f.image + tuple(rest)


@given(st.permutations(range(1, 7)))
def test_permutation_word_round_trip(values):
    assert Permutation.from_one_line(values).one_line() == tuple(values)


def test_word_reads_as_composite():
    # s1 o s2 sends 1 -> 2, 2 -> 3, 3 -> 1
    assert Permutation(3, (1, 2)).one_line() == (2, 3, 1)


@pytest.mark.parametrize("m,n", [(0, 0), (0, 3), (1, 3), (2, 4), (3, 3), (4, 2)])
def test_enumeration_counts(m, n):
    inj = enumerate_injections(m, n)
    assert len(inj) == count_injections(m, n)
    assert [f.image for f in inj] == sorted(f.image for f in inj)


@given(st.lists(st.integers(1, 9), min_size=0, max_size=6, unique=True))
def test_wedge_sign_is_inversion_parity(values):
    idx, sign = sorted_wedge_sign(values, 9)
    assert idx.subset == tuple(sorted(values))
    assert sign == (-1) ** inversions(values)


def test_wedge_sign_brute_force_small():
    for r in range(5):
        for values in permutations(range(1, 5), r):
            assert sorted_wedge_sign(values, 4)[1] == (-1) ** inversions(values)


def test_repeated_wedge_index_vanishes():
    with pytest.raises(ZeroWedge):
        sorted_wedge_sign((2, 1, 2))
