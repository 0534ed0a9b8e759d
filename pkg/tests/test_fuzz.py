import random

import pytest

from fihom.fuzz import FuzzParams, fit_window, fuzz_cases, max_layer_dim, random_presentation, run_case
from fihom.invariants import Verdict

from conftest import FP, QQ


def test_cases_regenerate_from_seed_and_index():
    cases = list(fuzz_cases(11, 20))
    for case in cases:
        again = random_presentation(random.Random(f"{case.seed}:{case.index}"))
        assert again == case.presentation
        assert case.reproduction == {"seed": 11, "index": case.index}
    assert [c.presentation for c in fuzz_cases(11, 20)] == [c.presentation for c in cases]


def test_parameters_are_respected():
    params = FuzzParams(max_generators=2, max_generator_degree=2, max_relations=3, max_relation_degree=3)
    for case in fuzz_cases(5, 200, params):
        p = case.presentation
        assert 1 <= len(p.generator_degrees) <= 2
        assert max(p.generator_degrees) <= 2
        assert len(p.relations) <= 3
        for rel in p.relations:
            assert rel.degree <= 3 and 1 <= len(rel.terms) <= params.max_terms
            assert all(abs(t.coeff) <= params.coeff_bound for t in rel.terms)


def test_fit_window_respects_budget():
    for case in fuzz_cases(2, 30):
        V = fit_window(case.presentation, FP, 7, 3, 500)
        assert 3 <= V.N <= 7
        assert V.N == 3 or max_layer_dim(V, V.N) <= 500


@pytest.mark.parametrize("index", range(12))
def test_rational_sweep_has_no_failures(index):
    case = random_presentation(random.Random(f"21:{index}"), FuzzParams(max_relation_degree=3))
    _, results = run_case(case, QQ, "all", 4, 5, 5, {"seed": 21, "index": index}, budget=600)
    failed = [r.theorem for r in results if r.verdict is Verdict.FAIL]
    assert failed == []


@pytest.mark.parametrize("index", range(40))
def test_prime_field_sweep_has_no_failures(index):
    case = random_presentation(random.Random(f"22:{index}"))
    _, results = run_case(case, FP, "suite", 4, 6, 7, {"seed": 22, "index": index}, budget=1500)
    assert [r.theorem for r in results if r.verdict is Verdict.FAIL] == []
