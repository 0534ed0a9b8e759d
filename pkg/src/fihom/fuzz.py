"""Seeded random presentations.

Item ``i`` of a run with seed ``s`` is drawn from ``random.Random(f"{s}:{i}")``
so any single presentation can be regenerated from ``(s, i)`` alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from .exactla import FieldSpec
from .fimodule import Presentation, Relation, RelationTerm, TruncatedFIModule, from_presentation
from .fincat import Injection
from .invariants import BoundCheckResult, PresentationBounds, Study, Verdict, resolve_selector, theorem_suite


@dataclass(frozen=True)
class FuzzParams:
    max_generators: int = 3
    max_generator_degree: int = 3
    max_relations: int = 4
    max_relation_degree: int = 4
    max_terms: int = 3
    coeff_bound: int = 2


@dataclass(frozen=True)
class FuzzCase:
    seed: int
    index: int
    presentation: Presentation

    @property
    def reproduction(self) -> dict:
        return {"seed": self.seed, "index": self.index}


def random_presentation(rng: random.Random, params: FuzzParams = FuzzParams()) -> Presentation:
    degrees = tuple(rng.randint(0, params.max_generator_degree) for _ in range(rng.randint(1, params.max_generators)))
    low = min(degrees)
    relations = []
    for _ in range(rng.randint(0, params.max_relations)):
        if low > params.max_relation_degree:
            break
        e = rng.randint(low, params.max_relation_degree)
        eligible = [g for g, m in enumerate(degrees) if m <= e]
        terms = []
        for _ in range(rng.randint(1, params.max_terms)):
            g = rng.choice(eligible)
            image = tuple(rng.sample(range(1, e + 1), degrees[g]))
            coeff = rng.randint(-params.coeff_bound, params.coeff_bound)
            terms.append(RelationTerm(g, Injection(degrees[g], e, image), coeff))
        relations.append(Relation(e, tuple(terms)))
    labels = tuple(f"g{i}" for i in range(len(degrees)))
    return Presentation(degrees, tuple(relations), labels)


def fuzz_cases(seed: int, count: int, params: FuzzParams = FuzzParams()):
    for i in range(count):
        yield FuzzCase(seed, i, random_presentation(random.Random(f"{seed}:{i}"), params))


def max_layer_dim(V: TruncatedFIModule, n: int) -> int:
    return max(comb(n, a) * V.dims[n - a] for a in range(n + 1))


def fit_window(p: Presentation, field: FieldSpec, n_max: int, n_min: int, budget: int) -> TruncatedFIModule:
    """Build V at the largest N in [n_min, n_max] whose Koszul layers stay within ``budget``."""
    V, _, _ = from_presentation(p, field, n_max)
    return fit_window_from(V, n_min, budget)


def fit_window_from(V: TruncatedFIModule, n_min: int, budget: int) -> TruncatedFIModule:
    N = V.N
    while N > n_min and max_layer_dim(V, N) > budget:
        N -= 1
    return V.truncate(N)


def run_case(
    pres: Presentation,
    field: FieldSpec,
    selector: str,
    a_max: int,
    n_start: int,
    n_cap: int,
    reproduction: dict | None = None,
    budget: int | None = None,
    escalation_budget: int | None = None,
) -> tuple[Study, list[BoundCheckResult]]:
    """Run the checks at window ``n_start``, enlarging it while some bound check is UNCERTIFIED.

    With a ``budget`` the starting window shrinks until every Koszul layer
    fits.  Escalation stops at ``n_cap`` or once the top layer would exceed
    ``escalation_budget`` (default: ``budget``).  Cone and sequence checks
    run once, at the starting window.
    """
    V, _, _ = from_presentation(pres, field, n_start)
    if budget is not None:
        V = fit_window_from(V, min(n_start, 4), budget)
    limit = escalation_budget if escalation_budget is not None else budget
    bounds = PresentationBounds(pres.k, pres.d)
    study = Study(V, bounds, a_max, pres, reproduction)
    results = theorem_suite(study, selector)
    ids, _, _ = resolve_selector(selector)

    def open_count(rs):
        return sum(r.verdict is Verdict.UNCERTIFIED for r in rs if r.theorem in ids)

    N = V.N
    while ids and N < n_cap and open_count(results):
        N += 1
        W, _, _ = from_presentation(pres, field, N)
        if limit is not None and max_layer_dim(W, N) > limit:
            break
        bigger = Study(W, bounds, a_max, pres, reproduction)
        redo = theorem_suite(bigger, ",".join(sorted(ids)))
        if open_count(redo) <= open_count(results):
            study, results = bigger, redo + [r for r in results if r.theorem not in ids]
    return study, results
