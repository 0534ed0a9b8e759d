"""Acceptance criteria 1-10, one pass/fail line each.

Every rank is computed under the ``both`` backend, which runs Gauss and
Bareiss side by side and raises on disagreement.  The fuzz corpus is built
once and shared by criteria 3-9.  Run ``python tests/test_acceptance.py``
for the lines alone; under pytest they appear in the terminal summary.
"""

import random
import sys
import time
from collections import Counter
from functools import lru_cache
from math import factorial
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from fihom.exactla import prime_field, rank_stats, use_backend
from fihom.fimodule import free_module
from fihom.fuzz import FuzzParams, fit_window, random_presentation, run_case
from fihom.invariants import THEOREM_GROUPS
from fihom.koszul import cone_phi_check, homology_table, les_exactness_check

from conftest import QQ, torsion_module

FP = prime_field(32003)
SEED = 7
CORPUS = 500
CHAIN_CASES = 100
PARAMS = FuzzParams(max_relation_degree=3)
SUITE_LIMIT = 600.0

RESULTS: dict[int, tuple[bool, str, float, float | None]] = {}
_started = time.perf_counter()
_stats_before = Counter(rank_stats)


def record(n: int, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> None:
    RESULTS[n] = (ok, detail, elapsed, limit)


def line(n: int, elapsed: float | None = None) -> str:
    if n not in RESULTS:
        return f"criterion {n:2d}: FAIL  not run"
    ok, detail, measured, limit = RESULTS[n]
    elapsed = measured if elapsed is None else elapsed
    ok = ok and (limit is None or elapsed < limit)
    timing = f"{elapsed:.1f}s" + (f", limit {limit:.0f}s" if limit is not None else "")
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail} [{timing}]"


def presentation(index: int):
    return random_presentation(random.Random(f"{SEED}:{index}"), PARAMS)


@lru_cache(maxsize=None)
def corpus():
    """The theorem suite on every fuzzed presentation, with escalation up to N = 8."""
    t0 = time.perf_counter()
    cases = []
    with use_backend("both"):
        for i in range(CORPUS):
            study, results = run_case(
                presentation(i), FP, "suite", 4, 7, 8, {"seed": SEED, "index": i},
                budget=2000, escalation_budget=8000,
            )
            cases.append((study, results))
    return cases, time.perf_counter() - t0


def verdicts(ids) -> Counter:
    cases, _ = corpus()
    return Counter(r.verdict.value for _, results in cases for r in results if r.theorem in ids)


def fmt(counts: Counter) -> str:
    return " ".join(f"{v}={counts.get(v, 0)}" for v in ("PASS", "UNCERTIFIED", "FAIL"))


def group_criterion(n: int, ids, label: str) -> bool:
    t0 = time.perf_counter()
    counts = verdicts(ids)
    ok = counts.get("FAIL", 0) == 0 and counts.get("PASS", 0) > 0
    record(n, ok, f"{label}: {fmt(counts)}", time.perf_counter() - t0)
    return ok


# criteria --------------------------------------------------------------------------


def test_criterion_1_torsion_diagonal():
    t0 = time.perf_counter()
    with use_backend("both"):
        t = homology_table(torsion_module(QQ, 8), 8)
    wrong = [(a, n) for a in range(9) for n in range(9) if t.h[a, n] != (1 if a == n else 0)]
    elapsed = time.perf_counter() - t0
    record(1, not wrong, f"k at degree 0, N=8, wrong cells: {len(wrong)}", elapsed, 1.0)
    assert not wrong and elapsed < 1.0


def test_criterion_2_free_modules_acyclic():
    t0 = time.perf_counter()
    wrong = []
    with use_backend("both"):
        for m in range(4):
            t = homology_table(free_module(m, 8, QQ), 8)
            for a in range(9):
                for n in range(9):
                    expect = factorial(m) if (a, n) == (0, m) else 0
                    if t.h[a, n] != expect:
                        wrong.append((m, a, n))
    elapsed = time.perf_counter() - t0
    record(2, not wrong, f"M(0..3), N=8, wrong cells: {len(wrong)}", elapsed, 10.0)
    assert not wrong and elapsed < 10.0


def chain_corpus():
    yield from (free_module(m, 7, QQ) for m in range(3))
    for i in range(CHAIN_CASES):
        yield fit_window(presentation(i), FP, 7, 4, 2000)


def test_criterion_3_cone():
    t0 = time.perf_counter()
    modules = cells = bad = 0
    with use_backend("both"):
        for V in chain_corpus():
            report = cone_phi_check(V)
            modules += 1
            cells += len(report.cells)
            bad += len(report.failures())
    elapsed = time.perf_counter() - t0
    record(3, bad == 0, f"{modules} modules, {cells} cone cells, failures: {bad}", elapsed, 120.0)
    assert bad == 0 and modules == 3 + CHAIN_CASES and elapsed < 120.0


def test_criterion_4_les():
    t0 = time.perf_counter()
    modules = nodes = bad = 0
    with use_backend("both"):
        for V in chain_corpus():
            report = les_exactness_check(V)
            modules += 1
            nodes += len(report.nodes)
            bad += len(report.failures())
    elapsed = time.perf_counter() - t0
    record(4, bad == 0, f"{modules} modules, {nodes} sequence nodes, inexact: {bad}", elapsed, 180.0)
    assert bad == 0 and modules == 3 + CHAIN_CASES and elapsed < 180.0


def test_criterion_5_hd_bound():
    cases, elapsed = corpus()
    certified = violations = 0
    for study, _ in cases:
        m, c = study.refined, study.bounds.reg_bound
        for a in range(1, 5):
            hd = m.hd(a)
            if hd.certified:
                certified += 1
                violations += hd.value > c + a
    counts = verdicts({"hd-bound"})
    ok = violations == 0 and counts.get("FAIL", 0) == 0 and len(cases) >= 500
    windows = Counter(study.N for study, _ in cases)
    detail = (f"{len(cases)} presentations, {certified} certified hd values, violations: {violations}; "
              f"windows {dict(sorted(windows.items()))}")
    record(5, ok, detail, elapsed, 300.0)
    assert ok and elapsed < 300.0


def test_criterion_6_torsion_and_tower_bounds():
    ids = {"td-bound", *THEOREM_GROUPS["derivative"], *THEOREM_GROUPS["shift"]}
    assert group_criterion(6, ids, "td and tower bounds")


def test_criterion_7_shift_acyclicity():
    assert group_criterion(7, {"shift-acyclic", "N-bound"}, "shift acyclicity and N(V)")


def test_criterion_8_monotonicity():
    assert group_criterion(8, set(THEOREM_GROUPS["monotonicity"]), "monotonicity and stabilization")


def test_criterion_9_li_yu():
    assert group_criterion(9, set(THEOREM_GROUPS["li-yu"]), "Li-Yu reduction")


def test_criterion_10_backends_agree():
    corpus()
    elapsed = time.perf_counter() - _started
    delta = Counter(rank_stats)
    delta.subtract(_stats_before)
    both, mismatch = delta["both"], delta["mismatch"]
    # every acceptance rank went through both eliminations
    single = delta["gauss"] + delta["bareiss"]
    ok = both > 0 and mismatch == 0 and single == 0
    detail = f"{both} ranks under Gauss and Bareiss, mismatches: {mismatch}, single-backend ranks: {single}"
    record(10, ok, detail, elapsed, SUITE_LIMIT)
    assert ok and elapsed < SUITE_LIMIT


CRITERIA = [
    test_criterion_1_torsion_diagonal,
    test_criterion_2_free_modules_acyclic,
    test_criterion_3_cone,
    test_criterion_4_les,
    test_criterion_5_hd_bound,
    test_criterion_6_torsion_and_tower_bounds,
    test_criterion_7_shift_acyclicity,
    test_criterion_8_monotonicity,
    test_criterion_9_li_yu,
    test_criterion_10_backends_agree,
]


def summary_lines(session_elapsed: float | None = None) -> list[str]:
    """The ten criterion lines; criterion 10 is timed over the whole session when given."""
    return [line(n, session_elapsed if n == 10 else None) for n in range(1, 11)]


if __name__ == "__main__":
    for test in CRITERIA:
        try:
            test()
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(": PASS" in line for line in summary_lines()) else 1)
