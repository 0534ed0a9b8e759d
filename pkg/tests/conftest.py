import random
import sys
import time

import pytest
from hypothesis import settings

from fihom.exactla import RATIONALS, prime_field
from fihom.fimodule import Presentation, Relation, RelationTerm, free_module, from_presentation
from fihom.fincat import Injection
from fihom.fuzz import FuzzParams, random_presentation

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

QQ = RATIONALS
FP = prime_field(32003)
SMALL_P = prime_field(7)
FIELDS = [QQ, FP]


def torsion_presentation() -> Presentation:
    """k in degree 0: one generator of degree 0 killed in degree 1."""
    term = RelationTerm(0, Injection(0, 1, ()), 1)
    return Presentation((0,), (Relation(1, (term,)),), ("g",))


def torsion_module(field, N):
    return from_presentation(torsion_presentation(), field, N)[0]


def free(m, N, field):
    return free_module(m, N, field)


def small_presentation(seed: int, max_relation_degree: int = 3) -> Presentation:
    params = FuzzParams(max_relation_degree=max_relation_degree)
    return random_presentation(random.Random(f"test:{seed}"), params)


@pytest.fixture(params=FIELDS, ids=lambda f: str(f))
def field(request):
    return request.param


def pytest_sessionstart(session):
    session.config._fihom_started = time.perf_counter()


def pytest_terminal_summary(terminalreporter, config):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    elapsed = time.perf_counter() - config._fihom_started
    terminalreporter.section("acceptance criteria")
    for text in acceptance.summary_lines(elapsed):
        terminalreporter.write_line(text)
