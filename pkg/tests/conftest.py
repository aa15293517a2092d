import sys

import numpy as np
import pytest

from modinv.gf import FieldSpec
from modinv.group_action import general_linear_group, trivial_group
from modinv.poly import PolyRing, Polynomial, monomial_basis

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2), 16: (2, 4)}


def gf(q: int) -> FieldSpec:
    return FieldSpec(*FIELDS[q])


def rand_form(ring: PolyRing, n: int, rng, density: float = 0.7) -> Polynomial:
    terms = {}
    for e in monomial_basis(ring.nvars, n):
        if rng.random() < density:
            terms[e] = int(rng.integers(1, ring.field.q))
    return Polynomial(ring, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def gl22():
    return general_linear_group(gf(2), 2)


@pytest.fixture(scope="session")
def gl32():
    return general_linear_group(gf(3), 2)


@pytest.fixture(scope="session")
def triv2():
    return trivial_group(gf(2), 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
