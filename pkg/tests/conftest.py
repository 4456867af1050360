import functools

import pytest

from loopgrass.chevalley import build_chevalley, centralizer_of_e, principal_triple
from loopgrass.irreps import build_module
from loopgrass.rootdata import cartan_matrix, langlands_dual, root_system

# outcome lines of the acceptance suite, printed at the end of the session
ACCEPTANCE: dict[str, str] = {}


@functools.lru_cache(maxsize=None)
def dual_setup(label: str):
    """(root system, algebra, triple, centralizer) of the dual algebra for a type label of G."""
    rs = root_system(langlands_dual(cartan_matrix(label)))
    alg = build_chevalley(rs)
    triple = principal_triple(alg)
    return rs, alg, triple, centralizer_of_e(alg, triple)


@functools.lru_cache(maxsize=None)
def algebra_setup(label: str):
    """Same, for the algebra whose own type is ``label``."""
    rs = root_system(label)
    alg = build_chevalley(rs)
    triple = principal_triple(alg)
    return rs, alg, triple, centralizer_of_e(alg, triple)


@functools.lru_cache(maxsize=None)
def module(label: str, lam: tuple):
    rs, alg, _, _ = algebra_setup(label)
    return build_module(alg, lam)


@pytest.fixture
def setup():
    return algebra_setup


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
            terminalreporter.write_line(ACCEPTANCE[key])
