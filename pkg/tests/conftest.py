import pytest

from atomcalc.constructions import (
    cyclic_group_algebra,
    field_extension,
    triangular,
    triangular_modules,
    truncated_polynomial,
)
from atomcalc.core.structure import structure
from atomcalc.linalg import Field

F2 = Field(2)
F3 = Field(3)
QQ = Field(None)

ACCEPTANCE_LINES: list[str] = []


def tri(field=F2):
    return triangular(truncated_polynomial(field, 1))


def simple_by_action(algebra, basis_index):
    """Index of the simple on which the given basis element acts nonzero."""
    st = structure(algebra)
    hits = [i for i, s in enumerate(st.simples) if not s.action[basis_index].is_zero()]
    assert len(hits) == 1
    return hits[0]


@pytest.fixture(scope="session")
def t2():
    return tri(F2)


@pytest.fixture(scope="session")
def t2mods(t2):
    return triangular_modules(t2)


@pytest.fixture(scope="session")
def kx2():
    return truncated_polynomial(F2, 2)


@pytest.fixture(scope="session")
def fixture_algebras():
    """The algebras the acceptance sweep runs over."""
    return {
        "triangular_f2": tri(F2),
        "triangular_q": tri(QQ),
        "kx2_f2": truncated_polynomial(F2, 2),
        "kx3_f3": truncated_polynomial(F3, 3),
        "c2_f2": cyclic_group_algebra(F2, 2),
        "f4_f2": field_extension(F2, [1, 1, 1]),
        "triangular_kx2_f2": triangular(truncated_polynomial(F2, 2)),
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
