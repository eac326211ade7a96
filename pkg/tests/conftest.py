import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eksr import Assignment, Formula, Instance, parse_instance

EXAMPLE1_TEXT = """\
p eksr 4 6 3
-1 -2 3 0
-1 2 -3 0
1 -2 -3 0
-1 2 -4 0
-2 3 -4 0
1 -3 -4 0
s 0000
t 1111
"""


@pytest.fixture(scope="session")
def example1() -> Instance:
    """Six-clause width-3 instance with opt 5/6 (the running example)."""
    return parse_instance(EXAMPLE1_TEXT)


@pytest.fixture(scope="session")
def example1_text() -> str:
    return EXAMPLE1_TEXT


@pytest.fixture(scope="session")
def disjoint_pair() -> Instance:
    """Two variable-disjoint width-3 clauses; endpoints all-ones."""
    f = Formula(6, 3, ((1, 2, 3), (4, 5, 6)))
    return Instance(f, Assignment.ones(6), Assignment.ones(6))


@pytest.fixture(scope="session")
def full_three_var() -> Formula:
    """All 8 sign patterns over 3 variables: max-sat is exactly 7/8."""
    clauses = []
    for t in range(8):
        clauses.append(tuple((v + 1) if not (t >> v) & 1 else -(v + 1) for v in range(3)))
    return Formula(3, 3, tuple(clauses))
