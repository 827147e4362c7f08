import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lspace import Domain, HasseDiagram, SetFamily, new_sequence_space


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call":
                continue
            if "test_acceptance" in rep.nodeid:
                rows.append((rep.nodeid.split("::")[-1], outcome.upper()))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, outcome in sorted(rows):
            terminalreporter.write_line(f"{outcome:6s} {name}")

# Eight-concept prerequisite order: two chains A<C<E<G and B<D<F<H tied
# together by A<D, D<F feeding G, with 19 lower sets and 41 basic words.
ORDER8_EDGES = [
    ("A", "C"), ("C", "E"), ("E", "G"),
    ("A", "D"), ("B", "D"), ("D", "F"),
    ("F", "G"), ("F", "H"),
]

ABC_STATES = [
    [], ["A"], ["C"], ["A", "B"], ["A", "C"], ["B", "C"], ["A", "B", "C"]
]


@pytest.fixture(scope="session")
def order8():
    domain = Domain(tuple("ABCDEFGH"))
    return HasseDiagram.from_labels(domain, ORDER8_EDGES)


@pytest.fixture(scope="session")
def abc_domain():
    return Domain(("A", "B", "C"))


@pytest.fixture(scope="session")
def abc_space(abc_domain):
    return new_sequence_space(abc_domain, [("A", "B", "C"), ("C", "B", "A")])


@pytest.fixture(scope="session")
def abc_family(abc_domain):
    return SetFamily.from_labels(abc_domain, ABC_STATES)


@pytest.fixture(scope="session")
def six_concept_space():
    domain = Domain(tuple("ABCDEF"))
    return new_sequence_space(
        domain, [tuple("ABCDEF"), tuple("BDFCAE"), tuple("CBEFAD")]
    )
