import pytest

from rotalg import FiniteLattice, ResiduatedAlgebra, load

# single-letter names used for the rotated Figure 1/2 elements
Z, F, T, K = "(a,⊥)", "(⊥,⊥)", "(⊥,b)", "(⊥,a)"
Y = "(b,⊥)"


def chain(n, prefix="c"):
    labels = [f"{prefix}{i}" for i in range(n)]
    return FiniteLattice.from_covers(labels, list(zip(labels, labels[1:])))


def godel_chain(n):
    return ResiduatedAlgebra(chain(n), name=f"C{n}")


def diamond():
    return FiniteLattice.from_covers(["⊥", "p", "q", "⊤"],
                                     [("⊥", "p"), ("⊥", "q"), ("p", "⊤"), ("q", "⊤")])


@pytest.fixture
def fig1():
    A, m, _ = load("fig1_godel")
    return A, m


@pytest.fixture
def fig2():
    A, m, _ = load("fig2_godel")
    return A, m


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
