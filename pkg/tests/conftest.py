import random

import pytest

from boolxp.model import BooleanFunction, ExplanationProblem


def kappa_i1(x):
    return (x[0] and x[1] and not x[2]) or (x[0] and x[2])


def kappa_i3(x):
    return (x[0] and not x[2]) or (x[1] and x[2])


def kappa_i4(x):
    return (x[0] and x[1] and not x[2]) or (x[0] and x[2] and not x[3]) or (x[1] and x[2] and x[3])


def kappa_i5(x):
    x1, x2, x3, x4 = x
    return ((x1 and x2 and not x3) or (x1 and x3 and not x2) or (x2 and x3 and not x1)) and x4


# (formula, arity, instance point, prediction)
RUNNING = {
    "I1": (kappa_i1, 3, (0, 0, 1), 0),
    "I3": (kappa_i3, 3, (1, 1, 1), 1),
    "I4": (kappa_i4, 4, (0, 0, 1, 1), 0),
    "I5": (kappa_i5, 4, (1, 1, 1, 1), 0),
}


def running_function(name):
    formula, m, _, _ = RUNNING[name]
    return BooleanFunction.from_callable(m, formula)


def running_problem(name):
    _, _, point, _ = RUNNING[name]
    return ExplanationProblem.at(running_function(name), point)


@pytest.fixture(params=sorted(RUNNING))
def running(request):
    return request.param, running_problem(request.param)


@pytest.fixture
def k1_problem():
    return running_problem("I1")


@pytest.fixture
def k4_problem():
    return running_problem("I4")


def random_problem(rng: random.Random, n_max: int, n_min: int = 1) -> ExplanationProblem:
    n = rng.randint(n_min, n_max)
    bits = [rng.getrandbits(1) for _ in range(1 << n)]
    f = BooleanFunction.from_bits(bits)
    point = tuple(rng.getrandbits(1) for _ in range(n))
    return ExplanationProblem.at(f, point)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
