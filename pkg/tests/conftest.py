import numpy as np
import pytest

from credalscore import Frame, LinearConstraint, from_constraints


def frame_of(n):
    return Frame(tuple("abcdefghijklmnopqrstuvwx"[:n]))


def random_polytope(rng, n=None, n_cons=None):
    """A non-empty credal set: random half-spaces kept feasible at a
    random interior anchor point."""
    n = n or int(rng.integers(2, 6))
    frame = frame_of(n)
    anchor = rng.dirichlet(np.ones(n))
    cons = []
    for _ in range(n_cons if n_cons is not None else int(rng.integers(1, 5))):
        a = rng.normal(size=n)
        slack = rng.uniform(0.0, 0.3)
        cons.append(LinearConstraint(frame, a, "<=", float(a @ anchor + slack)))
    return from_constraints(frame, cons)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_c" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.failed:
        _criteria[name] = "FAIL"
    elif report.when == "call" and name not in _criteria:
        _criteria[name] = "PASS" if report.passed else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    from test_acceptance import TITLES

    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        num = int(name[6:8])
        terminalreporter.write_line(f"criterion {num:2d}  {_criteria[name]}  {TITLES.get(num, name)}")
