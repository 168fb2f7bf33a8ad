import math

import numpy as np
import pytest

from credalscore import (CgOptions, Frame, LinearConstraint, LpProblem, RandVar, cg_minimize,
                         from_constraints, lp_solve, minimize_1d, vacuous)
from credalscore.errors import ValidationError
from credalscore.optim import simplex_solve

from conftest import frame_of, random_polytope
from oracles import gibbs_maxent, scipy_lp


def test_lp_min_over_simplex():
    sol = lp_solve(LpProblem([1.0, 0.0, 0.0]), "min")
    assert sol.optimal and sol.value == pytest.approx(0.0)
    assert sol.point[0] == pytest.approx(0.0)


def test_lp_max_with_bound():
    sol = lp_solve(LpProblem([1.0, 0.0], [([1.0, 0.0], "<=", 0.6)]), "max")
    assert sol.value == pytest.approx(0.6, abs=1e-12)


def test_lp_infeasible():
    rows = [([1.0, 0.0], ">=", 0.7), ([1.0, 0.0], "<=", 0.2)]
    sol = lp_solve(LpProblem([0.3, 0.1], rows))
    assert sol.status == "infeasible" and sol.point is None


def test_bland_terminates_on_beale_cycling_example():
    # Beale's instance cycles under the textbook largest-coefficient rule
    c = np.array([-0.75, 150.0, -0.02, 6.0])
    A = np.array([[0.25, -60.0, -0.04, 9.0],
                  [0.5, -90.0, -0.02, 3.0],
                  [0.0, 0.0, 1.0, 0.0]])
    b = np.array([0.0, 0.0, 1.0])
    status, x, value = simplex_solve(c, A, b)
    assert status == "optimal"
    assert value == pytest.approx(-0.05, abs=1e-12)


def test_lp_matches_vertex_brute_force(rng):
    for _ in range(60):
        k = random_polytope(rng)
        c = rng.normal(size=k.frame.n)
        best = min(v.p @ c for v in k.vertices())
        assert k.lp(c, "min").value == pytest.approx(best, abs=1e-8)
        worst = max(v.p @ c for v in k.vertices())
        assert k.lp(c, "max").value == pytest.approx(worst, abs=1e-8)


def test_lp_matches_highs(rng):
    for _ in range(40):
        k = random_polytope(rng)
        A, b = k._rows
        c = rng.normal(size=k.frame.n)
        assert k.lp(c).value == pytest.approx(scipy_lp(c, A, b), abs=1e-8)


def test_minimize_1d_examples():
    assert abs(minimize_1d(lambda x: x * x, -1, 1, 1e-10)) <= 1e-10
    assert abs(minimize_1d(lambda x: (x - 0.3) ** 2, 0, 1, 1e-10) - 0.3) <= 1e-10

    def neg_entropy(x):
        return x * math.log(x) + (1 - x) * math.log(1 - x)

    assert abs(minimize_1d(neg_entropy, 0, 1, 1e-10) - 0.5) <= 1e-8


def test_minimize_1d_with_derivative():
    x = minimize_1d(None, 0, 1, 1e-14, df=lambda x: 2 * (x - 0.3))
    assert abs(x - 0.3) <= 1e-14
    # minimizer at the boundary
    assert minimize_1d(None, 0, 1, 1e-12, df=lambda x: 1.0) <= 1e-12


def test_minimize_1d_rejects_bad_interval():
    with pytest.raises(ValidationError):
        minimize_1d(lambda x: x, 1.0, 1.0)


def test_cg_options_validation():
    with pytest.raises(ValidationError):
        CgOptions(gap_tol=0)
    with pytest.raises(ValidationError):
        CgOptions(max_iter=0)


def _sq(p):
    return float(p @ p)


def _negent(p):
    nz = p > 0
    return float(np.sum(p[nz] * np.log(p[nz])))


def test_cg_min_norm_point():
    q, gap = cg_minimize(_sq, lambda p: 2 * p, vacuous(frame_of(4)))
    assert np.allclose(q.p, 0.25, atol=1e-8) and gap <= 1e-8


def test_cg_maxent_simplex():
    q, gap = cg_minimize(_negent, lambda p: np.log(p) + 1, vacuous(frame_of(3)))
    assert np.allclose(q.p, 1 / 3, atol=1e-6)


def test_cg_gibbs_against_dual_oracle():
    F = frame_of(3)
    k = from_constraints(F, [LinearConstraint.expectation(RandVar(F, [0, 1, 2]), "==", 1.5)])
    q, gap = cg_minimize(_negent, lambda p: np.log(p) + 1, k)
    assert np.allclose(q.p, gibbs_maxent([0, 1, 2], 1.5), atol=1e-6)
    assert gap <= 1e-8


def test_cg_gap_bounds_suboptimality():
    F = frame_of(4)
    x = RandVar(F, [0, 1, 2, 3])
    k = from_constraints(F, [LinearConstraint.expectation(x, "==", 2.2)])
    q_star = gibbs_maxent([0, 1, 2, 3], 2.2)
    q, gap = cg_minimize(_negent, lambda p: np.log(p) + 1, k, CgOptions(gap_tol=1e-3))
    assert _negent(q.p) - _negent(q_star) <= gap + 1e-12


def test_cg_eliminates_forced_zero_atoms():
    F = frame_of(3)
    k = from_constraints(F, [LinearConstraint.prob_bound(F.event("c"), "<=", 0.0)])
    q, gap = cg_minimize(_negent, lambda p: np.log(p) + 1, k)
    assert np.allclose(q.p, [0.5, 0.5, 0.0], atol=1e-8)
    assert gap <= 1e-8


def test_cg_iteration_cap_returns_best_iterate():
    F = frame_of(3)
    k = from_constraints(F, [LinearConstraint.expectation(RandVar(F, [0, 1, 2]), "==", 1.5)])
    q, gap = cg_minimize(_negent, lambda p: np.log(p) + 1, k, CgOptions(gap_tol=1e-14, max_iter=2))
    assert gap > 0 and np.isclose(q.p.sum(), 1.0)
