import math

import numpy as np
import pytest

from credalscore import (Dist, EmptySetError, LinearConstraint, PayoffMatrix, RandVar,
                         decisional_maxmin, decisional_score, from_constraints, game_bounds,
                         intersect, is_empty, log_score, min_score_estimate, quadratic_score,
                         self_score_H, singleton, vacuous)
from credalscore.errors import ValidationError

from conftest import frame_of, random_polytope
from oracles import gibbs_maxent

F2, F3 = frame_of(2), frame_of(3)
IDENT = PayoffMatrix.from_array(np.eye(2))


def test_maxent_of_simplex():
    est = min_score_estimate(vacuous(F3), log_score())
    assert np.allclose(est.q.p, 1 / 3, atol=1e-8)
    assert est.h_value == pytest.approx(-math.log(3), abs=1e-12)


def test_quadratic_projection_on_half_interval():
    k = from_constraints(F2, [LinearConstraint.prob_bound(F2.event("a"), ">=", 0.5)])
    est = min_score_estimate(k, quadratic_score())
    assert np.allclose(est.q.p, [0.5, 0.5], atol=1e-8)
    assert est.h_value == pytest.approx(0.5, abs=1e-8)


def test_gibbs_mean_one_and_a_half():
    k = from_constraints(F3, [LinearConstraint.expectation(RandVar(F3, [0, 1, 2]), "==", 1.5)])
    est = min_score_estimate(k, log_score())
    oracle = gibbs_maxent([0, 1, 2], 1.5)
    # frozen from the dual bisection oracle
    assert np.allclose(oracle, [0.11620406, 0.26759188, 0.61620406], atol=1e-8)
    assert np.allclose(est.q.p, oracle, atol=1e-6)
    assert est.h_value == pytest.approx(float(oracle @ np.log(oracle)), abs=1e-6)
    assert est.certificate_gap <= 1e-8


def test_min_score_rejects_decisional_and_empty():
    with pytest.raises(ValidationError, match="decisional_maxmin"):
        min_score_estimate(vacuous(F2), decisional_score(IDENT))
    empty = from_constraints(F2, [LinearConstraint.prob_bound(F2.event("a"), ">=", 0.7),
                                  LinearConstraint.prob_bound(F2.event("a"), "<=", 0.2)])
    with pytest.raises(EmptySetError):
        min_score_estimate(empty, log_score())
    with pytest.raises(EmptySetError):
        game_bounds(empty, log_score())


def test_game_bounds_examples():
    gb = game_bounds(vacuous(F2), log_score())
    assert gb.lower == pytest.approx(-math.log(2), abs=1e-9)
    assert gb.upper == pytest.approx(-math.log(2), abs=1e-9)
    P = Dist(F3, [0.2, 0.3, 0.5])
    for rule in (log_score(), quadratic_score(),
                 decisional_score(PayoffMatrix.from_array([[1, 0, 2], [0, 3, 1]]))):
        gb = game_bounds(singleton(P), rule)
        H = self_score_H(rule, P)
        assert gb.lower == pytest.approx(H, abs=1e-8) and gb.upper == pytest.approx(H, abs=1e-8)
    gb = game_bounds(vacuous(F2), decisional_score(IDENT))
    assert (gb.lower, gb.upper) == pytest.approx((0.5, 0.5), abs=1e-12)


def test_decisional_maxmin_examples():
    w, v = decisional_maxmin(vacuous(F2), IDENT)
    assert np.allclose(w, [0.5, 0.5]) and v == pytest.approx(0.5)
    k = from_constraints(F2, [LinearConstraint.prob_bound(F2.event("a"), ">=", 0.6),
                              LinearConstraint.prob_bound(F2.event("a"), "<=", 0.8)])
    w, v = decisional_maxmin(k, IDENT)
    assert np.allclose(w, [1.0, 0.0]) and v == pytest.approx(0.6)
    single = PayoffMatrix(("only",), [[2.0, -1.0]])
    w, v = decisional_maxmin(k, single)
    assert np.allclose(w, [1.0]) and v == pytest.approx(min(0.6 * 2 - 0.4, 0.8 * 2 - 0.2))


def test_decisional_game_value_matches_pure_enumeration(rng):
    # against mixed nature strategies the maxmin is at least the best pure action
    for _ in range(40):
        k = random_polytope(rng)
        U = rng.normal(size=(3, k.frame.n))
        w, v = decisional_maxmin(k, PayoffMatrix.from_array(U))
        V = np.array([x.p for x in k.vertices()])
        M = U @ V.T
        assert v >= M.min(axis=1).max() - 1e-9
        assert v == pytest.approx((w @ M).min(), abs=1e-9)
        gb = game_bounds(k, decisional_score(PayoffMatrix.from_array(U)))
        assert gb.lower == pytest.approx(gb.upper, abs=1e-8)


def test_minimax_certificate_on_random_polytopes(rng):
    for _ in range(25):
        k = random_polytope(rng)
        for rule in (log_score(), quadratic_score()):
            est = min_score_estimate(k, rule)
            assert -1e-8 <= est.certificate_gap <= 1e-6
            gb = game_bounds(k, rule)
            assert gb.upper - gb.lower <= 1e-6


def test_upper_bound_below_every_vertex_value(rng):
    for _ in range(25):
        k = random_polytope(rng)
        for rule in (log_score(), quadratic_score()):
            gb = game_bounds(k, rule)
            for v in k.vertices():
                assert gb.upper <= self_score_H(rule, v) + 1e-8


def test_value_of_information_on_nested_sets(rng):
    for _ in range(25):
        outer = random_polytope(rng)
        inner = intersect(outer, random_polytope(rng, n=outer.frame.n))
        if is_empty(inner):
            continue
        rules = [log_score(), quadratic_score(),
                 decisional_score(PayoffMatrix.from_array(rng.normal(size=(3, outer.frame.n))))]
        for rule in rules:
            a, b = game_bounds(inner, rule), game_bounds(outer, rule)
            assert a.upper >= b.upper - 1e-8
            assert a.lower >= b.lower - 1e-8


def test_singleton_estimate_is_the_member(rng):
    for _ in range(20):
        n = int(rng.integers(2, 6))
        P = Dist(frame_of(n), rng.dirichlet(np.ones(n)))
        for rule in (log_score(), quadratic_score()):
            assert np.max(np.abs(min_score_estimate(singleton(P), rule).q.p - P.p)) <= 1e-8


def test_permutation_equivariance():
    from credalscore import Frame
    for atoms in (("a", "b", "c", "d"), ("d", "b", "a", "c")):
        est = min_score_estimate(vacuous(Frame(atoms)), log_score())
        assert np.allclose(est.q.p, 0.25, atol=1e-8)
