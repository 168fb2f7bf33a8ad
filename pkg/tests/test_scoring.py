import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credalscore import (Dist, PayoffMatrix, ScoreRule, best_action, check_proper,
                         decisional_score, expected_score_G, log_score, quadratic_score, score,
                         self_score_H, uniform)
from credalscore.errors import FrameMismatchError, ValidationError

from conftest import frame_of

F2, F4 = frame_of(2), frame_of(4)
IDENT = PayoffMatrix.from_array(np.eye(2))


def test_score_examples():
    assert score(log_score(), uniform(F2), 0) == pytest.approx(-0.693147, abs=1e-6)
    assert score(quadratic_score(), Dist(F2, [0.8, 0.2]), 0) == pytest.approx(0.92)
    assert score(decisional_score(IDENT), Dist(F2, [0.7, 0.3]), 0) == 1.0


def test_log_score_of_impossible_atom_is_minus_infinity():
    assert score(log_score(), Dist(F2, [1, 0]), 1) == -math.inf
    assert expected_score_G(log_score(), Dist(F2, [0.5, 0.5]), Dist(F2, [1, 0])) == -math.inf
    # zero weight on the impossible atom contributes nothing
    assert expected_score_G(log_score(), Dist(F2, [1, 0]), Dist(F2, [1, 0])) == 0.0


def test_expected_score_examples():
    assert expected_score_G(log_score(), Dist(F2, [1, 0]), uniform(F2)) == pytest.approx(math.log(0.5))
    assert expected_score_G(quadratic_score(), Dist(F2, [1, 0]), Dist(F2, [0.8, 0.2])) == \
        pytest.approx(0.92)
    P = Dist(F4, [0.1, 0.2, 0.3, 0.4])
    for rule in (log_score(), quadratic_score()):
        assert expected_score_G(rule, P, P) == pytest.approx(self_score_H(rule, P), abs=1e-15)


def test_self_score_examples():
    assert self_score_H(log_score(), uniform(F4)) == pytest.approx(-1.386294, abs=1e-6)
    assert self_score_H(quadratic_score(), uniform(F4)) == pytest.approx(0.25)
    assert self_score_H(decisional_score(IDENT), Dist(F2, [0.6, 0.4])) == pytest.approx(0.6)


def test_best_action_examples():
    assert best_action(IDENT, Dist(F2, [0.7, 0.3])) == 0
    assert best_action(IDENT, Dist(F2, [0.5, 0.5])) == 0
    assert best_action(PayoffMatrix.from_array([[1, 0], [0, 3]]), Dist(F2, [0.7, 0.3])) == 1


def test_rule_validation():
    with pytest.raises(ValidationError):
        ScoreRule("decisional")
    with pytest.raises(ValidationError):
        ScoreRule("log", IDENT)
    with pytest.raises(ValidationError):
        ScoreRule("spherical")
    with pytest.raises(FrameMismatchError):
        self_score_H(decisional_score(IDENT), uniform(F4))


@pytest.mark.parametrize("rule", [log_score(), quadratic_score(),
                                  decisional_score(PayoffMatrix.from_array(
                                      np.random.default_rng(3).normal(size=(3, 4))))])
def test_check_proper(rule):
    rep = check_proper(rule, 10_000, seed=7)
    assert rep.violations == 0 and rep.trials == 10_000


def test_check_proper_is_reproducible():
    a = check_proper(quadratic_score(), 500, seed=1)
    b = check_proper(quadratic_score(), 500, seed=1)
    assert a == b


def test_check_proper_detects_improper_rule(monkeypatch):
    # a linear score S(Q, e) = Q(e) is not proper
    import credalscore.scoring as sc
    monkeypatch.setattr(sc, "score_vector", lambda rule, q: np.asarray(q))
    rep = sc.check_proper(quadratic_score(), 200, seed=0)
    assert rep.violations > 0


simplex_pairs = st.integers(2, 6).flatmap(
    lambda n: st.tuples(*[st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)] * 2))


def _norm(v):
    v = np.asarray(v)
    return v / v.sum()


@settings(max_examples=300)
@given(simplex_pairs)
def test_strict_propriety(pair):
    p, q = map(_norm, pair)
    F = frame_of(len(p))
    P, Q = Dist(F, p), Dist(F, q)
    for rule in (log_score(), quadratic_score()):
        G, H = expected_score_G(rule, P, Q), self_score_H(rule, P)
        assert G <= H + 1e-12
        if np.max(np.abs(p - q)) > 1e-6:
            assert G < H


def test_decisional_self_score_is_convex(rng):
    for _ in range(200):
        n = int(rng.integers(2, 6))
        u = PayoffMatrix.from_array(rng.normal(size=(3, n)))
        rule = decisional_score(u)
        F = frame_of(n)
        p, p2 = rng.dirichlet(np.ones(n), size=2)
        lam = rng.uniform()
        mix = Dist(F, lam * p + (1 - lam) * p2)
        assert self_score_H(rule, mix) <= lam * self_score_H(rule, Dist(F, p)) + \
            (1 - lam) * self_score_H(rule, Dist(F, p2)) + 1e-12


def test_best_action_affine_invariance(rng):
    for _ in range(300):
        n = int(rng.integers(2, 6))
        U = rng.normal(size=(4, n))
        q = Dist(frame_of(n), rng.dirichlet(np.ones(n)))
        base = best_action(PayoffMatrix.from_array(U), q)
        assert best_action(PayoffMatrix.from_array(U + rng.normal()), q) == base
        assert best_action(PayoffMatrix.from_array(U * rng.uniform(0.1, 10)), q) == base
