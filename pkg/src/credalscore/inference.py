"""Min-score estimation and the game against nature.

For a knowledge set ``K`` and score rule ``S`` the value of knowing ``K``
is bracketed by

    max_Q min_P G(P, Q)  <=  V(K)  <=  min_P H(P)

with ``P`` ranging over ``K``.  For strictly proper scores both bounds are
attained by the member of ``K`` minimizing ``H``; for decisional scores
both sides are values of a finite matrix game between the analyst's
actions and the vertices of ``K``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .credal import CredalSet, is_empty
from .errors import EmptySetError, ValidationError
from .frame import Dist
from .optim import CgOptions, cg_minimize, simplex_solve
from .scoring import DECISIONAL, LOG, QUADRATIC, PayoffMatrix, ScoreRule, score_vector, self_score


@dataclass(frozen=True)
class Estimate:
    q: Dist
    h_value: float
    certificate_gap: float


@dataclass(frozen=True)
class GameBounds:
    lower: float
    upper: float


def _require_nonempty(k: CredalSet) -> None:
    if is_empty(k):
        raise EmptySetError("empty knowledge set")


def _objective(rule: ScoreRule):
    if rule.kind == LOG:
        def f(p):
            nz = p > 0
            return float(np.sum(p[nz] * np.log(p[nz])))

        def grad(p):
            return np.log(p) + 1.0
    elif rule.kind == QUADRATIC:
        def f(p):
            return float(p @ p)

        def grad(p):
            return 2.0 * p
    else:
        raise ValidationError("use decisional_maxmin for decisional scores")
    return f, grad


def worst_case_score(k: CredalSet, rule: ScoreRule, q: np.ndarray) -> float:
    """``min_{P in K} G(P, q)`` by linear programming (G is linear in P)."""
    s = score_vector(rule, q)
    # atoms outside the support of q are forced to zero mass over K, so any
    # finite coefficient there gives the same optimum
    s = np.where(np.isfinite(s), s, 0.0)
    sol = k.lp(s, "min")
    if not sol.optimal:
        raise EmptySetError("empty knowledge set")
    return sol.value


def min_score_estimate(k: CredalSet, rule: ScoreRule, opts: CgOptions = CgOptions()) -> Estimate:
    """The member of ``k`` minimizing ``H``; maximum entropy for the log score.

    ``certificate_gap = H(q) - min_P G(P, q)`` is computed independently of
    the optimizer by an LP; it bounds both the suboptimality of ``q`` and
    the distance between the two game bounds.
    """
    if rule.kind == DECISIONAL:
        raise ValidationError("use decisional_maxmin for decisional scores")
    _require_nonempty(k)
    f, grad = _objective(rule)
    q, _ = cg_minimize(f, grad, k, opts)
    h = self_score(rule, q.p)
    gap = h - worst_case_score(k, rule, q.p)
    return Estimate(q, h, gap)


def _game_value(M: np.ndarray) -> tuple[np.ndarray, float]:
    """Row player's maximin strategy and value for payoff matrix ``M``.

    Solved as ``max t  s.t.  t <= (w @ M)_j, w in simplex``; payoffs are
    shifted so the value variable can be taken non-negative.
    """
    m, n = M.shape
    shift = M.min()
    Ms = M - shift
    # variables: w_1..w_m, t
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-Ms.T, np.ones((n, 1))])
    A_eq = np.zeros((1, m + 1))
    A_eq[0, :m] = 1.0
    status, x, val = simplex_solve(c, A_ub, np.zeros(n), A_eq, np.array([1.0]))
    w = np.maximum(x[:m], 0.0)
    w /= w.sum()
    return w, float((w @ M).min())


def _minimax_value(M: np.ndarray) -> float:
    """``min_lambda max_a (M @ lambda)_a`` over the column simplex."""
    m, n = M.shape
    shift = M.min()
    Ms = M - shift
    # variables: lambda_1..lambda_n, t ; minimize t s.t. M lambda <= t
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([Ms, -np.ones((m, 1))])
    A_eq = np.zeros((1, n + 1))
    A_eq[0, :n] = 1.0
    status, x, val = simplex_solve(c, A_ub, np.zeros(m), A_eq, np.array([1.0]))
    lam = np.maximum(x[:n], 0.0)
    lam /= lam.sum()
    return float((M @ lam).max())


def _vertex_payoffs(k: CredalSet, u: PayoffMatrix) -> np.ndarray:
    if u.n_atoms != k.frame.n:
        raise ValidationError("payoff matrix width differs from frame size")
    V = np.array([v.p for v in k.vertices()])
    return u.u @ V.T  # actions x vertices


def decisional_maxmin(k: CredalSet, u: PayoffMatrix) -> tuple[np.ndarray, float]:
    """Gamma-maximin mixed action against the vertices of ``k``.

    Returns the action weights and the guaranteed expected payoff.  A pure
    optimum comes back as a one-hot weight vector.
    """
    _require_nonempty(k)
    return _game_value(_vertex_payoffs(k, u))


def game_bounds(k: CredalSet, rule: ScoreRule, opts: CgOptions = CgOptions()) -> GameBounds:
    """Lower and upper bound on the value of knowing ``k``."""
    _require_nonempty(k)
    if rule.kind == DECISIONAL:
        M = _vertex_payoffs(k, rule.payoff)
        _, lower = _game_value(M)
        upper = _minimax_value(M)
        return GameBounds(lower, upper)
    est = min_score_estimate(k, rule, opts)
    return GameBounds(est.h_value - est.certificate_gap, est.h_value)
