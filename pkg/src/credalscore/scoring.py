"""Proper scoring rules and the expected-score functionals G and H.

``G(P, Q)`` is the expected score of reporting ``Q`` when ``P`` governs the
outcome; ``H(P) = G(P, P)``.  Scores are rewards (higher is better) and
the logarithmic score uses the natural log, so ``H`` for the log score is
negative Shannon entropy in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import FrameMismatchError, ValidationError
from .frame import Dist, _check_same

LOG = "log"
QUADRATIC = "quadratic"
DECISIONAL = "decisional"


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """Payoffs ``u[a, i]`` for action ``a`` when atom ``i`` obtains."""

    actions: tuple[str, ...]
    u: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.ndim != 2 or u.shape[0] < 1:
            raise ValidationError("payoff matrix must be 2-D with at least one action")
        if len(self.actions) != u.shape[0]:
            raise ValidationError("one action name per payoff row")
        if not np.all(np.isfinite(u)):
            raise ValidationError("payoffs must be finite")
        u.setflags(write=False)
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "u", u)

    @classmethod
    def from_array(cls, u) -> PayoffMatrix:
        u = np.asarray(u, dtype=float)
        return cls(tuple(f"a{i + 1}" for i in range(u.shape[0])), u)

    @property
    def n_atoms(self) -> int:
        return self.u.shape[1]


@dataclass(frozen=True)
class ScoreRule:
    kind: str
    payoff: Optional[PayoffMatrix] = None

    def __post_init__(self):
        if self.kind not in (LOG, QUADRATIC, DECISIONAL):
            raise ValidationError(f"unknown score kind {self.kind!r}")
        if (self.kind == DECISIONAL) != (self.payoff is not None):
            raise ValidationError("a payoff matrix is required for, and only for, decisional scores")

    @property
    def strictly_proper(self) -> bool:
        return self.kind in (LOG, QUADRATIC)


def log_score() -> ScoreRule:
    return ScoreRule(LOG)


def quadratic_score() -> ScoreRule:
    return ScoreRule(QUADRATIC)


def decisional_score(payoff: PayoffMatrix) -> ScoreRule:
    return ScoreRule(DECISIONAL, payoff)


def _check_payoff(rule: ScoreRule, n: int) -> None:
    if rule.kind == DECISIONAL and rule.payoff.n_atoms != n:
        raise FrameMismatchError(
            f"payoff matrix has {rule.payoff.n_atoms} columns, frame has {n} atoms")


# Array-level kernels; the Dist-level API below wraps them.

def score_vector(rule: ScoreRule, q: np.ndarray) -> np.ndarray:
    """``S(q, i)`` for every atom ``i``."""
    q = np.asarray(q, dtype=float)
    if rule.kind == LOG:
        with np.errstate(divide="ignore"):
            return np.log(q)
    if rule.kind == QUADRATIC:
        return 2.0 * q - q @ q
    return rule.payoff.u[_argmax_first(rule.payoff.u @ q)].copy()


def self_score(rule: ScoreRule, p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    if rule.kind == LOG:
        nz = p > 0
        return float(np.sum(p[nz] * np.log(p[nz])))
    if rule.kind == QUADRATIC:
        return float(p @ p)
    return float(np.max(rule.payoff.u @ p))


def expected_score(rule: ScoreRule, p: np.ndarray, q: np.ndarray) -> float:
    s = score_vector(rule, q)
    p = np.asarray(p, dtype=float)
    nz = p > 0  # 0 * (-inf) counts as 0
    return float(np.sum(p[nz] * s[nz]))


def _argmax_first(values: np.ndarray) -> int:
    # lowest index among (numerically) tied maxima
    top = values.max()
    return int(np.flatnonzero(values >= top - 1e-12 * max(1.0, abs(top)))[0])


def score(rule: ScoreRule, q: Dist, atom_index: int) -> float:
    """``S(Q, e)`` for the atom ``e`` with the given index.

    The log score returns ``-inf`` when ``Q`` gives the atom zero mass.
    """
    if not 0 <= atom_index < q.frame.n:
        raise ValidationError(f"atom index {atom_index} out of range")
    _check_payoff(rule, q.frame.n)
    return float(score_vector(rule, q.p)[atom_index])


def expected_score_G(rule: ScoreRule, p: Dist, q: Dist) -> float:
    _check_same(p.frame, q.frame)
    _check_payoff(rule, p.frame.n)
    return expected_score(rule, p.p, q.p)


def self_score_H(rule: ScoreRule, p: Dist) -> float:
    _check_payoff(rule, p.frame.n)
    return self_score(rule, p.p)


def best_action(u: PayoffMatrix, q: Dist) -> int:
    """Index of the action maximizing expected payoff; ties go to the lowest index."""
    if u.n_atoms != q.frame.n:
        raise FrameMismatchError("payoff matrix and distribution disagree on atom count")
    return _argmax_first(u.u @ q.p)


@dataclass(frozen=True)
class ProperReport:
    trials: int
    violations: int
    max_violation: float


def check_proper(rule: ScoreRule, trials: int = 10_000, seed: int = 0,
                 sizes: Sequence[int] = (2, 3, 4, 5, 6), tol: float = 1e-12) -> ProperReport:
    """Sample ``(P, Q)`` pairs uniformly on the simplex and count failures
    of ``G(P, Q) <= H(P) + tol``.

    Frame sizes cycle through ``sizes``; a decisional rule fixes the size
    to its payoff matrix's width.  ``max_violation`` is the largest
    ``G - H`` seen (negative when the rule is never violated).
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -math.inf
    for t in range(trials):
        n = rule.payoff.n_atoms if rule.kind == DECISIONAL else sizes[t % len(sizes)]
        p, q = rng.dirichlet(np.ones(n), size=2)
        excess = expected_score(rule, p, q) - self_score(rule, p)
        worst = max(worst, excess)
        if excess > tol:
            violations += 1
    return ProperReport(trials, violations, float(worst))
