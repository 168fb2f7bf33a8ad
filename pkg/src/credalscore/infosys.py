"""Information systems with incompletely known joint distributions.

An information system pairs hypotheses ``E`` with observations ``I``.  Its
quality is the observation-averaged self-score of the posteriors,

    H(E|I) = sum_i P(i) * H(P(. | i)),

and with a knowledge set over joints the min-score rule picks the joint
that minimizes it.  The binary channel with unknown prior ``p`` and known
likelihoods ``q = P(i|e)``, ``r = P(i|not e)`` gets dedicated solvers,
including the stationarity equation for the best-guess prior and its
extension to ``N`` exchangeable observations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import comb

from .credal import CredalSet, from_generators, is_empty, prob_bounds
from .errors import EmptySetError, ValidationError
from .frame import MAX_ATOMS, Dist, Frame
from .inference import Estimate
from .optim import CgOptions, cg_minimize, minimize_1d
from .scoring import LOG, QUADRATIC, ScoreRule, log_score, self_score

MAX_OBS = 20


class ProductFrame(Frame):
    """Frame of ``(e, i)`` pairs in row-major order, named ``"e|i"``."""

    def __init__(self, frame_e: Frame, frame_i: Frame):
        if frame_e.n * frame_i.n > MAX_ATOMS:
            raise ValidationError(f"product frame exceeds {MAX_ATOMS} atoms")
        super().__init__(tuple(f"{e}|{i}" for e in frame_e.atoms for i in frame_i.atoms))
        object.__setattr__(self, "frame_e", frame_e)
        object.__setattr__(self, "frame_i", frame_i)

    @property
    def shape(self) -> tuple[int, int]:
        return self.frame_e.n, self.frame_i.n


@dataclass(frozen=True)
class InfoSystem:
    frame_e: Frame
    frame_i: Frame
    k_joint: CredalSet

    def __post_init__(self):
        if not isinstance(self.k_joint.frame, ProductFrame) or \
                self.k_joint.frame.shape != (self.frame_e.n, self.frame_i.n):
            raise ValidationError("joint knowledge set must live on the E x I product frame")
        if is_empty(self.k_joint):
            raise EmptySetError("empty knowledge set")

    @property
    def frame(self) -> ProductFrame:
        return self.k_joint.frame


@dataclass(frozen=True)
class BinaryChannel:
    """Likelihoods of a success ``i`` under ``e`` (q) and under not-``e`` (r).

    ``q < r`` is canonicalized by relabelling success and failure, which
    maps ``(q, r)`` to ``(1 - q, 1 - r)``.
    """

    q: float
    r: float
    n_obs: int = 1

    def __post_init__(self):
        q, r = float(self.q), float(self.r)
        if not (0.0 <= q <= 1.0 and 0.0 <= r <= 1.0):
            raise ValidationError("likelihoods must lie in [0, 1]")
        if not 1 <= int(self.n_obs) <= MAX_OBS:
            raise ValidationError(f"n_obs must be in 1..{MAX_OBS}")
        if q < r:
            q, r = 1.0 - q, 1.0 - r
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "n_obs", int(self.n_obs))

    def with_n(self, n_obs: int) -> BinaryChannel:
        return BinaryChannel(self.q, self.r, n_obs)

    def likelihoods(self) -> tuple[np.ndarray, np.ndarray]:
        """Success-count probabilities under e and not-e, ordered k = N..0."""
        n = self.n_obs
        k = np.arange(n, -1, -1)
        c = comb(n, k)
        return c * self.q ** k * (1 - self.q) ** (n - k), c * self.r ** k * (1 - self.r) ** (n - k)


# ---------------------------------------------------------------------------
# conditional score


def conditional_score_array(J: np.ndarray, rule: ScoreRule) -> float:
    """``H(E|I)`` for a joint given as an ``|E| x |I|`` array."""
    J = np.asarray(J, dtype=float)
    total = 0.0
    for col in J.T:
        pi = col.sum()
        if pi > 0:
            total += pi * self_score(rule, col / pi)
    return float(total)


def conditional_score(system_dist: Dist, rule: ScoreRule) -> float:
    frame = system_dist.frame
    if not isinstance(frame, ProductFrame):
        raise ValidationError("conditional_score needs a distribution on a product frame")
    return conditional_score_array(system_dist.p.reshape(frame.shape), rule)


def _joint_objective(shape: tuple[int, int], rule: ScoreRule):
    if rule.kind == LOG:
        def f(p):
            J = p.reshape(shape)
            pi = J.sum(axis=0)
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(J > 0, J * np.log(J), 0.0).sum()
                u = np.where(pi > 0, pi * np.log(pi), 0.0).sum()
            return float(t - u)

        def grad(p):
            J = p.reshape(shape)
            pi = J.sum(axis=0)
            return (np.log(J) - np.log(pi)).reshape(-1)
    elif rule.kind == QUADRATIC:
        def f(p):
            J = p.reshape(shape)
            pi = J.sum(axis=0)
            with np.errstate(divide="ignore", invalid="ignore"):
                return float(np.where(pi > 0, (J ** 2).sum(axis=0) / pi, 0.0).sum())

        def grad(p):
            J = p.reshape(shape)
            pi = J.sum(axis=0)
            return (2.0 * J / pi - (J ** 2).sum(axis=0) / pi ** 2).reshape(-1)
    else:
        raise ValidationError("min_score_joint supports the log and quadratic scores")
    return f, grad


def min_score_joint(sys: InfoSystem, rule: ScoreRule, opts: CgOptions = CgOptions()) -> Estimate:
    """Joint distribution in ``sys.k_joint`` minimizing ``H(E|I)``.

    The objective is convex (a sum of perspectives of ``H``), so the
    conditional-gradient duality gap is a valid optimality certificate and
    is reported as ``certificate_gap``.
    """
    frame = sys.frame
    for j, name in enumerate(sys.frame_i.atoms):
        col = frame.event([f"{e}|{name}" for e in sys.frame_e.atoms])
        if prob_bounds(sys.k_joint, col)[1] <= 0:
            raise ValidationError(f"observation {name!r} is impossible under K")
    f, grad = _joint_objective(frame.shape, rule)
    q, gap = cg_minimize(f, grad, sys.k_joint, opts)
    return Estimate(q, conditional_score(q, rule), max(gap, 0.0))


# ---------------------------------------------------------------------------
# binary channel with unknown prior


def _obs_frame(n_obs: int) -> Frame:
    if n_obs == 1:
        return Frame(("i", "not_i"))
    return Frame(tuple(f"k{k}" for k in range(n_obs, -1, -1)))


def binary_frame(ch: BinaryChannel) -> ProductFrame:
    return ProductFrame(Frame(("e", "not_e")), _obs_frame(ch.n_obs))


def binary_joint_array(p: float, ch: BinaryChannel) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"prior {p} outside [0, 1]")
    a, b = ch.likelihoods()
    return np.vstack([p * a, (1.0 - p) * b])


def binary_joint(p: float, ch: BinaryChannel) -> Dist:
    """Joint over hypotheses x success counts for prior ``p``.

    Observations are ordered from ``N`` successes down to 0, so for one
    observation the atoms read ``(e,i), (e,not i), (not e,i), (not e,not i)``.
    """
    frame = binary_frame(ch)
    J = binary_joint_array(p, ch).reshape(-1)
    return Dist(frame, J / J.sum())


def binary_family(ch: BinaryChannel) -> InfoSystem:
    """All joints reachable by some prior in [0, 1]: the segment between
    the two degenerate priors."""
    frame = binary_frame(ch)
    k = from_generators(frame, [binary_joint(0.0, ch), binary_joint(1.0, ch)])
    return InfoSystem(frame.frame_e, frame.frame_i, k)


def _h(x: float) -> float:
    """``x log x + (1-x) log(1-x)`` with ``0 log 0 = 0``."""
    return sum(t * math.log(t) for t in (x, 1.0 - x) if t > 0)


def eq3_residual(p: float, q: float, r: float) -> float:
    """Derivative in ``p`` of ``H(E|I)`` (log score) for one observation.

    Zero at the best-guess prior; it is the log of the stationarity
    condition ``p/(1-p) * exp(h(q) - h(r)) = (m/(1-m))**(q-r)`` with
    ``m = p q + (1-p) r``.
    """
    m = p * q + (1.0 - p) * r
    return (math.log(p / (1.0 - p)) + _h(q) - _h(r)
            - (q - r) * math.log(m / (1.0 - m)))


def eq3_solve(q: float, r: float, tol: float = 1e-10) -> float:
    """Best-guess prior for one binary observation by bisection on the
    stationarity residual."""
    if not (0.0 <= q <= 1.0 and 0.0 <= r <= 1.0):
        raise ValidationError("likelihoods must lie in [0, 1]")
    if q < r:
        q, r = 1.0 - q, 1.0 - r
    if q == r:
        return 0.5
    if q == 1.0 and r == 0.0:
        raise ValidationError("perfect channel: every prior is optimal")
    lo, hi = 1e-12, 1.0 - 1e-12
    f_lo, f_hi = eq3_residual(lo, q, r), eq3_residual(hi, q, r)
    if not (f_lo < 0 < f_hi):
        ch = BinaryChannel(q, r, 1)
        return minimize_1d(lambda p: conditional_score_array(binary_joint_array(p, ch), log_score()),
                           0.0, 1.0, tol)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if eq3_residual(mid, q, r) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _xlogx_sum(v: np.ndarray) -> float:
    nz = v > 0
    return float(np.sum(v[nz] * np.log(v[nz])))


def prior_slope(p: float, ch: BinaryChannel) -> float:
    """Derivative in ``p`` of ``H(E|I)`` (log score) for ``ch.n_obs`` observations.

    With success-count likelihoods ``a`` (under e) and ``b`` (under not e)
    and marginals ``m = p a + (1-p) b`` this is
    ``log(p/(1-p)) + sum a log a - sum b log b - sum (a - b) log m``.
    """
    a, b = ch.likelihoods()
    m = p * a + (1.0 - p) * b
    d = a - b
    nz = d != 0
    return (math.log(p / (1.0 - p)) + _xlogx_sum(a) - _xlogx_sum(b)
            - float(np.sum(d[nz] * np.log(m[nz]))))


def best_prior(ch: BinaryChannel, tol: float = 1e-8) -> float:
    """Prior minimizing ``H(E|I)`` (log score) for ``ch.n_obs`` observations.

    The objective is convex in ``p`` but very flat near its minimum, so the
    1-D search runs on the sign of :func:`prior_slope` rather than on
    objective comparisons.
    """
    rule = log_score()
    return minimize_1d(lambda p: conditional_score_array(binary_joint_array(p, ch), rule),
                       0.0, 1.0, min(tol, 1e-12), df=lambda p: prior_slope(p, ch))


def uninformative_prior(q: float, r: float) -> float:
    """Prior at which one success leaves the posterior of ``e`` at 1/2."""
    return r / (q + r)


@dataclass(frozen=True)
class PriorRow:
    n_obs: int
    prior: float


def prior_study(q: float, r: float, ns: Iterable[int]) -> list[PriorRow]:
    """Best-guess prior for each number of observations, in input order."""
    base = BinaryChannel(q, r, 1)
    return [PriorRow(n, best_prior(base.with_n(n))) for n in ns]


@dataclass(frozen=True)
class TransferReport:
    p1: float
    p2: float
    predictive_transfer: float
    predictive_joint: float
    gap: float


def posterior_transfer_gap(ch: BinaryChannel) -> TransferReport:
    """Compare two predictions of a second success after a first one.

    ``predictive_transfer`` reuses the posterior from the one-observation
    best prior as a new prior; ``predictive_joint`` takes the best prior
    for the two-observation system instead.
    """
    q, r = ch.q, ch.r
    p1 = best_prior(ch.with_n(1))
    p2 = best_prior(ch.with_n(2))
    post = p1 * q / (p1 * q + (1 - p1) * r)
    transfer = post * q + (1 - post) * r
    joint = (p2 * q * q + (1 - p2) * r * r) / (p2 * q + (1 - p2) * r)
    return TransferReport(p1, p2, transfer, joint, abs(transfer - joint))


@dataclass(frozen=True)
class DownplayRow:
    q: float
    r: float
    h_q: float
    h_r: float
    prior: float
    below_half: bool


def downplay_survey(grid: Sequence[tuple[float, float]]) -> list[DownplayRow]:
    """Best priors on channels where the e-row likelihood is the more
    informative one (``h(q) < h(r)``), recording whether the prior sits
    below 1/2.  Reported, not asserted."""
    rows = []
    for q, r in grid:
        ch = BinaryChannel(q, r, 1)
        hq, hr = _h(ch.q), _h(ch.r)
        if hq < hr:
            p = eq3_solve(ch.q, ch.r)
            rows.append(DownplayRow(ch.q, ch.r, hq, hr, p, p < 0.5))
    return rows
