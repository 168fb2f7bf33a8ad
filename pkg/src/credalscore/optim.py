"""Numerical kernels: dense simplex LP, 1-D convex minimization and
conditional-gradient minimization over a polytope of distributions.

Everything here works on plain numpy arrays so the kernels can be reused
for the auxiliary LPs (matrix games, hull membership) as well as for
problems on a frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ValidationError

FEAS_TOL = 1e-9
_PIVOT_TOL = 1e-11
_COST_TOL = 1e-11

RELATIONS = ("<=", "==", ">=")


@dataclass(frozen=True)
class LpProblem:
    """Optimize ``objective @ p`` over ``p >= 0, sum(p) == 1`` and ``rows``.

    Each row is ``(coeffs, relation, rhs)`` with relation one of
    ``"<=", "==", ">="``.
    """

    objective: np.ndarray
    rows: Sequence[tuple] = ()

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise ValidationError("objective must be finite")
        object.__setattr__(self, "objective", c)
        rows = []
        for coeffs, rel, rhs in self.rows:
            a = np.asarray(coeffs, dtype=float).reshape(-1)
            if a.shape != c.shape:
                raise ValidationError("constraint row length differs from objective")
            if rel not in RELATIONS:
                raise ValidationError(f"unknown relation {rel!r}")
            if not (np.all(np.isfinite(a)) and math.isfinite(rhs)):
                raise ValidationError("constraint entries must be finite")
            rows.append((a, rel, float(rhs)))
        object.__setattr__(self, "rows", tuple(rows))


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible"
    point: Optional[np.ndarray] = field(default=None, repr=False)
    value: Optional[float] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass(frozen=True)
class CgOptions:
    gap_tol: float = 1e-8
    max_iter: int = 10_000

    def __post_init__(self):
        if not self.gap_tol > 0:
            raise ValidationError("gap_tol must be positive")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")


# ---------------------------------------------------------------------------
# simplex method


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run_simplex(T: np.ndarray, basis: list[int], allowed: int) -> None:
    """Minimize the cost row ``T[-1]`` in place with Bland's rule.

    Columns ``>= allowed`` (artificials) never enter.  The last column is
    the right-hand side and the cost row holds reduced costs with the
    negated objective value in its last entry.
    """
    m = len(basis)
    while True:
        cost = T[-1, :allowed]
        entering = np.flatnonzero(cost < -_COST_TOL)
        if entering.size == 0:
            return
        c = int(entering[0])
        col = T[:m, c]
        cand = np.flatnonzero(col > _PIVOT_TOL)
        if cand.size == 0:
            # cannot happen for bounded problems; treat as converged
            return
        ratios = T[cand, -1] / col[cand]
        best = ratios.min()
        ties = cand[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c


def simplex_solve(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None):
    """Minimize ``c @ x`` subject to ``A_ub x <= b_ub, A_eq x == b_eq, x >= 0``.

    Two-phase dense tableau simplex with Bland's anti-cycling rule.
    Returns ``(status, x, value)``; the problem is assumed bounded.
    """
    c = np.asarray(c, dtype=float)
    nv = c.size
    A_ub = np.zeros((0, nv)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, nv)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).reshape(-1)
    A_eq = np.zeros((0, nv)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, nv)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).reshape(-1)
    m_ub, m_eq = len(b_ub), len(b_eq)
    m = m_ub + m_eq
    n_struct = nv + m_ub  # structural + slack columns

    A = np.zeros((m, n_struct))
    A[:m_ub, :nv] = A_ub
    A[:m_ub, nv:] = np.eye(m_ub)
    A[m_ub:, :nv] = A_eq
    b = np.concatenate([b_ub, b_eq])
    neg = b < 0
    A[neg] *= -1
    b = np.where(neg, -b, b)

    # phase 1: one artificial per row
    T = np.zeros((m + 1, n_struct + m + 1))
    T[:m, :n_struct] = A
    T[:m, n_struct:n_struct + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n_struct] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n_struct, n_struct + m))
    _run_simplex(T, basis, n_struct)
    if -T[-1, -1] > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
        return "infeasible", None, None

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n_struct:
            nz = np.flatnonzero(np.abs(T[r, :n_struct]) > 1e-9)
            if nz.size:
                _pivot(T, r, int(nz[0]))
                basis[r] = int(nz[0])
                keep.append(r)
        else:
            keep.append(r)
    T2 = np.zeros((len(keep) + 1, n_struct + 1))
    T2[:-1, :n_struct] = T[keep, :n_struct]
    T2[:-1, -1] = T[keep, -1]
    basis = [basis[r] for r in keep]

    # phase 2
    cost = np.zeros(n_struct)
    cost[:nv] = c
    T2[-1, :n_struct] = cost
    for r, j in enumerate(basis):
        T2[-1] -= cost[j] * T2[r]
    _run_simplex(T2, basis, n_struct)

    x = np.zeros(n_struct)
    for r, j in enumerate(basis):
        x[j] = T2[r, -1]
    x = np.maximum(x[:nv], 0.0)
    return "optimal", x, float(c @ x)


def lp_solve(problem: LpProblem, direction: str = "min") -> LpSolution:
    """Optimize a linear objective over the probability simplex cut by rows."""
    if direction not in ("min", "max"):
        raise ValidationError("direction must be 'min' or 'max'")
    c = problem.objective
    n = c.size
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [np.ones(n)], [1.0]
    for a, rel, rhs in problem.rows:
        if rel == "<=":
            ub_rows.append(a)
            ub_rhs.append(rhs)
        elif rel == ">=":
            ub_rows.append(-a)
            ub_rhs.append(-rhs)
        else:
            eq_rows.append(a)
            eq_rhs.append(rhs)
    sign = 1.0 if direction == "min" else -1.0
    status, x, _ = simplex_solve(
        sign * c,
        np.array(ub_rows).reshape(-1, n), np.array(ub_rhs),
        np.array(eq_rows), np.array(eq_rhs),
    )
    if status != "optimal":
        return LpSolution("infeasible")
    x = x / x.sum()
    return LpSolution("optimal", x, float(c @ x))


# ---------------------------------------------------------------------------
# one-dimensional minimization

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_1d(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                df: Optional[Callable[[float], float]] = None) -> float:
    """Minimize a convex function on ``[a, b]``.

    Golden-section search on ``f``; only interior points are evaluated so
    endpoint singularities are harmless.  When the derivative ``df`` is
    supplied, bisection on its sign is used instead, which resolves the
    minimizer to ``tol`` even where ``f`` is too flat to compare in
    floating point.
    """
    if not a < b:
        raise ValidationError(f"need a < b, got [{a}, {b}]")
    if df is not None:
        lo, hi = a, b
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if df(mid) > 0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 == f2:
            # convexity puts the minimizer between equal probes
            a, b = x1, x2
            x1 = b - _INVPHI * (b - a)
            x2 = a + _INVPHI * (b - a)
            f1, f2 = f(x1), f(x2)
        elif f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
        if x1 >= x2:  # bracket collapsed to machine resolution
            break
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# conditional gradient


def cg_minimize(f: Callable[[np.ndarray], float],
                grad: Callable[[np.ndarray], np.ndarray],
                k, opts: CgOptions = CgOptions()):
    """Minimize a convex ``f`` over the credal set ``k``.

    Conditional gradient with away steps over the vertices of ``k``,
    started at the mean of the vertices, with exact line search.  Atoms
    that every member of ``k`` assigns probability zero are frozen at
    zero so that log-type gradients stay finite on the rest.

    ``f`` and ``grad`` take probability vectors on ``k.frame``.

    Returns ``(q, gap)`` where ``q`` is a :class:`~credalscore.frame.Dist`
    and ``gap = max_s grad(q) @ (q - s)`` over ``s`` in ``k`` bounds
    ``f(q) - min f``.  If ``max_iter`` is hit the best iterate seen is
    returned with its gap.
    """
    from .frame import Dist

    V = np.array([v.p for v in k.vertices()])
    forced = V.max(axis=0) <= 1e-12
    if forced.any():
        V[:, forced] = 0.0
        V /= V.sum(axis=1, keepdims=True)
    live = ~forced

    def g_live(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.asarray(grad(x), dtype=float).copy()
        g[forced] = 0.0
        return g

    alpha = np.full(len(V), 1.0 / len(V))
    x = alpha @ V
    best = (math.inf, x)
    for _ in range(opts.max_iter):
        g = g_live(x)
        scores = V @ g
        s = int(np.argmin(scores))
        gap = float(g @ x - scores[s])
        if gap < best[0]:
            best = (gap, x)
        if gap <= opts.gap_tol:
            break
        active = np.flatnonzero(alpha > 0)
        v = int(active[np.argmax(scores[active])])
        away_gap = float(scores[v] - g @ x)
        if gap >= away_gap:
            d = V[s] - x
            gmax = 1.0
            fw = True
        else:
            if alpha[v] >= 1.0:
                # single active vertex, nothing to move away from
                d, gmax, fw = V[s] - x, 1.0, True
            else:
                d = x - V[v]
                gmax = alpha[v] / (1.0 - alpha[v])
                fw = False

        def dphi(t, x=x, d=d):
            with np.errstate(divide="ignore", invalid="ignore"):
                val = float(g_live(x + t * d) @ d)
            return val if math.isfinite(val) else (-math.inf if t < gmax / 2 else math.inf)

        t = minimize_1d(None, 0.0, gmax, tol=1e-15 * max(1.0, gmax), df=dphi)
        if not fw and gmax - t <= 4e-15 * max(1.0, gmax):
            t = gmax
        if fw:
            alpha *= 1.0 - t
            alpha[s] += t
        else:
            alpha *= 1.0 + t
            alpha[v] -= t
            if t == gmax:
                alpha[v] = 0.0
        alpha[alpha < 1e-300] = 0.0
        alpha /= alpha.sum()
        x = alpha @ V
    else:
        g = g_live(x)
        gap = float(g @ x - np.min(V @ g))
        if gap < best[0]:
            best = (gap, x)
    gap, x = best
    x = np.where(live, np.maximum(x, 0.0), 0.0)
    return Dist(k.frame, x / x.sum()), gap
