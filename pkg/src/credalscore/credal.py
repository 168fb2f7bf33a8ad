"""Knowledge sets: closed convex polytopes of distributions on a frame.

A :class:`CredalSet` carries a half-space description (linear constraints,
with ``p >= 0`` and ``sum(p) == 1`` always implied), a generator
description, or both.  Missing representations are computed on demand and
cached: vertices by the double-description method, half-spaces by a
convex hull of the generators in their affine hull.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import EmptySetError, NullEventError, ValidationError
from .frame import Dist, Event, Frame, RandVar, _check_same, condition_dist, point_mass
from .optim import LpProblem, lp_solve

CONTAINS_TOL = 1e-8
DEDUP_TOL = 1e-9
_OPS = {"<=": "<=", "≤": "<=", "==": "==", "=": "==", ">=": ">=", "≥": ">="}


@dataclass(frozen=True, eq=False)
class LinearConstraint:
    """``coeffs @ p  <relation>  rhs`` on a frame."""

    frame: Frame
    coeffs: np.ndarray = field(repr=False)
    relation: str
    rhs: float

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=float).reshape(-1)
        if a.shape != (self.frame.n,):
            raise ValidationError(f"expected {self.frame.n} coefficients, got {a.size}")
        if not np.all(np.isfinite(a)) or not np.isfinite(self.rhs):
            raise ValidationError("constraint coefficients must be finite")
        if self.relation not in _OPS:
            raise ValidationError(f"unknown relation {self.relation!r}")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "relation", _OPS[self.relation])
        object.__setattr__(self, "rhs", float(self.rhs))

    @classmethod
    def prob_bound(cls, e: Event, relation: str, value: float) -> LinearConstraint:
        return cls(e.frame, e.indicator(), relation, value)

    @classmethod
    def expectation(cls, v: RandVar, relation: str, value: float) -> LinearConstraint:
        return cls(v.frame, v.x, relation, value)

    def as_rows(self) -> list[tuple[np.ndarray, float]]:
        """Canonical ``a @ p <= b`` rows."""
        a, b = self.coeffs, self.rhs
        if self.relation == "<=":
            return [(a, b)]
        if self.relation == ">=":
            return [(-a, -b)]
        return [(a, b), (-a, -b)]

    def satisfied(self, p: np.ndarray, tol: float = CONTAINS_TOL) -> bool:
        return all(a @ p <= b + tol for a, b in self.as_rows())

    def __repr__(self):
        return f"LinearConstraint({list(self.coeffs)} {self.relation} {self.rhs})"


class CredalSet:
    """A closed convex set of distributions on ``frame``.

    Build with :func:`vacuous`, :func:`from_constraints`,
    :func:`from_generators` or :func:`singleton`.  Instances are immutable;
    derived representations are computed lazily and cached.
    """

    def __init__(self, frame: Frame, constraints: Optional[Sequence[LinearConstraint]] = None,
                 generators: Optional[Sequence[Dist]] = None):
        if constraints is None and generators is None:
            raise ValidationError("need constraints or generators")
        if constraints is not None:
            for c in constraints:
                _check_same(frame, c.frame)
            constraints = tuple(constraints)
        if generators is not None:
            for g in generators:
                _check_same(frame, g.frame)
            generators = tuple(_dedupe([g.p for g in generators], frame))
        self.frame = frame
        self._hrep = constraints
        self._gens = generators

    def __repr__(self):
        kind = "hrep" if self._hrep is not None else "vrep"
        size = len(self._hrep) if self._hrep is not None else len(self._gens)
        return f"<CredalSet on {self.frame.atoms} ({kind}, {size})>"

    @property
    def has_hrep(self) -> bool:
        return self._hrep is not None

    @cached_property
    def constraints(self) -> tuple[LinearConstraint, ...]:
        """Half-space description; derived from generators when needed."""
        if self._hrep is not None:
            return self._hrep
        return tuple(_hull_constraints(self.frame, np.array([g.p for g in self._gens])))

    @cached_property
    def _rows(self) -> tuple[np.ndarray, np.ndarray]:
        rows = [r for c in self.constraints for r in c.as_rows()]
        A = np.array([a for a, _ in rows]).reshape(-1, self.frame.n)
        b = np.array([b for _, b in rows])
        return A, b

    @cached_property
    def _vertices(self) -> tuple[Dist, ...]:
        if self._gens is not None:
            return self._gens
        A, b = self._rows
        return tuple(_dedupe(double_description(A, b), self.frame))

    def vertices(self) -> list[Dist]:
        """Extreme points (or, for generator-built sets, the generators)."""
        if not self._vertices:
            raise EmptySetError("empty knowledge set")
        return list(self._vertices)

    def lp(self, objective: np.ndarray, direction: str = "min"):
        problem = LpProblem(objective, [(c.coeffs, c.relation, c.rhs) for c in self.constraints])
        return lp_solve(problem, direction)


def _dedupe(points: Iterable[np.ndarray], frame: Frame) -> list[Dist]:
    out: list[np.ndarray] = []
    for p in points:
        p = np.where(np.abs(p) < 1e-15, 0.0, np.maximum(p, 0.0))
        p = p / p.sum()
        if not any(np.max(np.abs(p - q)) <= DEDUP_TOL for q in out):
            out.append(p)
    return [Dist(frame, p) for p in out]


def double_description(A: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> list[np.ndarray]:
    """Vertices of ``{p in simplex : A p <= b}``.

    Incremental double description: start from the simplex corners and
    cut by one half-space at a time, creating a new vertex on every edge
    that crosses the cutting plane.  Edges are detected with the
    combinatorial adjacency test on tight-constraint sets, so the vertex
    list is kept free of duplicates at every step.
    """
    n = A.shape[1]
    V = [row for row in np.eye(n)]
    Z = [frozenset(j for j in range(n) if j != i) for i in range(n)]
    for k, (a, rhs) in enumerate(zip(A, b)):
        idx = n + k
        scale = tol * max(1.0, np.abs(a).max(), abs(rhs))
        vals = np.array([a @ v - rhs for v in V])
        plus = np.flatnonzero(vals > scale)
        minus = np.flatnonzero(vals < -scale)
        zero = np.flatnonzero(np.abs(vals) <= scale)
        if plus.size == 0:
            for i in zero:
                Z[i] = Z[i] | {idx}
            continue
        if minus.size == 0 and zero.size == 0:
            return []
        new_V, new_Z = [], []
        for i in itertools.chain(minus, zero):
            new_V.append(V[i])
            new_Z.append(Z[i] | {idx} if i in set(zero) else Z[i])
        for u in plus:
            for w in minus:
                common = Z[u] & Z[w]
                if not _adjacent(common, Z, u, w):
                    continue
                t = vals[u] / (vals[u] - vals[w])
                new_V.append(V[u] + t * (V[w] - V[u]))
                new_Z.append(common | {idx})
        V, Z = _merge_duplicates(new_V, new_Z)
    return V


def _adjacent(common: frozenset, Z: list[frozenset], u: int, w: int) -> bool:
    for j, zj in enumerate(Z):
        if j != u and j != w and common <= zj:
            return False
    return True


def _merge_duplicates(V, Z):
    out_V, out_Z = [], []
    for v, z in zip(V, Z):
        for j, u in enumerate(out_V):
            if np.max(np.abs(u - v)) <= DEDUP_TOL:
                out_Z[j] = out_Z[j] | z
                break
        else:
            out_V.append(v)
            out_Z.append(z)
    return out_V, out_Z


def _hull_constraints(frame: Frame, G: np.ndarray) -> list[LinearConstraint]:
    """Half-spaces of the convex hull of the rows of ``G``."""
    from scipy.spatial import ConvexHull

    g0 = G[0]
    D = G - g0
    _, s, Vt = np.linalg.svd(D, full_matrices=True)
    rank = int(np.sum(s > 1e-10 * max(1.0, s.max(initial=0.0))))
    basis, normal = Vt[:rank], Vt[rank:]
    out = [LinearConstraint(frame, nv, "==", float(nv @ g0)) for nv in normal]
    if rank == 0:
        return out
    Y = D @ basis.T
    if rank == 1:
        y = Y[:, 0]
        out.append(LinearConstraint(frame, basis[0], ">=", float(basis[0] @ g0 + y.min())))
        out.append(LinearConstraint(frame, basis[0], "<=", float(basis[0] @ g0 + y.max())))
        return out
    hull = ConvexHull(Y)
    for eq in hull.equations:
        w, off = eq[:-1], eq[-1]
        a = w @ basis
        out.append(LinearConstraint(frame, a, "<=", float(a @ g0 - off)))
    return out


# ---------------------------------------------------------------------------
# constructors


def vacuous(frame: Frame) -> CredalSet:
    """All distributions on ``frame`` (complete ignorance)."""
    k = CredalSet(frame, constraints=())
    k.__dict__["_vertices"] = tuple(point_mass(frame, i) for i in range(frame.n))
    return k


def from_constraints(frame: Frame, cs: Sequence[LinearConstraint]) -> CredalSet:
    return CredalSet(frame, constraints=list(cs))


def from_generators(frame: Frame, gens: Sequence[Dist]) -> CredalSet:
    """Convex hull of the given distributions."""
    if not gens:
        raise ValidationError("need at least one generator")
    return CredalSet(frame, generators=list(gens))


def singleton(p: Dist) -> CredalSet:
    return from_generators(p.frame, [p])


# ---------------------------------------------------------------------------
# queries


def is_empty(k: CredalSet) -> bool:
    if k._gens is not None:
        return len(k._gens) == 0
    if "_vertices" in k.__dict__:
        return len(k.__dict__["_vertices"]) == 0
    return not k.lp(np.zeros(k.frame.n)).optimal


def contains(k: CredalSet, p: Dist) -> bool:
    _check_same(k.frame, p.frame)
    if k._hrep is not None:
        return all(c.satisfied(p.p) for c in k._hrep)
    # membership in the hull of generators: lambda in simplex, G^T lambda ~= p
    G = np.array([g.p for g in k._gens])
    rows = []
    for i in range(k.frame.n):
        rows.append((G[:, i], "<=", p.p[i] + CONTAINS_TOL))
        rows.append((G[:, i], ">=", p.p[i] - CONTAINS_TOL))
    return lp_solve(LpProblem(np.zeros(len(G)), rows)).optimal


def prob_bounds(k: CredalSet, e: Event) -> tuple[float, float]:
    """Lower and upper probability of ``e`` over ``k``."""
    _check_same(k.frame, e.frame)
    ind = e.indicator()
    if k._gens is not None:
        # a linear functional attains its extrema at generators
        vals = [g.p @ ind for g in k._gens]
        return _clip01(min(vals)), _clip01(max(vals))
    lo = k.lp(ind, "min")
    if not lo.optimal:
        raise EmptySetError("empty knowledge set")
    hi = k.lp(ind, "max")
    return _clip01(lo.value), _clip01(hi.value)


def _clip01(x: float) -> float:
    return float(min(max(x, 0.0), 1.0))


def intersect(k1: CredalSet, k2: CredalSet) -> CredalSet:
    """Knowledge updating: members satisfying both bodies of evidence.

    No emptiness check is done here; call :func:`is_empty` on the result
    to detect contradictory evidence.
    """
    _check_same(k1.frame, k2.frame)
    return CredalSet(k1.frame, constraints=list(k1.constraints) + list(k2.constraints))


def is_subset(k1: CredalSet, k2: CredalSet) -> bool:
    _check_same(k1.frame, k2.frame)
    if is_empty(k1):
        raise EmptySetError("subset test needs a non-empty left operand")
    return all(contains(k2, v) for v in k1.vertices())


def condition_set(k: CredalSet, e: Event, allow_boundary: bool = False) -> CredalSet:
    """Information updating: condition every member of ``k`` on ``e``.

    The image of a polytope under conditioning is the hull of the
    conditioned vertices.  If some member gives ``e`` probability zero the
    call fails unless ``allow_boundary`` is set, in which case those
    vertices are dropped and the closure of the image of the members with
    ``P(e) > 0`` is returned.
    """
    _check_same(k.frame, e.frame)
    lo, hi = prob_bounds(k, e)
    if hi <= 1e-12:
        raise NullEventError("event impossible under K")
    if lo <= 1e-12 and not allow_boundary:
        raise NullEventError("event possibly null; pass allow_boundary")
    gens = [condition_dist(v, e) for v in k.vertices() if v.p @ e.indicator() > 1e-12]
    return from_generators(k.frame.subframe(e), gens)
