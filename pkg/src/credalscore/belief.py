"""Dempster-Shafer mass functions and their credal sets.

A belief function is mapped to the set of distributions dominating it,
``K(Bel) = {P : P(A) >= Bel(A) for every event A}``, whose lower envelope
is ``Bel`` again.  Dempster's rule is provided so that combination of
evidence can be compared with intersection of knowledge sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .credal import CredalSet, LinearConstraint, intersect, is_empty, prob_bounds
from .errors import TotalConflictError, ValidationError
from .frame import Dist, Event, Frame, _check_same

MAX_BELIEF_ATOMS = 12


class MassFunction:
    """Basic probability assignment over the events of a frame.

    ``focal`` maps events (or raw bitmasks) to positive masses summing to 1.
    """

    def __init__(self, frame: Frame, focal: Mapping):
        if frame.n > MAX_BELIEF_ATOMS:
            raise ValidationError(f"belief frames are limited to {MAX_BELIEF_ATOMS} atoms")
        masses: dict[int, float] = {}
        for key, value in focal.items():
            if isinstance(key, Event):
                _check_same(frame, key.frame)
                key = key.mask
            key = int(key)
            if key <= 0 or key >> frame.n:
                raise ValidationError("focal sets must be non-empty events of the frame")
            value = float(value)
            if not value > 0:
                raise ValidationError("focal masses must be positive")
            masses[key] = masses.get(key, 0.0) + value
        total = sum(masses.values())
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"masses sum to {total!r}, not 1")
        self.frame = frame
        self.masses = dict(sorted(masses.items()))

    def __repr__(self):
        parts = ", ".join(f"{Event(self.frame, k).names()}: {v:.6g}" for k, v in self.masses.items())
        return f"MassFunction({parts})"

    @classmethod
    def vacuous(cls, frame: Frame) -> MassFunction:
        return cls(frame, {frame.full().mask: 1.0})

    def focal_events(self) -> list[Event]:
        return [Event(self.frame, k) for k in self.masses]

    def bel_table(self) -> np.ndarray:
        """``Bel`` for every mask, by a subset-sum (zeta) transform."""
        n = self.frame.n
        table = np.zeros(1 << n)
        for k, v in self.masses.items():
            table[k] = v
        for i in range(n):
            bit = 1 << i
            for mask in range(1 << n):
                if mask & bit:
                    table[mask] += table[mask ^ bit]
        return table


def bel(m: MassFunction, e: Event) -> float:
    _check_same(m.frame, e.frame)
    return float(sum(v for k, v in m.masses.items() if k & ~e.mask == 0))


def plausibility(m: MassFunction, e: Event) -> float:
    _check_same(m.frame, e.frame)
    return float(sum(v for k, v in m.masses.items() if k & e.mask))


def _permutation_points(m: MassFunction) -> list[np.ndarray]:
    """Distributions obtained by handing out Bel increments along every
    ordering of the atoms.

    Orderings are explored depth-first and partial orderings that reach
    the same placed set with the same partial distribution are merged, so
    the work tracks the number of distinct points rather than ``n!``.
    """
    n = m.frame.n
    table = m.bel_table()
    level = {(0, tuple([0.0] * n))}
    for _ in range(n):
        nxt = set()
        for placed, partial in level:
            for a in range(n):
                if placed >> a & 1:
                    continue
                grown = placed | (1 << a)
                vec = list(partial)
                vec[a] = table[grown] - table[placed]
                nxt.add((grown, tuple(round(x, 13) for x in vec)))
        level = nxt
    return [np.array(vec) for _, vec in level]


def belief_to_credal(m: MassFunction) -> CredalSet:
    """``K(Bel)`` with both representations filled in."""
    frame = m.frame
    table = m.bel_table()
    full = (1 << frame.n) - 1
    cons = [LinearConstraint.prob_bound(Event(frame, mask), ">=", float(table[mask]))
            for mask in range(1, full)]
    gens = [Dist(frame, p / p.sum()) for p in _permutation_points(m)]
    return CredalSet(frame, constraints=cons, generators=gens)


def dempster_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Orthogonal sum; raises :class:`TotalConflictError` when ``kappa ~ 1``."""
    _check_same(m1.frame, m2.frame)
    out: dict[int, float] = {}
    kappa = 0.0
    for a, va in m1.masses.items():
        for b, vb in m2.masses.items():
            c = a & b
            if c:
                out[c] = out.get(c, 0.0) + va * vb
            else:
                kappa += va * vb
    if kappa >= 1.0 - 1e-12:
        raise TotalConflictError("total conflict")
    norm = 1.0 - kappa
    return MassFunction(m1.frame, {c: v / norm for c, v in out.items()})


def conflict(m1: MassFunction, m2: MassFunction) -> float:
    _check_same(m1.frame, m2.frame)
    return float(sum(va * vb for a, va in m1.masses.items()
                     for b, vb in m2.masses.items() if not a & b))


@dataclass(frozen=True)
class AtomComparison:
    atom: str
    dempster: Optional[tuple[float, float]]
    intersection: Optional[tuple[float, float]]


@dataclass(frozen=True)
class UpdateComparison:
    """Per-atom probability intervals under the two ways of pooling evidence.

    ``dempster`` intervals are ``None`` when the masses totally conflict;
    ``intersection`` intervals are ``None`` when the knowledge sets are
    disjoint, which ``inconsistent`` flags.
    """

    kappa: float
    dempster_mass: Optional[MassFunction]
    inconsistent: bool
    atoms: tuple[AtomComparison, ...]


def compare_updating(m1: MassFunction, m2: MassFunction) -> UpdateComparison:
    _check_same(m1.frame, m2.frame)
    frame = m1.frame
    kappa = conflict(m1, m2)
    try:
        combined = dempster_combine(m1, m2)
        k_d = belief_to_credal(combined)
    except TotalConflictError:
        combined, k_d = None, None
    k_i = intersect(belief_to_credal(m1), belief_to_credal(m2))
    inconsistent = is_empty(k_i)
    rows = []
    for i, name in enumerate(frame.atoms):
        e = frame.atom(i)
        rows.append(AtomComparison(
            name,
            prob_bounds(k_d, e) if k_d is not None else None,
            None if inconsistent else prob_bounds(k_i, e),
        ))
    return UpdateComparison(kappa, combined, inconsistent, tuple(rows))
