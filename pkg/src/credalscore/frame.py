"""Finite frames, bitmask events, distributions and random variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import FrameMismatchError, NullEventError, ValidationError

MAX_ATOMS = 24
SUM_TOL = 1e-9


@dataclass(frozen=True)
class Frame:
    """An ordered set of atom names; events are subsets of it."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not 1 <= len(atoms) <= MAX_ATOMS:
            raise ValidationError(f"frame needs 1..{MAX_ATOMS} atoms, got {len(atoms)}")
        if any(not isinstance(a, str) or not a for a in atoms):
            raise ValidationError("atom names must be non-empty strings")
        if len(set(atoms)) != len(atoms):
            raise ValidationError("atom names must be unique")

    @property
    def n(self) -> int:
        return len(self.atoms)

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise ValidationError(f"unknown atom {name!r}") from None

    def event(self, names: Iterable[str] | str = ()) -> Event:
        """Event from atom names (a single string is one atom)."""
        if isinstance(names, str):
            names = [names]
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return Event(self, mask)

    def atom(self, i: int) -> Event:
        return Event(self, 1 << i)

    def full(self) -> Event:
        return Event(self, (1 << self.n) - 1)

    def empty(self) -> Event:
        return Event(self, 0)

    def events(self) -> list[Event]:
        """All 2^n events in mask order."""
        return [Event(self, m) for m in range(1 << self.n)]

    def subframe(self, e: Event) -> Frame:
        _check_same(self, e.frame)
        return Frame(tuple(self.atoms[i] for i in e.indices()))


@dataclass(frozen=True)
class Event:
    frame: Frame
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.frame.n:
            raise ValidationError(f"mask {self.mask:#x} outside frame of {self.frame.n} atoms")

    def indices(self) -> list[int]:
        return [i for i in range(self.frame.n) if self.mask >> i & 1]

    def names(self) -> list[str]:
        return [self.frame.atoms[i] for i in self.indices()]

    def indicator(self) -> np.ndarray:
        return np.array([(self.mask >> i) & 1 for i in range(self.frame.n)], dtype=float)

    def complement(self) -> Event:
        return Event(self.frame, ~self.mask & ((1 << self.frame.n) - 1))

    def __invert__(self) -> Event:
        return self.complement()

    def __or__(self, other: Event) -> Event:
        _check_same(self.frame, other.frame)
        return Event(self.frame, self.mask | other.mask)

    def __and__(self, other: Event) -> Event:
        _check_same(self.frame, other.frame)
        return Event(self.frame, self.mask & other.mask)

    def issubset(self, other: Event) -> bool:
        _check_same(self.frame, other.frame)
        return self.mask & ~other.mask == 0

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0


@dataclass(frozen=True, eq=False)
class Dist:
    """A probability vector on a frame.

    Use :func:`make_dist` to build one from unnormalized weights; the
    constructor only validates.
    """

    frame: Frame
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(-1)
        if p.shape != (self.frame.n,):
            raise ValidationError(f"expected {self.frame.n} weights, got {p.size}")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValidationError("probabilities must be finite and non-negative")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def __repr__(self):
        body = ", ".join(f"{a}={v:.6g}" for a, v in zip(self.frame.atoms, self.p))
        return f"Dist({body})"

    def __eq__(self, other):
        return (isinstance(other, Dist) and self.frame == other.frame
                and np.array_equal(self.p, other.p))

    __hash__ = None

    def allclose(self, other: Dist, atol: float = 1e-9) -> bool:
        _check_same(self.frame, other.frame)
        return bool(np.max(np.abs(self.p - other.p)) <= atol)


@dataclass(frozen=True, eq=False)
class RandVar:
    frame: Frame
    x: np.ndarray = field(repr=False)

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        if x.shape != (self.frame.n,):
            raise ValidationError(f"expected {self.frame.n} values, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise ValidationError("random variable values must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)


def _check_same(f1: Frame, f2: Frame) -> None:
    if f1 != f2:
        raise FrameMismatchError(f"frame mismatch: {f1.atoms} vs {f2.atoms}")


def make_dist(frame: Frame, weights: Sequence[float]) -> Dist:
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.shape != (frame.n,):
        raise ValidationError(f"expected {frame.n} weights, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights must be finite")
    if np.any(w < 0):
        raise ValidationError("negative weight")
    total = w.sum()
    if total <= 0:
        raise ValidationError("zero total mass")
    return Dist(frame, w / total)


def point_mass(frame: Frame, i: int) -> Dist:
    p = np.zeros(frame.n)
    p[i] = 1.0
    return Dist(frame, p)


def uniform(frame: Frame) -> Dist:
    return Dist(frame, np.full(frame.n, 1.0 / frame.n))


def prob(dist: Dist, e: Event) -> float:
    _check_same(dist.frame, e.frame)
    total = float(sum(dist.p[i] for i in e.indices()))
    return min(max(total, 0.0), 1.0)


def expectation(dist: Dist, v: RandVar) -> float:
    _check_same(dist.frame, v.frame)
    return float(dist.p @ v.x)


def condition_dist(dist: Dist, e: Event) -> Dist:
    """Bayes conditioning; the result lives on the sub-frame of ``e``."""
    pe = prob(dist, e)
    if pe <= 0:
        raise NullEventError("conditioning on null event")
    idx = e.indices()
    q = dist.p[idx] / pe
    # renormalize away rounding so the result passes the simplex check
    return Dist(dist.frame.subframe(e), q / q.sum())
