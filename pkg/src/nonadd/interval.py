"""Closed intervals of nonnegative reals with Minkowski arithmetic and the Hausdorff metric."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInterval, UnboundedSup


@dataclass(frozen=True, order=False)
class Interval:
    """``[lo, hi]`` with ``0 <= lo <= hi < inf``.

    ``+`` is the Minkowski sum, ``alpha * A`` the scalar multiple, ``&``/``|`` the
    lattice meet/join.  The weak interval order and inclusion are the methods
    :meth:`precedes` and :meth:`issubset`.
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidInterval(f"interval endpoints must be finite: [{lo}, {hi}]")
        if lo < 0 or lo > hi:
            raise InvalidInterval(f"need 0 <= lo <= hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def zero(cls) -> "Interval":
        return cls(0.0, 0.0)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def scale(self, lam: float) -> "Interval":
        if lam < 0:
            raise InvalidInterval("only nonnegative scalars keep an interval in L(R+)")
        return Interval(lam * self.lo, lam * self.hi)

    def __rmul__(self, lam):
        return self.scale(float(lam))

    def mul(self, other: "Interval") -> "Interval":
        """Interval product ``[r, s] . [x, y] = [r x, s y]``."""
        return Interval(self.lo * other.lo, self.hi * other.hi)

    def __and__(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), min(self.hi, other.hi))

    def __or__(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def precedes(self, other: "Interval", tol: float = 0.0) -> bool:
        return self.lo <= other.lo + tol and self.hi <= other.hi + tol

    def issubset(self, other: "Interval", tol: float = 0.0) -> bool:
        return other.lo <= self.lo + tol and self.hi <= other.hi + tol

    def norm(self) -> float:
        return self.hi

    def as_list(self) -> list[float]:
        return [self.lo, self.hi]

    def __iter__(self):
        return iter((self.lo, self.hi))

    def __str__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def hausdorff(a: Interval, b: Interval) -> float:
    return max(abs(b.lo - a.lo), abs(b.hi - a.hi))


def minkowski_sum(items) -> Interval:
    """Minkowski sum with compensated endpoint summation."""
    items = list(items)
    return Interval(math.fsum(i.lo for i in items), math.fsum(i.hi for i in items))


def iv_inf(seq: Sequence[Interval]) -> Interval:
    return Interval(min(i.lo for i in seq), min(i.hi for i in seq))


def iv_sup(seq: Sequence[Interval]) -> Interval:
    if any(not math.isfinite(i.hi) for i in seq):
        raise UnboundedSup("sup of upper endpoints diverges")
    return Interval(max(i.lo for i in seq), max(i.hi for i in seq))


def iv_liminf(prefix: Sequence[Interval], cycle: Sequence[Interval] = (), limit: Interval | None = None) -> Interval:
    """Componentwise liminf of a desk-truncated sequence.

    The tail behaviour must be declared: either a repeating ``cycle`` (liminf is the
    componentwise min over the cycle) or a known componentwise ``limit``.  With
    neither, the sequence is taken as eventually constant at its last term.
    """
    if cycle:
        return iv_inf(cycle)
    if limit is not None:
        return limit
    if not prefix:
        raise ValueError("empty sequence")
    return prefix[-1]


def iv_seq_limits(prefix: Sequence[Interval], cycle: Sequence[Interval] = (), limit: Interval | None = None):
    """``(inf, sup, liminf)`` of a sequence given as a finite prefix followed by a
    repeating ``cycle`` or converging to a declared componentwise ``limit``."""
    terms = list(prefix) + list(cycle) + ([limit] if limit is not None else [])
    if not terms:
        raise ValueError("empty sequence")
    return iv_inf(terms), iv_sup(terms), iv_liminf(prefix, cycle, limit)
