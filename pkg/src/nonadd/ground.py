"""Ground spaces and their set algebras.

A finite space ``Finite(n)`` uses Python ints as bitmasks (bit ``i`` set means
point ``i`` belongs to the set).  The countable space of naturals uses
eventually-periodic sets (:class:`EpSet`), which are closed under the Boolean
operations and carry exact cardinality queries.  Real functions on the naturals
are modelled by :class:`NatFunction`: explicit values on a prefix followed by a
finite sum of geometric terms on each residue class of the tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import EmptySet, NotInAlgebra, SeriesDiverges, SpaceMismatch, Unsupported

INFINITE = math.inf


@dataclass(frozen=True)
class GroundSpace:
    """``GroundSpace(n)`` is the finite space {0..n-1}; ``GroundSpace(None)`` is the naturals."""

    n: int | None = None

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError("a finite ground space needs at least one point")

    @classmethod
    def finite(cls, n: int) -> "GroundSpace":
        return cls(int(n))

    @classmethod
    def nat(cls) -> "GroundSpace":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.n is not None

    def full(self):
        return (1 << self.n) - 1 if self.is_finite else EpSet.full()

    def empty(self):
        return 0 if self.is_finite else EpSet.empty()

    def subsets(self) -> range:
        if not self.is_finite:
            raise Unsupported("the naturals have no enumerable algebra")
        return range(1 << self.n)

    def check_set(self, A):
        if self.is_finite:
            if isinstance(A, (bool, np.bool_)) or not isinstance(A, (int, np.integer)):
                raise NotInAlgebra(f"expected a bitmask over Finite({self.n}), got {A!r}")
            if A < 0 or A >> self.n:
                raise NotInAlgebra(f"mask {A:#b} is not a subset of Finite({self.n})")
            return int(A)
        if not isinstance(A, EpSet):
            raise NotInAlgebra(f"expected an eventually-periodic set, got {A!r}")
        return A

    def check_same(self, other: "GroundSpace"):
        if self != other:
            raise SpaceMismatch(f"{self} vs {other}")

    def __str__(self):
        return f"Finite({self.n})" if self.is_finite else "Nat"


def mask_points(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def points_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << int(p)
    return m


def submasks(mask: int):
    """All submasks of ``mask`` including 0, in decreasing order."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# --------------------------------------------------------------------------- #
# eventually periodic subsets of the naturals


def _minimal_period(bits: tuple[int, ...]) -> int:
    # border (failure-function) computation
    p = len(bits)
    fail = [0] * p
    k = 0
    for i in range(1, p):
        while k and bits[i] != bits[k]:
            k = fail[k - 1]
        if bits[i] == bits[k]:
            k += 1
        fail[i] = k
    d = p - fail[-1]
    return d if p % d == 0 else p


def _bits(seq) -> tuple[int, ...]:
    if isinstance(seq, str):
        seq = [c for c in seq if not c.isspace()]
    out = []
    for b in seq:
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"bit expected, got {b!r}")
        out.append(b)
    return tuple(out)


@dataclass(frozen=True)
class EpSet:
    """Eventually-periodic subset of the naturals.

    ``n < len(prefix)`` is a member iff ``prefix[n]``; for larger ``n`` membership is
    ``period[(n - len(prefix)) % len(period)]``.  Instances are always stored in
    canonical form, so ``==`` and ``hash`` are set equality.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        prefix = _bits(self.prefix)
        period = _bits(self.period)
        if not period:
            raise ValueError("period must have length >= 1")
        period = period[: _minimal_period(period)]
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    # constructors
    @classmethod
    def empty(cls) -> "EpSet":
        return cls((), (0,))

    @classmethod
    def full(cls) -> "EpSet":
        return cls((), (1,))

    @classmethod
    def finite(cls, points: Iterable[int]) -> "EpSet":
        pts = sorted({int(p) for p in points})
        if pts and pts[0] < 0:
            raise ValueError("naturals only")
        L = pts[-1] + 1 if pts else 0
        prefix = [0] * L
        for p in pts:
            prefix[p] = 1
        return cls(tuple(prefix), (0,))

    @classmethod
    def residue(cls, r: int, m: int, start: int = 0) -> "EpSet":
        """{n >= start : n = r (mod m)}."""
        prefix = tuple(0 for _ in range(start))
        period = tuple(1 if (start + i - r) % m == 0 else 0 for i in range(m))
        return cls(prefix, period)

    @classmethod
    def tail(cls, start: int) -> "EpSet":
        return cls(tuple(0 for _ in range(start)), (1,))

    @classmethod
    def parse(cls, text: str) -> "EpSet":
        """Parse ``"prefix:0110 period:10"`` (bits little-endian by index)."""
        fields = {}
        for tok in text.split():
            key, _, val = tok.partition(":")
            fields[key.strip()] = val.strip()
        if "period" not in fields or not fields["period"]:
            raise ValueError(f"EpSet text needs a nonempty period: {text!r}")
        unknown = set(fields) - {"prefix", "period"}
        if unknown:
            raise ValueError(f"unknown EpSet fields {sorted(unknown)}")
        return cls(_bits(fields.get("prefix", "")), _bits(fields["period"]))

    def __str__(self):
        pre = "".join(map(str, self.prefix))
        per = "".join(map(str, self.period))
        return f"prefix:{pre} period:{per}"

    # queries
    @property
    def start(self) -> int:
        return len(self.prefix)

    @property
    def period_len(self) -> int:
        return len(self.period)

    def __contains__(self, n) -> bool:
        n = int(n)
        if n < 0:
            return False
        if n < len(self.prefix):
            return bool(self.prefix[n])
        return bool(self.period[(n - len(self.prefix)) % len(self.period)])

    def is_finite(self) -> bool:
        return not any(self.period)

    def is_empty(self) -> bool:
        return self.is_finite() and not any(self.prefix)

    def cardinality(self):
        return sum(self.prefix) if self.is_finite() else INFINITE

    def members(self, horizon: int) -> list[int]:
        """Members below ``horizon``."""
        return [n for n in range(horizon) if n in self]

    def first(self, k: int) -> list[int]:
        """The first ``k`` members (fewer only if the set is finite)."""
        out = []
        n = 0
        limit = len(self.prefix) if self.is_finite() else None
        while len(out) < k and (limit is None or n < limit):
            if n in self:
                out.append(n)
            n += 1
        return out

    def horizon(self, other: "EpSet | None" = None) -> int:
        if other is None:
            return len(self.prefix) + len(self.period)
        return max(len(self.prefix), len(other.prefix)) + math.lcm(len(self.period), len(other.period))

    # Boolean algebra
    def _combine(self, other: "EpSet", fn) -> "EpSet":
        L = max(len(self.prefix), len(other.prefix))
        P = math.lcm(len(self.period), len(other.period))
        prefix = tuple(int(fn(n in self, n in other)) for n in range(L))
        period = tuple(int(fn(n in self, n in other)) for n in range(L, L + P))
        return EpSet(prefix, period)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def __xor__(self, other):
        return self._combine(other, lambda a, b: a != b)

    def complement(self) -> "EpSet":
        return EpSet.full() - self

    def issubset(self, other: "EpSet") -> bool:
        return (self - other).is_empty()

    def isdisjoint(self, other: "EpSet") -> bool:
        return (self & other).is_empty()


def ep_combine(a: EpSet, b: EpSet, op: str) -> EpSet:
    if op == "union":
        return a | b
    if op == "intersection":
        return a & b
    if op == "difference":
        return a - b
    raise ValueError(f"unknown set operation {op!r}")


def ep_cardinality(a: EpSet):
    """Number of members: an int, or ``math.inf``."""
    return a.cardinality()


# --------------------------------------------------------------------------- #
# functions on the naturals


def _normalize_terms(terms) -> tuple[tuple[float, float], ...]:
    acc: dict[float, float] = {}
    for c, r in terms:
        c = float(c)
        r = float(r)
        if not (0.0 < r <= 1.0):
            raise ValueError(f"tail ratio must lie in (0, 1], got {r}")
        if c != 0.0:
            acc[r] = acc.get(r, 0.0) + c
    return tuple(sorted((c, r) for r, c in acc.items() if c != 0.0))


class Extrema(NamedTuple):
    inf: float
    sup: float
    inf_attained: bool
    sup_attained: bool


@dataclass(frozen=True)
class NatFunction:
    """Real function on the naturals in the closed-form tail model.

    ``f(n) = prefix[n]`` for ``n < L = len(prefix)``; otherwise
    ``f(n) = sum(c * r**n for c, r in residues[(n - L) % P])`` with
    ``P = len(residues)`` and every ratio ``r`` in (0, 1] (``r == 1`` is a
    constant term).  Such functions are always bounded.
    """

    prefix: tuple[float, ...] = ()
    residues: tuple[tuple[tuple[float, float], ...], ...] = ((),)

    def __post_init__(self):
        prefix = tuple(float(v) for v in self.prefix)
        if not all(math.isfinite(v) for v in prefix):
            raise ValueError("function values must be finite")
        residues = tuple(_normalize_terms(t) for t in self.residues)
        if not residues:
            raise ValueError("at least one residue class is required")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "residues", residues)

    @classmethod
    def constant(cls, c: float) -> "NatFunction":
        return cls((), (((c, 1.0),),))

    @classmethod
    def geometric(cls, c: float, r: float, prefix=()) -> "NatFunction":
        """``c * r**n`` past the prefix."""
        return cls(tuple(prefix), (((c, r),),))

    @classmethod
    def from_values(cls, values, tail: float = 0.0) -> "NatFunction":
        return cls(tuple(values), (((tail, 1.0),),))

    @classmethod
    def indicator(cls, E: EpSet) -> "NatFunction":
        return cls(tuple(float(b) for b in E.prefix), tuple((((1.0, 1.0),) if b else ()) for b in E.period))

    @property
    def start(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.residues)

    def __call__(self, n: int) -> float:
        n = int(n)
        if n < len(self.prefix):
            return self.prefix[n]
        terms = self.residues[(n - len(self.prefix)) % len(self.residues)]
        return math.fsum(c * r**n for c, r in terms)

    def values(self, horizon: int) -> np.ndarray:
        return np.array([self(n) for n in range(horizon)])

    def aligned(self, L: int, P: int) -> "NatFunction":
        """Same function re-expressed with prefix length ``L`` and period ``P``."""
        if L < len(self.prefix) or P % len(self.residues):
            raise ValueError("can only align to a longer prefix and a multiple of the period")
        prefix = tuple(self(n) for n in range(L))
        res = tuple(self.residues[(L + j - len(self.prefix)) % len(self.residues)] for j in range(P))
        return NatFunction(prefix, res)

    def _binary(self, other: "NatFunction", combine_prefix, combine_terms) -> "NatFunction":
        L = max(self.start, other.start)
        P = math.lcm(self.period, other.period)
        a = self.aligned(L, P)
        b = other.aligned(L, P)
        prefix = tuple(combine_prefix(x, y) for x, y in zip(a.prefix, b.prefix))
        res = tuple(combine_terms(s, t) for s, t in zip(a.residues, b.residues))
        return NatFunction(prefix, res)

    def __add__(self, other):
        if not isinstance(other, NatFunction):
            other = NatFunction.constant(float(other))
        return self._binary(other, lambda x, y: x + y, lambda s, t: s + t)

    __radd__ = __add__

    def scale(self, alpha: float) -> "NatFunction":
        alpha = float(alpha)
        return NatFunction(
            tuple(alpha * v for v in self.prefix),
            tuple(tuple((alpha * c, r) for c, r in terms) for terms in self.residues),
        )

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other if isinstance(other, NatFunction) else -float(other))

    def __mul__(self, other):
        if not isinstance(other, NatFunction):
            return self.scale(other)
        return self._binary(
            other,
            lambda x, y: x * y,
            lambda s, t: tuple((c1 * c2, r1 * r2) for c1, r1 in s for c2, r2 in t),
        )

    __rmul__ = __mul__

    def abs_pow(self, p: float) -> "NatFunction":
        """``|f|**p``; the tail must have at most one geometric term per residue class."""
        p = float(p)
        res = []
        for terms in self.residues:
            if len(terms) > 1:
                raise Unsupported("|f|^p needs a single geometric term per residue class")
            if not terms:
                if p <= 0:
                    raise Unsupported("|f|^p with p <= 0 needs f != 0 everywhere")
                res.append(())
            else:
                (c, r), = terms
                res.append(((abs(c) ** p, r**p),))
        prefix = []
        for v in self.prefix:
            if v == 0.0 and p <= 0:
                raise Unsupported("|f|^p with p <= 0 needs f != 0 everywhere")
            prefix.append(abs(v) ** p)
        return NatFunction(tuple(prefix), tuple(res))

    def __abs__(self):
        return self.abs_pow(1.0)

    def restrict(self, E: EpSet) -> "NatFunction":
        """``f * chi_E``."""
        L = max(self.start, E.start)
        P = math.lcm(self.period, E.period_len)
        a = self.aligned(L, P)
        prefix = tuple(v if n in E else 0.0 for n, v in enumerate(a.prefix))
        res = tuple(terms if (L + j) in E else () for j, terms in enumerate(a.residues))
        return NatFunction(prefix, res)

    def support_tail_is_zero(self) -> bool:
        return all(not terms for terms in self.residues)

    def series_sum(self, E: EpSet | None = None) -> float:
        """Exact value of ``sum_{n in E} f(n)``; raises :class:`SeriesDiverges`."""
        g = self if E is None else self.restrict(E)
        total = [*g.prefix]
        L, P = g.start, g.period
        for j, terms in enumerate(g.residues):
            for c, r in terms:
                if r >= 1.0:
                    partial = [abs(c) * k for k in (1, 10, 100, 1000)]
                    raise SeriesDiverges(
                        f"residue class {L + j} mod {P} has a non-decaying term {c}",
                        partial_sums=partial,
                    )
                total.append(c * r ** (L + j) / (1.0 - r**P))
        return math.fsum(total)

    def residue_sequence(self, j: int):
        """Coefficients ``(a, q)`` with ``f(L + j + k P) = sum a * q**k``."""
        L, P = self.start, self.period
        return [(c * r ** (L + j), r**P) for c, r in self.residues[j]]

    def sup_abs(self) -> float:
        ext = ep_extrema_of(self, EpSet.full())
        return max(abs(ext.inf), abs(ext.sup))


def _residue_extrema(coefs) -> Extrema:
    # g(k) = sum a * q**k, q in (0, 1]; the limit is the sum of the q == 1 terms
    limit = math.fsum(a for a, q in coefs if q >= 1.0)
    decaying = [(a, q) for a, q in coefs if q < 1.0]
    if not decaying:
        return Extrema(limit, limit, True, True)
    if len(decaying) == 1:
        a, _ = decaying[0]
        first = limit + a
        # monotone sequence from first towards limit
        if a > 0:
            return Extrema(limit, first, False, True)
        return Extrema(first, limit, True, False)
    vals = []
    k = 0
    while True:
        vals.append(limit + math.fsum(a * q**k for a, q in decaying))
        rest = sum(abs(a) * q**k for a, q in decaying)
        if rest <= 1e-17 * max(1.0, abs(limit)) or k > 100000:
            break
        k += 1
    lo, hi = min(vals), max(vals)
    return Extrema(min(lo, limit), max(hi, limit), lo <= limit, hi >= limit)


def ep_extrema_of(f, a) -> Extrema:
    """Exact infimum and supremum of ``f`` over the set ``a``.

    ``f`` is a :class:`NatFunction` with ``a`` an :class:`EpSet`, or a numpy vector
    with ``a`` a bitmask.  Infima/suprema that are only limits are reported with
    ``*_attained=False``.
    """
    if not isinstance(f, NatFunction):
        pts = mask_points(a)
        if not pts:
            raise EmptySet("extrema over the empty set")
        vals = np.asarray(f, dtype=float)[pts]
        return Extrema(float(vals.min()), float(vals.max()), True, True)
    if a.is_empty():
        raise EmptySet("extrema over the empty set")
    L = max(f.start, a.start)
    P = math.lcm(f.period, a.period_len)
    g = f.aligned(L, P)
    cands: list[Extrema] = []
    for n in range(L):
        if n in a:
            v = g.prefix[n]
            cands.append(Extrema(v, v, True, True))
    for j in range(P):
        if (L + j) in a:
            cands.append(_residue_extrema(g.residue_sequence(j)))
    lo = min(c.inf for c in cands)
    hi = max(c.sup for c in cands)
    return Extrema(
        lo,
        hi,
        any(c.inf == lo and c.inf_attained for c in cands),
        any(c.sup == hi and c.sup_attained for c in cands),
    )


def as_function(space: GroundSpace, f):
    """Coerce to the function type used on ``space``."""
    if space.is_finite:
        arr = np.asarray(f, dtype=float)
        if arr.shape != (space.n,):
            raise ValueError(f"function on {space} needs {space.n} values, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("function values must be finite")
        return arr
    if isinstance(f, NatFunction):
        return f
    if np.isscalar(f):
        return NatFunction.constant(float(f))
    raise TypeError(f"cannot use {f!r} as a function on the naturals")


def indicator(space: GroundSpace, E):
    if space.is_finite:
        return np.array([(E >> i) & 1 for i in range(space.n)], dtype=float)
    return NatFunction.indicator(E)


def restrict(space: GroundSpace, f, E):
    """``f * chi_E``."""
    if space.is_finite:
        return np.asarray(f, dtype=float) * indicator(space, E)
    return f.restrict(E)


def sup_abs(space: GroundSpace, f) -> float:
    if space.is_finite:
        return float(np.max(np.abs(f))) if len(f) else 0.0
    return f.sup_abs()
