"""Non-additive set functions: representations, classification, variation, atoms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSetFunction, SeriesDiverges, Unsupported
from .ground import EpSet, GroundSpace, NatFunction, ep_extrema_of, mask_points, submasks

# absolute slack used when comparing computed set-function values
TOL = 1e-12
EXHAUSTIVE_CAP = 12
TABLE_CAP = 20


def _slack(*vals) -> float:
    return TOL * (1.0 + max(abs(float(v)) for v in vals))


def subset_sums(w) -> np.ndarray:
    """Vector ``t`` with ``t[mask] = sum(w[i] for i in mask)``."""
    t = np.zeros(1, dtype=float)
    for wi in np.asarray(w, dtype=float):
        t = np.concatenate([t, t + wi])
    return t


class SetFunction:
    """Base class: a map from measurable sets to [0, inf) with value 0 on the empty set.

    Subclasses implement ``evaluate`` and (on finite spaces) may override ``table``.
    """

    space: GroundSpace

    def evaluate(self, A) -> float:
        raise NotImplementedError

    def __call__(self, A) -> float:
        return self.evaluate(self.space.check_set(A))

    def table(self) -> np.ndarray:
        """Values on every subset of a finite space, indexed by bitmask."""
        n = self._finite_n()
        return np.array([self.evaluate(m) for m in range(1 << n)], dtype=float)

    def singletons(self):
        """``s -> nu({s})`` as a vector (finite) or :class:`NatFunction` (naturals)."""
        if self.space.is_finite:
            return np.array([self.evaluate(1 << i) for i in range(self.space.n)], dtype=float)
        raise Unsupported(f"no closed-form singleton masses for {self.describe()}")

    def describe(self) -> str:
        return type(self).__name__

    def _finite_n(self) -> int:
        if not self.space.is_finite:
            raise Unsupported("operation requires a finite ground space")
        if self.space.n > TABLE_CAP:
            raise Unsupported(f"tables are capped at {TABLE_CAP} points")
        return self.space.n

    def scaled(self, alpha: float) -> "Scaled":
        return Scaled(float(alpha), self)

    def __add__(self, other: "SetFunction") -> "SumOf":
        return SumOf((self, other))


@dataclass(eq=False)
class Table(SetFunction):
    space: GroundSpace
    values: np.ndarray

    def __post_init__(self):
        n = self._finite_n()
        v = np.asarray(self.values, dtype=float)
        if v.shape != (1 << n,):
            raise InvalidSetFunction(f"table needs {1 << n} values, got {v.shape}")
        if v[0] != 0.0:
            raise InvalidSetFunction("nu(empty) must be exactly 0")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise InvalidSetFunction("table values must be finite and >= 0")
        v.setflags(write=False)
        self.values = v

    @classmethod
    def from_masks(cls, space: GroundSpace, entries: dict) -> "Table":
        """Build from ``{mask: value}``; missing masks are 0."""
        v = np.zeros(1 << space.n)
        for m, val in entries.items():
            v[space.check_set(m)] = float(val)
        return cls(space, v)

    @classmethod
    def from_function(cls, space: GroundSpace, fn) -> "Table":
        return cls(space, np.array([fn(m) for m in range(1 << space.n)], dtype=float))

    def evaluate(self, A) -> float:
        return float(self.values[A])

    def table(self) -> np.ndarray:
        return self.values

    def singletons(self):
        return np.array([self.values[1 << i] for i in range(self.space.n)])


@dataclass(eq=False)
class AdditiveWeights(SetFunction):
    """``nu(A) = sum of w over A``; on the naturals ``w`` must be summable."""

    space: GroundSpace
    weights: object

    def __post_init__(self):
        if self.space.is_finite:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (self.space.n,) or np.any(w < 0) or not np.all(np.isfinite(w)):
                raise InvalidSetFunction("weights must be n finite values >= 0")
            self.weights = w
        else:
            w = self.weights
            if not isinstance(w, NatFunction):
                raise InvalidSetFunction("weights on the naturals must be a NatFunction")
            if ep_extrema_of(w, EpSet.full()).inf < 0:
                raise InvalidSetFunction("weights must be >= 0")
            try:
                w.series_sum()
            except SeriesDiverges as exc:
                raise InvalidSetFunction(f"weights on the naturals must be summable: {exc}") from exc

    def evaluate(self, A) -> float:
        if self.space.is_finite:
            return math.fsum(self.weights[mask_points(A)])
        return self.weights.series_sum(A)

    def table(self) -> np.ndarray:
        self._finite_n()
        return subset_sums(self.weights)

    def singletons(self):
        return self.weights if not self.space.is_finite else self.weights.copy()


# distortion maps ----------------------------------------------------------- #


@dataclass(frozen=True)
class PowerMap:
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidSetFunction("power distortion needs gamma > 0")

    def __call__(self, t):
        return np.power(t, self.gamma)


@dataclass(frozen=True)
class ClampedAffineMap:
    """``t -> min(cap, slope * t)``."""

    slope: float
    cap: float = math.inf

    def __post_init__(self):
        if self.slope < 0 or self.cap < 0:
            raise InvalidSetFunction("clamped affine distortion needs slope, cap >= 0")

    def __call__(self, t):
        return np.minimum(self.cap, self.slope * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Monotone interpolation through user knots ``(t, g(t))``; ``g(0) = 0`` is implied."""

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = sorted({(float(a), float(b)) for a, b in self.knots} | {(0.0, 0.0)})
        xs = [a for a, _ in pts]
        ys = [b for _, b in pts]
        if len(set(xs)) != len(xs) or any(y2 < y1 for y1, y2 in zip(ys, ys[1:])) or ys[0] != 0.0:
            raise InvalidSetFunction("piecewise-linear distortion must be a monotone function with g(0)=0")
        object.__setattr__(self, "knots", tuple(pts))

    def __call__(self, t):
        xs = [a for a, _ in self.knots]
        ys = [b for _, b in self.knots]
        return np.interp(t, xs, ys)


@dataclass(eq=False)
class Distortion(SetFunction):
    """``nu(A) = g(base(A))`` for an additive base and a monotone map ``g``."""

    g: object
    base: AdditiveWeights

    def __post_init__(self):
        if not isinstance(self.base, AdditiveWeights):
            raise InvalidSetFunction("distortion base must be AdditiveWeights")
        self.space = self.base.space

    def evaluate(self, A) -> float:
        return float(self.g(self.base.evaluate(A)))

    def table(self) -> np.ndarray:
        t = np.asarray(self.g(self.base.table()), dtype=float)
        t[0] = 0.0
        return t

    def singletons(self):
        if self.space.is_finite:
            return np.asarray(self.g(self.base.weights), dtype=float)
        w = self.base.weights
        if isinstance(self.g, PowerMap):
            return w.abs_pow(self.g.gamma)
        if isinstance(self.g, ClampedAffineMap) and self.g.slope * w.sup_abs() <= self.g.cap:
            return w.scale(self.g.slope)
        raise Unsupported("no closed form for the singleton masses of this distortion")

    def describe(self):
        return f"Distortion({self.g})"


@dataclass(eq=False)
class CardinalityRule(SetFunction):
    """``nu(A) = finite_value`` for nonempty finite A, ``infinite_value`` for infinite A."""

    space: GroundSpace
    finite_value: float
    infinite_value: float

    def __post_init__(self):
        for v in (self.finite_value, self.infinite_value):
            if not (math.isfinite(v) and v >= 0):
                raise InvalidSetFunction("cardinality-rule values must be finite and >= 0")
        self.finite_value = float(self.finite_value)
        self.infinite_value = float(self.infinite_value)

    def evaluate(self, A) -> float:
        if self.space.is_finite:
            return self.finite_value if A else 0.0
        if A.is_empty():
            return 0.0
        return self.finite_value if A.is_finite() else self.infinite_value

    def table(self) -> np.ndarray:
        n = self._finite_n()
        t = np.full(1 << n, self.finite_value)
        t[0] = 0.0
        return t

    def singletons(self):
        if self.space.is_finite:
            return np.full(self.space.n, self.finite_value)
        return NatFunction.constant(self.finite_value)

    def describe(self):
        return f"CardinalityRule({self.finite_value:g}, {self.infinite_value:g})"


@dataclass(eq=False)
class Scaled(SetFunction):
    alpha: float
    inner: SetFunction

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise InvalidSetFunction("scale factor must be finite and >= 0")
        self.space = self.inner.space

    def evaluate(self, A) -> float:
        return self.alpha * self.inner.evaluate(A)

    def table(self) -> np.ndarray:
        return self.alpha * self.inner.table()

    def singletons(self):
        s = self.inner.singletons()
        return s.scale(self.alpha) if isinstance(s, NatFunction) else self.alpha * s

    def describe(self):
        return f"{self.alpha:g}*{self.inner.describe()}"


@dataclass(eq=False)
class SumOf(SetFunction):
    parts: tuple

    def __post_init__(self):
        self.parts = tuple(self.parts)
        if not self.parts:
            raise InvalidSetFunction("empty sum")
        self.space = self.parts[0].space
        for p in self.parts[1:]:
            self.space.check_same(p.space)

    def evaluate(self, A) -> float:
        return math.fsum(p.evaluate(A) for p in self.parts)

    def table(self) -> np.ndarray:
        return np.sum([p.table() for p in self.parts], axis=0)

    def singletons(self):
        parts = [p.singletons() for p in self.parts]
        out = parts[0]
        for s in parts[1:]:
            out = out + s
        return out

    def describe(self):
        return " + ".join(p.describe() for p in self.parts)


@dataclass(eq=False)
class Lambda(SetFunction):
    """Wrap an arbitrary callable on a finite space (used for derived set functions)."""

    space: GroundSpace
    fn: object
    name: str = "Lambda"

    def evaluate(self, A) -> float:
        return float(self.fn(A))

    def describe(self):
        return self.name


def is_additive_repr(nu: SetFunction) -> bool:
    """Structurally additive: weights, nonnegative scalings and sums of those."""
    if isinstance(nu, AdditiveWeights):
        return True
    if isinstance(nu, Scaled):
        return is_additive_repr(nu.inner)
    if isinstance(nu, SumOf):
        return all(is_additive_repr(p) for p in nu.parts)
    if isinstance(nu, CardinalityRule):
        return nu.finite_value == 0.0 and nu.infinite_value == 0.0
    return False


# --------------------------------------------------------------------------- #
# classification

PROPERTIES = (
    "monotone",
    "subadditive",
    "sigma_subadditive",
    "finitely_additive",
    "sigma_additive",
    "null_additive",
    "property_sigma",
    "o_continuous",
    "exhaustive",
    "regular",
)


@dataclass(frozen=True)
class Flag:
    status: str  # "holds" | "fails" | "not_decidable"
    witness: tuple = ()
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @classmethod
    def ok(cls, note=""):
        return cls("holds", (), note)

    @classmethod
    def fail(cls, *witness, note=""):
        return cls("fails", tuple(witness), note)

    @classmethod
    def unknown(cls, note=""):
        return cls("not_decidable", (), note)


@dataclass(frozen=True)
class PropertyReport:
    flags: dict = field(default_factory=dict)

    def __getattr__(self, name):
        flags = object.__getattribute__(self, "flags")
        if name in flags:
            return flags[name]
        raise AttributeError(name)

    def holds(self, name: str) -> bool:
        return self.flags[name].holds

    @property
    def submeasure(self) -> bool:
        return self.holds("monotone") and self.holds("subadditive")


def _disjoint_pairs(n: int):
    A = np.zeros(1, dtype=np.int64)
    B = np.zeros(1, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        A = np.concatenate([A, A | bit, A])
        B = np.concatenate([B, B, B | bit])
    return A, B


_STRUCTURAL = "finite space: decreasing sequences stabilize and disjoint sequences are eventually empty"


def _classify_finite(nu: SetFunction) -> PropertyReport:
    n = nu.space.n
    if n > EXHAUSTIVE_CAP:
        note = f"exhaustive checks are capped at {EXHAUSTIVE_CAP} points"
        return PropertyReport({p: Flag.unknown(note) for p in PROPERTIES})
    t = nu.table()
    idx = np.arange(1 << n, dtype=np.int64)
    tol = TOL * (1.0 + np.abs(t))
    flags = {}

    mono = Flag.ok()
    for i in range(n):
        bit = 1 << i
        A = idx[(idx & bit) == 0]
        bad = np.nonzero(t[A] > t[A | bit] + tol[A])[0]
        if bad.size:
            a = int(A[bad[0]])
            mono = Flag.fail(a, a | bit, note="A subset of B with nu(A) > nu(B)")
            break
    flags["monotone"] = mono

    A, B = _disjoint_pairs(n)
    keep = (A != 0) & (B != 0)
    A, B = A[keep], B[keep]
    U = A | B
    excess = t[U] - t[A] - t[B]
    slack = TOL * (1.0 + np.abs(t[U]) + np.abs(t[A]) + np.abs(t[B]))
    bad = np.nonzero(excess > slack)[0]
    flags["subadditive"] = (
        Flag.fail(int(A[bad[0]]), int(B[bad[0]]), note="disjoint A, B with nu(A|B) > nu(A) + nu(B)")
        if bad.size
        else Flag.ok()
    )
    bad = np.nonzero(np.abs(excess) > slack)[0]
    flags["finitely_additive"] = (
        Flag.fail(int(A[bad[0]]), int(B[bad[0]]), note="disjoint A, B with nu(A|B) != nu(A) + nu(B)")
        if bad.size
        else Flag.ok()
    )
    same = "countable disjoint families of nonempty sets in a finite space are finite"
    flags["sigma_subadditive"] = Flag(flags["subadditive"].status, flags["subadditive"].witness, same)
    flags["sigma_additive"] = Flag(flags["finitely_additive"].status, flags["finitely_additive"].witness, same)

    nulls = idx[t == 0.0]
    nadd = Flag.ok()
    for b in nulls[1:]:
        bad = np.nonzero(np.abs(t[idx | b] - t) > tol)[0]
        if bad.size:
            nadd = Flag.fail(int(idx[bad[0]]), int(b), note="nu(B) = 0 but nu(A|B) != nu(A)")
            break
    flags["null_additive"] = nadd

    union = 0
    used = []
    psig = Flag.ok()
    for b in nulls[1:]:
        union |= int(b)
        used.append(int(b))
        if t[union] != 0.0:
            psig = Flag.fail(*used, note="union of these null sets is not null")
            break
    flags["property_sigma"] = psig

    flags["o_continuous"] = Flag.ok(_STRUCTURAL)
    flags["exhaustive"] = Flag.ok(_STRUCTURAL)
    flags["regular"] = Flag.ok("discrete topology: every set is compact and open")
    return PropertyReport(flags)


def _classify_cardinality_nat(alpha: float, beta: float) -> PropertyReport:
    one = EpSet.finite([0])
    nat = EpSet.full()
    ev, od = EpSet.residue(0, 2), EpSet.residue(1, 2)
    f = {}
    f["monotone"] = Flag.ok() if alpha <= beta else Flag.fail(one, nat, note="finite subset outweighs N")
    f["subadditive"] = Flag.ok("every disjoint split of an infinite set has an infinite piece")
    if alpha > 0 or beta == 0:
        f["sigma_subadditive"] = Flag.ok()
    else:
        f["sigma_subadditive"] = Flag.fail(nat, "singletons {n}", note="N is a countable union of null singletons")
    if alpha == 0 and beta == 0:
        f["finitely_additive"] = Flag.ok()
        f["sigma_additive"] = Flag.ok()
    else:
        w = (EpSet.finite([0]), EpSet.finite([1])) if alpha > 0 else (ev, od)
        f["finitely_additive"] = Flag.fail(*w)
        f["sigma_additive"] = Flag.fail(*w)
    if alpha > 0 and beta == 0:
        f["null_additive"] = Flag.fail(one, EpSet.tail(1), note="nu(B)=0 yet nu({0} | B) != nu({0})")
    else:
        f["null_additive"] = Flag.ok()
    if alpha == 0 and beta > 0:
        f["property_sigma"] = Flag.fail(nat, "singletons {n}", note="union of null singletons is N")
    else:
        f["property_sigma"] = Flag.ok()
    if beta > 0:
        f["o_continuous"] = Flag.fail("A_k = {n >= k}", note="decreasing tails keep value infinite_value")
    else:
        f["o_continuous"] = Flag.ok("decreasing nonempty finite sets cannot shrink to the empty set")
    if alpha > 0:
        f["exhaustive"] = Flag.fail("A_k = {k}", note="disjoint singletons keep value finite_value")
    elif beta > 0:
        f["exhaustive"] = Flag.fail("A_k = {n : n = 2^k - 1 mod 2^(k+1)}", note="disjoint infinite residue classes")
    else:
        f["exhaustive"] = Flag.ok()
    if beta > 0:
        f["regular"] = Flag.fail(nat, note="compact sets are finite; nu(N minus K) = infinite_value for every finite K")
    else:
        f["regular"] = Flag.ok("discrete topology on N; compact = finite")
    return PropertyReport(f)


def classify(nu: SetFunction) -> PropertyReport:
    if nu.space.is_finite:
        return _classify_finite(nu)
    if isinstance(nu, CardinalityRule):
        return _classify_cardinality_nat(nu.finite_value, nu.infinite_value)
    if is_additive_repr(nu):
        return PropertyReport({p: Flag.ok("summable nonnegative weights: a finite measure") for p in PROPERTIES})
    if isinstance(nu, Scaled):
        if nu.alpha == 0:
            return PropertyReport({p: Flag.ok("zero set function") for p in PROPERTIES})
        return classify(nu.inner)
    return PropertyReport({p: Flag.unknown(f"no decidable analysis for {nu.describe()} on N") for p in PROPERTIES})


def recheck_witness(nu: SetFunction, prop: str, flag: Flag) -> bool:
    """True if a finite-space Fails witness really violates ``prop``."""
    w = flag.witness
    if prop == "monotone":
        a, b = w
        return (a & ~b) == 0 and nu(a) > nu(b) + _slack(nu(a), nu(b))
    if prop in ("subadditive", "sigma_subadditive"):
        a, b = w
        return a & b == 0 and nu(a | b) > nu(a) + nu(b) + _slack(nu(a | b), nu(a), nu(b))
    if prop in ("finitely_additive", "sigma_additive"):
        a, b = w
        return a & b == 0 and abs(nu(a | b) - nu(a) - nu(b)) > _slack(nu(a | b), nu(a), nu(b))
    if prop == "null_additive":
        a, b = w
        return nu(b) == 0.0 and abs(nu(a | b) - nu(a)) > _slack(nu(a | b), nu(a))
    if prop == "property_sigma":
        u = 0
        for b in w:
            if nu(b) != 0.0:
                return False
            u |= b
        return nu(u) != 0.0
    raise ValueError(f"no finite witness semantics for {prop}")


# --------------------------------------------------------------------------- #
# variation, semivariation, atoms


def _variation_dp(vals, E: int) -> list:
    """``best[m]`` = sup of sum vals[A_i] over disjoint families inside ``m``, for m subset of E.

    The DP picks the maximizing family; its value is then re-summed with fsum so the
    result is the correctly rounded sum of that family, independent of DP order.
    """
    best = [0.0] * (E + 1)
    choice = [0] * (E + 1)
    for m in sorted(submasks(E)):
        if m == 0:
            continue
        low = m & -m
        rest = m ^ low
        b, c = best[rest], 0  # low point left out of every block
        sub = rest
        while True:
            a = sub | low
            v = vals[a] + best[m ^ a]
            if v > b:
                b, c = v, a
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[m] = b
        choice[m] = c
    exact = [0.0] * (E + 1)
    for m in submasks(E):
        terms = []
        k = m
        while k:
            a = choice[k]
            if a:
                terms.append(vals[a])
                k ^= a
            else:
                k ^= k & -k
        exact[m] = math.fsum(terms)
    return exact


def variation_table(nu: SetFunction) -> np.ndarray:
    """Variation of ``nu`` on every subset of a finite space."""
    n = nu._finite_n()
    full = (1 << n) - 1
    return np.array(_variation_dp(np.abs(nu.table()).tolist(), full))


def _nat_variation(nu: SetFunction, E: EpSet) -> float:
    if is_additive_repr(nu):
        return nu.evaluate(E)
    if isinstance(nu, CardinalityRule):
        a, b = nu.finite_value, nu.infinite_value
        if E.is_finite():
            return E.cardinality() * a
        # an infinite set splits into any number of infinite or singleton pieces
        return math.inf if (a > 0 or b > 0) else 0.0
    if isinstance(nu, Scaled):
        return 0.0 if nu.alpha == 0 else nu.alpha * _nat_variation(nu.inner, E)
    raise Unsupported(f"variation of {nu.describe()} on N has no decidable analysis")


def variation(nu: SetFunction, E=None) -> float:
    """Supremum of ``sum nu(A_i)`` over finite disjoint families inside ``E``."""
    E = nu.space.full() if E is None else nu.space.check_set(E)
    if not nu.space.is_finite:
        return _nat_variation(nu, E)
    nu._finite_n()
    # absolute values so signed set functions (indefinite integrals) are handled too
    return _variation_dp(np.abs(nu.table()).tolist(), E)[E]


def semivariation(nu: SetFunction, A=None) -> float:
    # the algebra is the full power set (or is closed under the sets we query), and the
    # variation is monotone, so the infimum over supersets is attained at A itself
    return variation(nu, A)


def variation_distance(nu1: SetFunction, nu2: SetFunction, A=None) -> float:
    """Variation of the signed difference ``nu1 - nu2`` on ``A``."""
    nu1.space.check_same(nu2.space)
    nu1._finite_n()
    A = nu1.space.full() if A is None else nu1.space.check_set(A)
    diff = np.abs(nu1.table() - nu2.table()).tolist()
    return _variation_dp(diff, A)[A]


def is_atom(nu: SetFunction, A: int, t=None):
    """``(True, None)`` if ``A`` is an atom, else ``(False, witness subset)``."""
    t = nu.table() if t is None else t
    if not t[A] > 0:
        return False, A
    for b in submasks(A):
        if t[b] != 0.0 and t[A ^ b] != 0.0:
            return False, b
    return True, None


def find_atoms(nu: SetFunction) -> list[int]:
    if not nu.space.is_finite:
        raise Unsupported("atom search needs a finite space")
    if nu.space.n > EXHAUSTIVE_CAP:
        raise Unsupported(f"atom search is capped at {EXHAUSTIVE_CAP} points")
    t = nu.table()
    return [A for A in range(1, len(t)) if is_atom(nu, A, t)[0]]
