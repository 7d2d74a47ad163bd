"""Interval-valued integration: Gamma = [nu1, nu2], H = [h1, h2], T_H and the atom theorems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInterval, InvalidSetFunction, NoSinglePoint, NotAnAtom, SeriesDiverges, Unsupported
from .ground import GroundSpace, NatFunction, ep_extrema_of, mask_points, submasks
from .interval import Interval, hausdorff, minkowski_sum
from .rl_integral import rl_integrate
from .setfunc import EXHAUSTIVE_CAP, SetFunction, classify, is_atom, variation

TOL = 1e-12
# exhaustive disjoint-pair / subset scans above this size fall back to seeded samples
SCAN_CAP = 8


@dataclass(eq=False)
class IvSetFunction:
    """``Gamma(A) = [nu1(A), nu2(A)]`` with ``nu1 <= nu2``."""

    nu1: SetFunction
    nu2: SetFunction

    def __post_init__(self):
        self.nu1.space.check_same(self.nu2.space)
        sp = self.space
        if sp.is_finite:
            t1, t2 = self.nu1.table(), self.nu2.table()
            bad = np.nonzero(t1 > t2)[0]
            if len(bad):
                A = int(bad[0])
                raise InvalidSetFunction(f"nu1 > nu2 on mask {A:#b}: {t1[A]} > {t2[A]}")

    @property
    def space(self) -> GroundSpace:
        return self.nu1.space

    def evaluate(self, A) -> Interval:
        return Interval(self.nu1.evaluate(A), self.nu2.evaluate(A))

    def __call__(self, A) -> Interval:
        return self.evaluate(self.space.check_set(A))

    def scaled(self, alpha: float) -> "IvSetFunction":
        return IvSetFunction(self.nu1.scaled(alpha), self.nu2.scaled(alpha))

    def __add__(self, other: "IvSetFunction") -> "IvSetFunction":
        return IvSetFunction(self.nu1 + other.nu1, self.nu2 + other.nu2)

    def is_multisubmeasure(self) -> bool:
        return classify(self.nu1).submeasure and classify(self.nu2).submeasure

    def variation(self, E=None) -> tuple[float, float]:
        """``(var nu1, var nu2)``; the second is used as the variation of Gamma."""
        return variation(self.nu1, E), variation(self.nu2, E)

    def precedes(self, other: "IvSetFunction", tol: float = TOL) -> bool:
        return bool(np.all(self.nu1.table() <= other.nu1.table() + tol) and np.all(self.nu2.table() <= other.nu2.table() + tol))

    def issubset(self, other: "IvSetFunction", tol: float = TOL) -> bool:
        return bool(np.all(other.nu1.table() <= self.nu1.table() + tol) and np.all(self.nu2.table() <= other.nu2.table() + tol))


def _leq(space, f, g) -> bool:
    if space.is_finite:
        return bool(np.all(np.asarray(f, float) <= np.asarray(g, float)))
    return ep_extrema_of(g - f, space.full()).inf >= 0


@dataclass(eq=False)
class IvFunction:
    """``H(s) = [h1(s), h2(s)]`` with ``0 <= h1 <= h2``."""

    space: GroundSpace
    h1: object
    h2: object

    def __post_init__(self):
        if self.space.is_finite:
            self.h1 = np.asarray(self.h1, dtype=float)
            self.h2 = np.asarray(self.h2, dtype=float)
            if self.h1.shape != (self.space.n,) or self.h2.shape != (self.space.n,):
                raise InvalidInterval(f"H endpoints must have {self.space.n} values")
        zero = np.zeros(self.space.n) if self.space.is_finite else NatFunction.constant(0.0)
        if not _leq(self.space, zero, self.h1):
            raise InvalidInterval("h1 must be nonnegative")
        if not _leq(self.space, self.h1, self.h2):
            raise InvalidInterval("need h1 <= h2 pointwise")

    def __call__(self, s: int) -> Interval:
        if self.space.is_finite:
            return Interval(self.h1[s], self.h2[s])
        return Interval(self.h1(s), self.h2(s))

    @classmethod
    def constant(cls, space, a: Interval) -> "IvFunction":
        if space.is_finite:
            return cls(space, np.full(space.n, a.lo), np.full(space.n, a.hi))
        return cls(space, NatFunction.constant(a.lo), NatFunction.constant(a.hi))

    def __add__(self, other: "IvFunction") -> "IvFunction":
        return IvFunction(self.space, self.h1 + other.h1, self.h2 + other.h2)

    def scaled(self, alpha: float) -> "IvFunction":
        if self.space.is_finite:
            return IvFunction(self.space, alpha * self.h1, alpha * self.h2)
        return IvFunction(self.space, self.h1.scale(alpha), self.h2.scale(alpha))

    def meet(self, other: "IvFunction") -> "IvFunction":
        self._finite("meet")
        return IvFunction(self.space, np.minimum(self.h1, other.h1), np.minimum(self.h2, other.h2))

    def join(self, other: "IvFunction") -> "IvFunction":
        self._finite("join")
        return IvFunction(self.space, np.maximum(self.h1, other.h1), np.maximum(self.h2, other.h2))

    def precedes(self, other: "IvFunction") -> bool:
        return _leq(self.space, self.h1, other.h1) and _leq(self.space, self.h2, other.h2)

    def issubset(self, other: "IvFunction") -> bool:
        return _leq(self.space, other.h1, self.h1) and _leq(self.space, self.h2, other.h2)

    def sup_distance(self, other: "IvFunction") -> float:
        """``sup_s d_H(self(s), other(s))``."""
        self._finite("sup_distance")
        return float(max(np.max(np.abs(self.h1 - other.h1)), np.max(np.abs(self.h2 - other.h2))))

    def _finite(self, what):
        if not self.space.is_finite:
            raise Unsupported(f"{what} needs a finite space")


# --------------------------------------------------------------------------- #
# integral


@dataclass(frozen=True)
class IvIntegralReport:
    value: Interval
    lo: object
    hi: object
    crosscheck: float | None = None  # d_H to the direct Minkowski evaluator (finite spaces)


def minkowski_singleton_sum(H: IvFunction, Gamma: IvSetFunction, E: int) -> Interval:
    """Direct ``sigma_{H,Gamma}`` on the singleton partition of ``E``."""
    return minkowski_sum(
        Interval(H.h1[s] * Gamma.nu1.evaluate(1 << s), H.h2[s] * Gamma.nu2.evaluate(1 << s)) for s in mask_points(E)
    )


def iv_rl_integrate(H: IvFunction, Gamma: IvSetFunction, E=None, crosscheck: bool = True) -> IvIntegralReport:
    sp = Gamma.space
    sp.check_same(H.space)
    E = sp.full() if E is None else sp.check_set(E)
    reps = []
    for name, h, nu in (("h1/nu1", H.h1, Gamma.nu1), ("h2/nu2", H.h2, Gamma.nu2)):
        r = rl_integrate(h, nu, E)
        if not r.integrable:
            w = r.witness or {}
            raise SeriesDiverges(f"endpoint {name}: integral is {r.status}", partial_sums=w.get("partial_sums", ()))
        reps.append(r)
    value = Interval(reps[0].value, reps[1].value)
    gap = None
    if sp.is_finite and crosscheck:
        gap = hausdorff(value, minkowski_singleton_sum(H, Gamma, E))
        if gap > TOL:
            raise AssertionError(f"endpoint decomposition disagrees with Minkowski evaluator by {gap}")
    return IvIntegralReport(value, reps[0], reps[1], gap)


def iv_integral(H: IvFunction, Gamma: IvSetFunction, E=None) -> Interval:
    return iv_rl_integrate(H, Gamma, E, crosscheck=False).value


# --------------------------------------------------------------------------- #
# T_H


def _sample_masks(n: int, rng, count: int) -> list[int]:
    return [int(x) for x in rng.integers(0, 1 << n, size=count)]


def disjoint_pairs(n: int, seed: int = 7, count: int = 2000):
    """All disjoint pairs for small ``n``, a seeded sample otherwise."""
    if n <= SCAN_CAP:
        full = (1 << n) - 1
        for A in range(1 << n):
            for B in submasks(full ^ A):
                yield A, B
        return
    rng = np.random.default_rng(seed)
    full = (1 << n) - 1
    for A in _sample_masks(n, rng, count):
        B = int(rng.integers(0, 1 << n)) & (full ^ A)
        yield A, B


@dataclass(frozen=True)
class CheckResult:
    name: str
    applicable: bool
    checked: int = 0
    violations: tuple = ()
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SuiteReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def by_name(self) -> dict:
        return {c.name: c for c in self.checks}


class IvIndefinite:
    """``T_H(E) = integral over E of H dGamma``; finite spaces are tabulated once."""

    def __init__(self, H: IvFunction, Gamma: IvSetFunction):
        self.H, self.Gamma = H, Gamma
        self.space = Gamma.space
        self._lo = self._hi = None
        if self.space.is_finite and self.space.n <= 20:
            from .rl_integral import indefinite_integral

            self._lo = indefinite_integral(H.h1, Gamma.nu1).table()
            self._hi = indefinite_integral(H.h2, Gamma.nu2).table()

    def __call__(self, E) -> Interval:
        if self._lo is not None:
            return Interval(self._lo[E], self._hi[E])
        return iv_integral(self.H, self.Gamma, E)


def iv_indefinite(H: IvFunction, Gamma: IvSetFunction, seed: int = 7):
    """``(T_H, report)``; the report covers Thm 4.4.a and 4.4.c and monotonicity."""
    T = IvIndefinite(H, Gamma)
    sp = Gamma.space
    if not sp.is_finite:
        return T, SuiteReport(())
    n = sp.n
    S = sp.full()
    checks = []
    bad = []
    k = 0
    for A, B in disjoint_pairs(n, seed):
        k += 1
        d = hausdorff(T(A | B), T(A) + T(B))
        if d > TOL * (1 + T(A | B).hi):
            bad.append((A, B, d))
    checks.append(CheckResult("finite_additivity", True, k, tuple(bad[:5])))
    if T(0) != Interval.zero():
        checks.append(CheckResult("empty_is_zero", True, 1, ((0, str(T(0))),)))
    else:
        checks.append(CheckResult("empty_is_zero", True, 1))
    i2 = rl_integrate(H.h2, Gamma.nu2).value
    nrm = T(S).norm()
    checks.append(CheckResult("norm_equals_h2_integral", True, 1, () if abs(nrm - i2) <= TOL * (1 + abs(i2)) else ((nrm, i2),)))
    if n <= EXHAUSTIVE_CAP:
        from .setfunc import _variation_dp

        vbar = _variation_dp(list(T._hi), S)[S]
        checks.append(
            CheckResult("variation_equals_h2_integral", True, 1, () if abs(vbar - i2) <= 1e-12 * (1 + abs(i2)) else ((vbar, i2),))
        )
    mono = classify(Gamma.nu1).holds("monotone") and classify(Gamma.nu2).holds("monotone") if n <= EXHAUSTIVE_CAP else False
    bad = []
    k = 0
    if mono:
        for A in range(1 << n):
            for i in range(n):
                if not (A >> i) & 1:
                    k += 1
                    if not T(A).precedes(T(A | 1 << i), TOL):
                        bad.append((A, A | 1 << i))
    checks.append(CheckResult("monotone_when_gamma_monotone", mono, k, tuple(bad[:5])))
    checks.append(
        CheckResult("countably_additive", True, 0, note="finite space: countable disjoint families are finite up to empty sets")
    )
    return T, SuiteReport(tuple(checks))


def _subsets_for(n: int, seed: int) -> list[int]:
    if n <= SCAN_CAP:
        return list(range(1 << n))
    return _sample_masks(n, np.random.default_rng(seed), 512)


def iv_monotonicity_suite(
    G: IvFunction,
    H: IvFunction,
    Gamma: IvSetFunction,
    Gamma1: IvSetFunction | None = None,
    Gamma2: IvSetFunction | None = None,
    seed: int = 7,
) -> SuiteReport:
    """Order, inclusion, lattice and distance relations of Thms 4.3 to 4.5 on every set ``E``."""
    sp = Gamma.space
    if not sp.is_finite:
        raise Unsupported("the interval suite runs on finite spaces")
    sets = _subsets_for(sp.n, seed)
    I = lambda F, Gm, E: iv_integral(F, Gm, E)  # noqa: E731
    out = []

    def run(name, applicable, pred, note=""):
        bad = []
        if applicable:
            for E in sets:
                w = pred(E)
                if w is not None:
                    bad.append((E,) + tuple(w))
        out.append(CheckResult(name, applicable, len(sets) if applicable else 0, tuple(bad[:5]), note))

    def chk(ok, *w):
        return None if ok else w

    run("order_G_le_H", G.precedes(H), lambda E: chk(I(G, Gamma, E).precedes(I(H, Gamma, E), TOL), str(I(G, Gamma, E))))
    run("inclusion_G_in_H", G.issubset(H), lambda E: chk(I(G, Gamma, E).issubset(I(H, Gamma, E), TOL)))
    GH_meet, GH_join = G.meet(H), G.join(H)
    run(
        "lattice_meet",
        True,
        lambda E: chk(I(GH_meet, Gamma, E).precedes(I(G, Gamma, E) & I(H, Gamma, E), TOL)),
    )
    run(
        "lattice_join",
        True,
        lambda E: chk((I(G, Gamma, E) | I(H, Gamma, E)).precedes(I(GH_join, Gamma, E), TOL)),
    )
    GpH = G + H
    run(
        "additivity_in_H",
        True,
        lambda E: chk(hausdorff(I(GpH, Gamma, E), I(G, Gamma, E) + I(H, Gamma, E)) <= TOL * (1 + I(GpH, Gamma, E).hi)),
    )
    for alpha in (0.0, 0.5, 2.0):
        sH, sG = H.scaled(alpha), Gamma.scaled(alpha)
        run(
            f"homogeneity_H_{alpha:g}",
            True,
            lambda E: chk(hausdorff(I(sH, Gamma, E), alpha * I(H, Gamma, E)) <= TOL * (1 + alpha * I(H, Gamma, E).hi)),
        )
        run(
            f"homogeneity_Gamma_{alpha:g}",
            True,
            lambda E: chk(hausdorff(I(H, sG, E), alpha * I(H, Gamma, E)) <= TOL * (1 + alpha * I(H, Gamma, E).hi)),
        )
    vbar2 = variation(Gamma.nu2)
    dist = G.sup_distance(H)
    run(
        "distance_bound",
        True,
        lambda E: chk(hausdorff(I(G, Gamma, E), I(H, Gamma, E)) <= dist * variation(Gamma.nu2, E) + TOL),
        note=f"variation of Gamma read as var(nu2)={vbar2!r}; var(nu1)={variation(Gamma.nu1)!r}",
    )
    if Gamma1 is not None and Gamma2 is not None:
        Gsum = Gamma1 + Gamma2
        run(
            "additivity_in_Gamma",
            True,
            lambda E: chk(hausdorff(I(H, Gsum, E), I(H, Gamma1, E) + I(H, Gamma2, E)) <= TOL * (1 + I(H, Gsum, E).hi)),
        )
        run("order_Gamma1_le_Gamma2", Gamma1.precedes(Gamma2), lambda E: chk(I(H, Gamma1, E).precedes(I(H, Gamma2, E), TOL)))
        run("inclusion_Gamma1_in_Gamma2", Gamma1.issubset(Gamma2), lambda E: chk(I(H, Gamma1, E).issubset(I(H, Gamma2, E), TOL)))
    return SuiteReport(tuple(out))


# --------------------------------------------------------------------------- #
# atoms


@dataclass(frozen=True)
class AtomResult:
    b: int
    value: Interval
    integral: Interval
    exact: bool
    hypotheses: dict = field(default_factory=dict)


def iv_atom_integral(H: IvFunction, Gamma: IvSetFunction, B: int) -> AtomResult:
    """Thm 4.9: on an atom ``B`` the integral is ``H(b) . Gamma({b})`` for a single point ``b``."""
    sp = Gamma.space
    if not sp.is_finite or sp.n > EXHAUSTIVE_CAP:
        raise Unsupported(f"atom integrals need a finite space with n <= {EXHAUSTIVE_CAP}")
    B = sp.check_set(B)
    for label, nu in (("nu1", Gamma.nu1), ("nu2", Gamma.nu2)):
        ok, w = is_atom(nu, B)
        if not ok:
            raise NotAnAtom(f"{mask_points(B)} is not an atom of {label}", witness=mask_points(w))
    hyp = {
        "regular": "holds (discrete space)",
        "finite_variation": "holds (finite space)",
        "property_sigma": "holds"
        if classify(Gamma.nu1).holds("property_sigma") and classify(Gamma.nu2).holds("property_sigma")
        else "fails",
    }
    cands = []
    for b in mask_points(B):
        rest = B & ~(1 << b)
        if all(nu.evaluate(1 << b) == nu.evaluate(B) and nu.evaluate(rest) == 0.0 for nu in (Gamma.nu1, Gamma.nu2)):
            cands.append(b)
    if len(cands) != 1:
        raise NoSinglePoint(f"expected one point carrying the atom {mask_points(B)}, found {cands}; property (sigma) {hyp['property_sigma']}")
    b = cands[0]
    value = H(b).mul(Gamma.evaluate(1 << b))
    integral = iv_integral(H, Gamma, B)
    return AtomResult(b, value, integral, integral == value, hyp)


@dataclass(frozen=True)
class AtomConvergenceRow:
    n: int
    distance: float
    bound: float


def atom_convergence(Hs, H: IvFunction, Gamma: IvSetFunction, B: int) -> tuple[AtomResult, list[AtomConvergenceRow]]:
    """Thm 4.10: ``d_H(int_B H_n, int_B H) <= d_H(H_n(b), H(b)) * var(nu2)(B)``."""
    res = iv_atom_integral(H, Gamma, B)
    vb = variation(Gamma.nu2, B)
    target = iv_integral(H, Gamma, B)
    rows = []
    for n, Hn in enumerate(Hs, start=1):
        d = hausdorff(iv_integral(Hn, Gamma, B), target)
        rows.append(AtomConvergenceRow(n, d, hausdorff(Hn(res.b), H(res.b)) * vb))
    return res, rows
