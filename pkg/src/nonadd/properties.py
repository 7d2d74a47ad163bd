"""Seeded random instances and theorem checks (the ``nonadd property`` command)."""

from __future__ import annotations

import math

import numpy as np

from .analysis import check_inequality, seminorm_p
from .ground import GroundSpace
from .interval import Interval, hausdorff
from .iv_integral import IvFunction, IvSetFunction, iv_monotonicity_suite, iv_rl_integrate
from .rl_integral import birkhoff_simple_integrate, gould_integrate, indefinite_integral, rl_integrate
from .setfunc import AdditiveWeights, Distortion, PowerMap, Table, classify, variation


def random_table(rng, n: int) -> Table:
    v = rng.random(1 << n)
    v[0] = 0.0
    return Table(GroundSpace.finite(n), v)


def random_monotone(rng, n: int, concave: bool = False) -> Distortion:
    gamma = rng.uniform(0.3, 1.0) if concave else rng.uniform(0.3, 3.0)
    return Distortion(PowerMap(gamma), AdditiveWeights(GroundSpace.finite(n), rng.random(n)))


def random_additive(rng, n: int) -> AdditiveWeights:
    return AdditiveWeights(GroundSpace.finite(n), rng.random(n))


def random_iv_setfunc(rng, n: int) -> IvSetFunction:
    lo = random_monotone(rng, n)
    return IvSetFunction(lo.scaled(rng.uniform(0, 1)), lo)


def random_iv_function(rng, n: int) -> IvFunction:
    a = rng.random(n)
    return IvFunction(GroundSpace.finite(n), a, a + rng.random(n))


class Tally:
    def __init__(self):
        self.cases = 0
        self.violations = 0
        self.max_error = 0.0
        self.witness = None

    def add(self, ok: bool, err: float = 0.0, witness=None):
        self.cases += 1
        if err > self.max_error:
            self.max_error = float(err)
        if not ok:
            self.violations += 1
            if self.witness is None:
                self.witness = witness

    def as_dict(self):
        return {"cases": self.cases, "violations": self.violations, "max_error": self.max_error, "witness": self.witness}


def check_oracle(rng, cases: int) -> dict:
    t = Tally()
    for _ in range(cases):
        n = int(rng.integers(1, 9))
        nu = random_table(rng, n)
        f = rng.uniform(-1, 1, n)
        oracle = math.fsum(f[s] * nu.values[1 << s] for s in range(n))
        rl = rl_integrate(f, nu).value
        g = gould_integrate(f, nu).value
        b = birkhoff_simple_integrate(f, nu).value
        err = abs(rl - oracle)
        t.add(err <= 1e-12 and g == rl and b == rl, err, (n, rl, g, b))
    return t.as_dict()


def check_invariants(rng, cases: int) -> dict:
    names = ("linearity", "measure_homogeneity", "measure_additivity", "bound", "monotonicity", "restriction", "T_f_additive", "T_f_monotone")
    tallies = {k: Tally() for k in names}
    for _ in range(cases):
        n = int(rng.integers(1, 8))
        nu = random_table(rng, n)
        nu2 = random_table(rng, n)
        g, h = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
        a, b = rng.uniform(-2, 2, 2)
        I = lambda f, m=nu, E=None: rl_integrate(f, m, E).value  # noqa: E731
        lhs = I(a * g + b * h)
        rhs = a * I(g) + b * I(h)
        tallies["linearity"].add(abs(lhs - rhs) <= 1e-12, abs(lhs - rhs))
        al = rng.uniform(0, 3)
        e = abs(I(g, nu.scaled(al)) - al * I(g))
        tallies["measure_homogeneity"].add(e <= 1e-12, e)
        e = abs(I(g, nu + nu2) - I(g) - I(g, nu2))
        tallies["measure_additivity"].add(e <= 1e-12, e)
        bound = float(np.max(np.abs(g))) * variation(nu)
        tallies["bound"].add(abs(I(g)) <= bound + 1e-12)
        lo = np.minimum(g, h)
        tallies["monotonicity"].add(I(lo) <= I(h) + 1e-12)
        E = int(rng.integers(0, 1 << n))
        chi = np.array([(E >> i) & 1 for i in range(n)], dtype=float)
        tallies["restriction"].add(I(g, nu, E) == I(g * chi))
        T = indefinite_integral(g, nu)
        A = int(rng.integers(0, 1 << n))
        B = int(rng.integers(0, 1 << n)) & ~A
        e = abs(T(A | B) - T(A) - T(B))
        tallies["T_f_additive"].add(e <= 1e-12, e)
        mono = random_monotone(rng, n)
        Tm = indefinite_integral(np.abs(g), mono)
        tallies["T_f_monotone"].add(classify(Tm).holds("monotone"))
    return {k: v.as_dict() for k, v in tallies.items()}


def check_interval(rng, cases: int, suite_cases: int) -> dict:
    dec = Tally()
    for _ in range(cases):
        n = int(rng.integers(1, 9))
        G, H = random_iv_setfunc(rng, n), random_iv_function(rng, n)
        r = iv_rl_integrate(H, G)
        dec.add(r.crosscheck <= 1e-12, r.crosscheck)
    suite = Tally()
    for _ in range(suite_cases):
        n = int(rng.integers(1, 5))
        Gm, H, Gf = random_iv_setfunc(rng, n), random_iv_function(rng, n), random_iv_function(rng, n)
        rep = iv_monotonicity_suite(Gf, H, Gm, random_iv_setfunc(rng, n), random_iv_setfunc(rng, n))
        suite.add(rep.passed, 0.0, [c.name for c in rep.checks if not c.passed])
    return {"endpoint_decomposition": dec.as_dict(), "interval_suite": suite.as_dict()}


def check_inequalities(rng, cases: int, reverse_cases: int) -> dict:
    out = {k: Tally() for k in ("holder", "minkowski", "reverse_holder", "reverse_minkowski", "seminorm")}
    for _ in range(cases):
        n = int(rng.integers(1, 9))
        nu = random_additive(rng, n)
        g, h = rng.uniform(-2, 2, n), rng.uniform(-2, 2, n)
        p = float(rng.choice([1.5, 2.0, 3.0]))
        for k in ("holder", "minkowski"):
            r = check_inequality(k, g, h, nu, p, tol=1e-10)
            out[k].add(r.holds, max(0.0, r.lhs - r.rhs))
        al = rng.uniform(-3, 3)
        e = abs(seminorm_p(al * g, nu, p) - abs(al) * seminorm_p(g, nu, p))
        tri = seminorm_p(g + h, nu, p) <= seminorm_p(g, nu, p) + seminorm_p(h, nu, p) + 1e-10
        out["seminorm"].add(e <= 1e-10 * (1 + abs(al)) and tri, e)
    for _ in range(reverse_cases):
        n = int(rng.integers(1, 9))
        nu = random_additive(rng, n)
        g, h = rng.uniform(0.05, 2, n), rng.uniform(0.05, 2, n)
        p = float(rng.choice([0.25, 0.5]))
        for k in ("reverse_holder", "reverse_minkowski"):
            r = check_inequality(k, g, h, nu, p, tol=1e-10)
            out[k].add(r.holds, max(0.0, r.rhs - r.lhs))
    return {k: v.as_dict() for k, v in out.items()}


def check_fatou(rng, cases: int) -> dict:
    sc, iv = Tally(), Tally()
    for _ in range(cases):
        n = int(rng.integers(1, 8))
        nu = random_monotone(rng, n)
        k = int(rng.integers(2, 5))
        cyc = rng.uniform(-1, 1, (k, n))
        lhs = rl_integrate(cyc.min(axis=0), nu).value
        rhs = min(rl_integrate(row, nu).value for row in cyc)
        sc.add(lhs <= rhs + 1e-12, max(0.0, lhs - rhs))
        Hs = [random_iv_function(rng, n) for _ in range(k)]
        Gm = IvSetFunction(nu, nu)
        low = IvFunction(nu.space, np.min([H.h1 for H in Hs], axis=0), np.min([H.h2 for H in Hs], axis=0))
        L = iv_rl_integrate(low, Gm).value
        ints = [iv_rl_integrate(H, Gm).value for H in Hs]
        R = Interval(min(i.lo for i in ints), min(i.hi for i in ints))
        iv.add(L.precedes(R, 1e-12), hausdorff(L, L & R))
    return {"fatou": sc.as_dict(), "iv_fatou": iv.as_dict()}


def run_properties(cases: int = 200, seed: int = 7) -> dict:
    rng = np.random.default_rng(seed)
    checks = {"oracle": check_oracle(rng, cases)}
    for k, v in check_invariants(rng, cases).items():
        checks[f"invariant_{k}"] = v
    checks.update(check_interval(rng, cases, max(1, cases // 5)))
    checks.update(check_inequalities(rng, cases, max(1, cases // 2)))
    checks.update(check_fatou(rng, cases))
    return {"seed": seed, "cases": cases, "checks": checks}


__all__ = ["run_properties", "random_table", "random_monotone", "random_additive", "random_iv_setfunc", "random_iv_function"]
