"""The nine acceptance criteria of the spec, each against an independent oracle."""

import math
import subprocess
import sys

import numpy as np
import pytest

from acceptance_log import criterion
from nonadd.analysis import SequenceSpec, check_inequality, run_convergence, seminorm_p
from nonadd.cli import bundled_suite_dir
from nonadd.ground import GroundSpace, NatFunction, submasks
from nonadd.interval import Interval, hausdorff
from nonadd.iv_integral import IvFunction, IvSetFunction, atom_convergence, iv_atom_integral, iv_monotonicity_suite, iv_rl_integrate
from nonadd.rl_integral import DIVERGED, birkhoff_simple_integrate, gould_integrate, indefinite_integral, rl_integrate
from nonadd.setfunc import AdditiveWeights, CardinalityRule, Distortion, PowerMap, Table, classify, variation, variation_table
from oracles import brute_variation, singleton_sum

SEED = 20240601


def rand_table(rng, n):
    v = rng.random(1 << n)
    v[0] = 0.0
    return Table(GroundSpace.finite(n), v)


def rand_monotone(rng, n, gamma=None):
    g = rng.uniform(0.3, 3.0) if gamma is None else gamma
    return Distortion(PowerMap(g), AdditiveWeights(GroundSpace.finite(n), rng.random(n)))


def rand_ivfun(rng, n):
    a = rng.random(n)
    return IvFunction(GroundSpace.finite(n), a, a + rng.random(n))


def rand_ivset(rng, n):
    hi = rand_monotone(rng, n)
    return IvSetFunction(hi.scaled(rng.uniform(0, 1)), hi)


def test_criterion_1_finite_oracle():
    with criterion(1, "finite oracle: RL = singleton sum, Gould and Birkhoff equal", 5):
        rng = np.random.default_rng(SEED)
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            nu = rand_table(rng, n)
            f = rng.uniform(-5, 5, n)
            rl = rl_integrate(f, nu).value
            assert abs(rl - singleton_sum(f, nu.values)) <= 1e-12
            assert gould_integrate(f, nu).value == rl
            assert birkhoff_simple_integrate(f, nu).value == rl


def test_criterion_2_variation():
    with criterion(2, "variation DP = brute force; Remark 2.1", 10):
        rng = np.random.default_rng(SEED + 2)
        for _ in range(200):
            n = int(rng.integers(1, 6))
            nu = rand_table(rng, n)
            t = nu.table()
            vt = variation_table(nu)
            full = (1 << n) - 1
            for E in range(full + 1):
                assert vt[E] == brute_variation(t, E)
            # superadditivity of the variation
            for A in range(full + 1):
                for B in submasks(full & ~A):
                    assert vt[A | B] >= vt[A] + vt[B] - 1e-12
            add = AdditiveWeights(nu.space, rng.random(n))
            assert np.allclose(variation_table(add), add.table(), rtol=0, atol=1e-12)
            sub = rand_monotone(rng, n, gamma=rng.uniform(0.2, 1.0))
            assert classify(sub).holds("subadditive")
            assert classify(Table(nu.space, variation_table(sub))).holds("finitely_additive")


def test_criterion_3_nat_counterexample():
    with criterion(3, "N counterexample: RL = Bs = 0, Gould diverges with sigma(P_k) = k", 1):
        nu = CardinalityRule(GroundSpace.nat(), 0.0, 1.0)
        h = NatFunction.constant(1.0)
        assert rl_integrate(h, nu).value == 0.0
        assert birkhoff_simple_integrate(h, nu).value == 0.0
        g = gould_integrate(h, nu)
        assert g.status == DIVERGED
        chain = g.witness["chain"]
        for k in range(1, 11):
            row = chain[k - 1]
            assert row["block_count"] == k
            assert row["sum_lo"] == row["sum_hi"] == float(k)


def _monotone_table(t):
    n = int(math.log2(len(t)))
    return all(t[A] <= t[A | 1 << i] + 1e-12 for A in range(len(t)) for i in range(n))


def test_criterion_4_invariants():
    with criterion(4, "theorem invariants, 1000 cases each", 30):
        rng = np.random.default_rng(SEED + 4)
        for _ in range(1000):
            n = int(rng.integers(1, 8))
            nu, nu2 = rand_table(rng, n), rand_table(rng, n)
            g, h = rng.uniform(-3, 3, n), rng.uniform(-3, 3, n)
            a, b = rng.uniform(-2, 2, 2)
            I = lambda f, m=nu, E=None: rl_integrate(f, m, E).value  # noqa: E731
            assert abs(I(a * g + b * h) - a * I(g) - b * I(h)) <= 1e-12
            al = rng.uniform(0, 3)
            assert abs(I(g, nu.scaled(al)) - al * I(g)) <= 1e-12
            assert abs(I(g, nu + nu2) - I(g) - I(g, nu2)) <= 1e-12
            assert abs(I(g)) <= np.max(np.abs(g)) * brute_variation(nu.table(), (1 << n) - 1) + 1e-12
            assert I(np.minimum(g, h)) <= I(h) + 1e-12
            E = int(rng.integers(0, 1 << n))
            chi = np.array([(E >> i) & 1 for i in range(n)], dtype=float)
            assert I(g, nu, E) == I(g * chi)
            T = indefinite_integral(g, nu)
            A = int(rng.integers(0, 1 << n))
            B = int(rng.integers(0, 1 << n)) & ~A
            assert abs(T(A | B) - T(A) - T(B)) <= 1e-12
            mono = rand_monotone(rng, n)
            Tm = indefinite_integral(np.abs(g), mono)
            assert _monotone_table([Tm(X) for X in range(1 << n)])


def test_criterion_5_interval():
    with criterion(5, "endpoint decomposition d_H <= 1e-12; interval suite", 30):
        rng = np.random.default_rng(SEED + 5)
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            G, H = rand_ivset(rng, n), rand_ivfun(rng, n)
            direct = Interval.zero()
            for s in range(n):
                direct = direct + H(s).mul(G(1 << s))
            assert hausdorff(iv_rl_integrate(H, G).value, direct) <= 1e-12
        for _ in range(200):
            n = int(rng.integers(1, 5))
            rep = iv_monotonicity_suite(rand_ivfun(rng, n), rand_ivfun(rng, n), rand_ivset(rng, n), rand_ivset(rng, n), rand_ivset(rng, n))
            assert rep.passed, [c.name for c in rep.checks if not c.passed]


def test_criterion_6_inequalities():
    with criterion(6, "Hoelder, Minkowski, reverse forms, seminorm axioms", 20):
        rng = np.random.default_rng(SEED + 6)
        tol = 1e-10
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            w = rng.random(n)
            nu = AdditiveWeights(GroundSpace.finite(n), w)
            g, h = rng.uniform(-2, 2, n), rng.uniform(-2, 2, n)
            p = float(rng.choice([1.5, 2.0, 3.0]))
            q = p / (p - 1)
            norm = lambda f, r: np.sum(np.abs(f) ** r * w) ** (1 / r)  # noqa: E731
            assert np.sum(np.abs(g * h) * w) <= norm(g, p) * norm(h, q) + tol
            assert norm(g + h, p) <= norm(g, p) + norm(h, p) + tol
            for kind in ("holder", "minkowski"):
                assert check_inequality(kind, g, h, nu, p, tol=tol).holds
            al = rng.uniform(-3, 3)
            assert abs(seminorm_p(al * g, nu, p) - abs(al) * seminorm_p(g, nu, p)) <= tol
            assert seminorm_p(g + h, nu, p) <= seminorm_p(g, nu, p) + seminorm_p(h, nu, p) + tol
        for _ in range(500):
            n = int(rng.integers(1, 9))
            w = rng.random(n) + 1e-3
            nu = AdditiveWeights(GroundSpace.finite(n), w)
            g, h = rng.uniform(0.05, 2, n), rng.uniform(0.05, 2, n)
            p = float(rng.choice([0.25, 0.5]))
            q = p / (p - 1)
            norm = lambda f, r: np.sum(f**r * w) ** (1 / r)  # noqa: E731
            lhs = np.sum(g * h * w)
            assert lhs >= norm(g, p) * norm(h, q) - tol * max(1, lhs)
            assert norm(g + h, p) >= norm(g, p) + norm(h, p) - tol * max(1, norm(g + h, p))
            for kind in ("reverse_holder", "reverse_minkowski"):
                assert check_inequality(kind, g, h, nu, p, tol=tol).holds


def test_criterion_7_convergence():
    with criterion(7, "convergence modes, Fatou, monotone sup, varying Gamma", 30):
        n = 4
        sp = GroundSpace.finite(n)
        add = AdditiveWeights(sp, [0.1, 0.2, 0.3, 0.4])
        mono = Distortion(PowerMap(0.5), add)
        base, delta = np.array([1.0, 2, 3, 4]), np.array([2.0, 1, 0.5, 3])
        spec = SequenceSpec(base=base, delta=delta, N=30)
        for mode, nu in (("uniform", mono), ("in_measure", mono), ("p_norm", add)):
            r = run_convergence(mode, spec, nu=nu)
            assert r.verdict and r.label == "certified" and r.distances[-1] <= 1e-8, mode
        null2 = Table.from_function(sp, lambda A: add(A & ~0b0100))
        r = run_convergence("ae", SequenceSpec(base=base, delta=delta, spike=np.array([0, 0, 5.0, 0]), N=30), nu=null2)
        assert r.verdict and r.label == "certified" and r.distances[-1] <= 1e-8

        rng = np.random.default_rng(SEED + 7)
        for _ in range(1000):
            m = int(rng.integers(1, 7))
            nu = rand_monotone(rng, m)
            k = int(rng.integers(2, 6))
            cyc = rng.uniform(-2, 2, (k, m))
            # liminf of a cyclic sequence = pointwise min over the cycle
            assert rl_integrate(cyc.min(axis=0), nu).value <= min(rl_integrate(row, nu).value for row in cyc) + 1e-12
            G = IvSetFunction(nu.scaled(rng.uniform(0, 1)), nu)
            Hs = [rand_ivfun(rng, m) for _ in range(k)]
            low = IvFunction(nu.space, np.min([H.h1 for H in Hs], axis=0), np.min([H.h2 for H in Hs], axis=0))
            L = iv_rl_integrate(low, G).value
            ints = [iv_rl_integrate(H, G).value for H in Hs]
            assert L.precedes(Interval(min(i.lo for i in ints), min(i.hi for i in ints)), 1e-12)

        G = IvSetFunction(mono.scaled(0.5), mono)
        terms = tuple(IvFunction(sp, np.minimum(k, base), np.minimum(k + 1, base + 1)) for k in range(5))
        r = run_convergence("monotone", SequenceSpec(family="explicit", terms=terms), Gamma=G)
        assert r.verdict and r.detail["lhs"] == r.detail["rhs"]

        G = IvSetFunction(AdditiveWeights(sp, [0.05, 0.1, 0.15, 0.2]), add)
        H = IvFunction(sp, base, base + 1)
        r = run_convergence("setwise_varying", SequenceSpec(base=H, N=30), Gamma=G)
        target = iv_rl_integrate(H, G).value
        own = hausdorff(iv_rl_integrate(H.scaled(1 - 0.5**30), G.scaled(1 - 0.5**30)).value, target)
        assert r.verdict and r.distances[-1] <= 1e-8 and own <= 1e-8


def test_criterion_8_atoms():
    with criterion(8, "atom integral exact; atom convergence bound", 2):
        sp = GroundSpace.finite(3)
        pm = Table.from_function(sp, lambda A: 1.0 if A & 1 else 0.0)
        G = IvSetFunction(pm.scaled(0.5), pm)
        H = IvFunction(sp, np.array([0.5, 1.0, 2.0]), np.array([1.0, 3.0, 4.0]))
        B = 0b011
        res = iv_atom_integral(H, G, B)
        assert res.b == 0
        assert res.integral == H(0).mul(G(1 << 0)) and res.exact
        vb = variation(G.nu2, B)
        Hs = [H + IvFunction(sp, 0.5**k * np.ones(3), 0.5**k * np.array([2.0, 1, 1])) for k in range(1, 31)]
        _, rows = atom_convergence(Hs, H, G, B)
        for Hn, row in zip(Hs, rows):
            d = hausdorff(iv_rl_integrate(Hn, G, B).value, iv_rl_integrate(H, G, B).value)
            assert d == row.distance
            assert d <= hausdorff(Hn(0), H(0)) * vb + 1e-15
        assert rows[-1].distance <= 1e-8 and rows[-1].distance < rows[0].distance


def test_criterion_9_cli_determinism():
    with criterion(9, "bundled suite twice with --seed 7 --no-meta is byte-identical", 120):
        cmd = [sys.executable, "-m", "nonadd.cli", "suite", str(bundled_suite_dir()), "--seed", "7", "--no-meta"]
        a = subprocess.run(cmd, capture_output=True)
        b = subprocess.run(cmd, capture_output=True)
        assert a.returncode == 0, a.stderr.decode()[-2000:]
        assert a.stdout == b.stdout and len(a.stdout) > 1000
