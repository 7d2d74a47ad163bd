import numpy as np
import pytest

from nonadd.errors import InvalidInterval, NoSinglePoint, NotAnAtom
from nonadd.ground import GroundSpace, NatFunction
from nonadd.interval import Interval, hausdorff
from nonadd.iv_integral import (
    IvFunction,
    IvSetFunction,
    atom_convergence,
    iv_atom_integral,
    iv_indefinite,
    iv_integral,
    iv_monotonicity_suite,
    iv_rl_integrate,
)
from nonadd.properties import random_iv_function, random_iv_setfunc
from nonadd.setfunc import AdditiveWeights, Table

F2 = GroundSpace.finite(2)
F3 = GroundSpace.finite(3)


def point_mass(space, b):
    return Table.from_function(space, lambda A: 1.0 if (A >> b) & 1 else 0.0)


def test_paper_example():
    G = IvSetFunction(AdditiveWeights(F2, [0.1, 0.2]), AdditiveWeights(F2, [0.3, 0.4]))
    H = IvFunction(F2, np.array([1.0, 1.0]), np.array([2.0, 3.0]))
    r = iv_rl_integrate(H, G)
    assert hausdorff(r.value, Interval(0.3, 1.8)) <= 1e-15
    assert r.crosscheck <= 1e-12


def test_invalid_inputs():
    with pytest.raises(InvalidInterval):
        IvFunction(F2, np.array([1.0, 2.0]), np.array([0.5, 3.0]))
    with pytest.raises(Exception):
        IvSetFunction(AdditiveWeights(F2, [0.5, 0.5]), AdditiveWeights(F2, [0.1, 0.1]))


def test_nat_endpoints():
    nat = GroundSpace.nat()
    G = IvSetFunction(AdditiveWeights(nat, NatFunction.geometric(0.5, 0.5)), AdditiveWeights(nat, NatFunction.geometric(1.0, 0.5)))
    H = IvFunction(nat, NatFunction.constant(1.0), NatFunction.from_values([3.0], tail=2.0))
    v = iv_integral(H, G)
    assert v.lo == pytest.approx(1.0) and v.hi == pytest.approx(5.0)


def test_endpoint_decomposition_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        r = iv_rl_integrate(random_iv_function(rng, n), random_iv_setfunc(rng, n))
        assert r.crosscheck <= 1e-12


def test_indefinite_checks_pass():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        T, rep = iv_indefinite(random_iv_function(rng, n), random_iv_setfunc(rng, n))
        assert T(0) == Interval.zero()
        failed = [c.name for c in rep.checks if not c.passed]
        assert not failed


def test_monotonicity_suite():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        rep = iv_monotonicity_suite(
            random_iv_function(rng, n), random_iv_function(rng, n),
            random_iv_setfunc(rng, n), random_iv_setfunc(rng, n), random_iv_setfunc(rng, n),
        )
        assert rep.passed, [c.name for c in rep.checks if not c.passed]


def test_atom_integral_exact():
    pm = point_mass(F3, 0)
    G = IvSetFunction(pm, pm)
    H = IvFunction(F3, np.array([0.5, 1.0, 2.0]), np.array([1.0, 3.0, 4.0]))
    res = iv_atom_integral(H, G, 0b011)
    assert res.b == 0 and res.exact and res.integral == Interval(0.5, 1.0)


def test_atom_errors():
    add = AdditiveWeights(F3, [1.0, 1.0, 1.0])
    G = IvSetFunction(add, add)
    H = IvFunction.constant(F3, Interval(1, 2))
    with pytest.raises(NotAnAtom):
        iv_atom_integral(H, G, 0b011)
    # an atom carried by no single point: nu(A) = 1 iff |A| >= 2
    t = Table.from_function(F3, lambda A: 1.0 if bin(A).count("1") >= 2 else 0.0)
    with pytest.raises((NoSinglePoint, NotAnAtom)):
        iv_atom_integral(H, IvSetFunction(t, t), 0b111)


def test_atom_convergence_bound():
    pm = point_mass(F3, 0)
    G = IvSetFunction(pm.scaled(0.5), pm)
    H = IvFunction(F3, np.array([0.5, 1.0, 2.0]), np.array([1.0, 3.0, 4.0]))
    Hs = [H + IvFunction(F3, 0.5**n * np.ones(3), 0.5**n * np.array([2.0, 1, 1])) for n in range(1, 31)]
    res, rows = atom_convergence(Hs, H, G, 0b011)
    assert all(r.distance <= r.bound + 1e-12 for r in rows)
    assert rows[-1].distance <= 1e-8
