import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadd.errors import SeriesDiverges
from nonadd.ground import EpSet, GroundSpace, NatFunction
from nonadd.rl_integral import (
    CONVERGED,
    DIVERGED,
    EXACT,
    birkhoff_simple_integrate,
    bound_check,
    compare_integrals,
    gould_integrate,
    indefinite_integral,
    rl_integrate,
)
from nonadd.setfunc import AdditiveWeights, CardinalityRule, Distortion, PowerMap, Table, classify
from oracles import singleton_sum

NAT = GroundSpace.nat()


@st.composite
def instances(draw):
    n = draw(st.integers(1, 6))
    vals = draw(st.lists(st.floats(0, 10, allow_nan=False), min_size=1 << n, max_size=1 << n))
    vals[0] = 0.0
    f = draw(st.lists(st.floats(-10, 10, allow_nan=False), min_size=n, max_size=n))
    return np.array(f), Table(GroundSpace.finite(n), np.array(vals))


def test_paper_finite_example():
    nu = Table.from_masks(GroundSpace.finite(3), {1: 0.5, 2: 0.2, 4: 0.3, 3: 0.1, 5: 0.9, 6: 0.4, 7: 0.6})
    r = rl_integrate([1.0, 2.0, 3.0], nu)
    assert r.value == pytest.approx(1.8, abs=1e-15) and r.status == EXACT


@settings(max_examples=100, deadline=None)
@given(instances())
def test_three_integrals_agree_on_finite(inst):
    f, nu = inst
    rl = rl_integrate(f, nu).value
    assert abs(rl - singleton_sum(f, nu.table())) <= 1e-12
    assert gould_integrate(f, nu).value == rl
    assert birkhoff_simple_integrate(f, nu).value == rl


def test_zero_function():
    nu = Table(GroundSpace.finite(2), np.array([0.0, 1, 2, 0.5]))
    c = compare_integrals(np.zeros(2), nu)
    assert c.rl.value == c.gould.value == c.birkhoff.value == 0.0 and c.agree


def test_restriction_identity():
    nu = Distortion(PowerMap(2.0), AdditiveWeights(GroundSpace.finite(3), [0.5, 0.2, 0.3]))
    f = np.array([1.0, 2.0, 3.0])
    assert rl_integrate(f, nu, 0b101).value == rl_integrate(f * [1, 0, 1], nu).value


def test_nat_counterexample():
    nu = CardinalityRule(NAT, 0.0, 1.0)
    h = NatFunction.constant(1.0)
    assert rl_integrate(h, nu).value == 0.0
    assert birkhoff_simple_integrate(h, nu).value == 0.0
    g = gould_integrate(h, nu)
    assert g.status == DIVERGED
    chain = g.witness["chain"]
    assert [c["block_count"] for c in chain[:10]] == list(range(1, 11))
    assert [c["sum_lo"] for c in chain[:10]] == [float(k) for k in range(1, 11)]
    assert not compare_integrals(h, nu).agree
    with pytest.raises(SeriesDiverges):
        g.require()


def test_nat_geometric_all_agree():
    nu = AdditiveWeights(NAT, NatFunction.geometric(1.0, 0.5))
    f = NatFunction.geometric(2.0, 0.5)
    c = compare_integrals(f, nu)
    assert c.rl.value == pytest.approx(8 / 3, abs=1e-12)
    assert c.gould.status == CONVERGED
    assert abs(c.gould.value - 8 / 3) <= 1e-9
    assert c.birkhoff.value == pytest.approx(8 / 3, abs=1e-12)
    assert c.agree


def test_nat_restricted_to_residue():
    nu = AdditiveWeights(NAT, NatFunction.geometric(1.0, 0.5))
    r = rl_integrate(NatFunction.constant(1.0), nu, EpSet.residue(0, 2))
    assert r.value == pytest.approx(4 / 3, abs=1e-14)


def test_nat_zero_mass_points_contribute_nothing():
    nu = AdditiveWeights(NAT, NatFunction.constant(1.0).restrict(EpSet.finite([0])))
    assert rl_integrate(NatFunction.constant(5.0), nu).value == 5.0
    with pytest.raises(ValueError):
        NatFunction.geometric(1.0, 2.0)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_indefinite_integral_additive(inst):
    f, nu = inst
    T = indefinite_integral(f, nu)
    assert T(0) == 0.0
    full = (1 << len(f)) - 1
    for A in range(full + 1):
        B = full & ~A
        assert abs(T(A) + T(B) - T(full)) <= 1e-9


def test_indefinite_monotone_for_positive_f():
    nu = Distortion(PowerMap(0.7), AdditiveWeights(GroundSpace.finite(4), [0.1, 0.2, 0.3, 0.4]))
    T = indefinite_integral(np.array([1.0, 0.0, 2.0, 0.5]), nu)
    assert classify(T).holds("monotone")


@settings(max_examples=60, deadline=None)
@given(instances())
def test_bound(inst):
    f, nu = inst
    lhs, rhs = bound_check(f, nu)
    assert lhs <= rhs + 1e-12


def test_trace_rows():
    nu = AdditiveWeights(GroundSpace.finite(3), [0.5, 0.2, 0.3])
    g = gould_integrate(np.array([1.0, 2.0, 3.0]), nu)
    assert g.trace and all(r.sum_lo <= r.sum_hi for r in g.trace)
    assert math.isclose(g.trace[-1].sum_lo, g.value)
