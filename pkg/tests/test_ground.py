import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadd.errors import NotInAlgebra, SeriesDiverges, SpaceMismatch
from nonadd.ground import EpSet, GroundSpace, NatFunction, mask_points, points_mask, submasks

bits = st.lists(st.integers(0, 1), max_size=6)
periods = st.lists(st.integers(0, 1), min_size=1, max_size=4)


@st.composite
def epsets(draw):
    return EpSet(tuple(draw(bits)), tuple(draw(periods)))


def member_vector(A, horizon=64):
    return [n in A for n in range(horizon)]


def test_finite_space_basics():
    sp = GroundSpace.finite(3)
    assert sp.full() == 0b111 and sp.empty() == 0
    assert list(sp.subsets()) == list(range(8))
    with pytest.raises(NotInAlgebra):
        sp.check_set(0b1000)


def test_space_mismatch():
    with pytest.raises(SpaceMismatch):
        GroundSpace.finite(2).check_same(GroundSpace.finite(3))


def test_mask_roundtrip():
    assert mask_points(0b1011) == [0, 1, 3]
    assert points_mask([0, 1, 3]) == 0b1011
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]


@given(epsets(), epsets())
def test_epset_boolean_algebra(A, B):
    a, b = member_vector(A), member_vector(B)
    assert member_vector(A | B) == [x or y for x, y in zip(a, b)]
    assert member_vector(A & B) == [x and y for x, y in zip(a, b)]
    assert member_vector(A - B) == [x and not y for x, y in zip(a, b)]
    assert member_vector(A.complement()) == [not x for x in a]
    assert A.issubset(A | B)
    assert (A - B).isdisjoint(B)


@given(epsets())
def test_epset_canonical_and_parse(A):
    assert EpSet.parse(str(A)) == A
    B = EpSet(A.prefix + A.period, A.period + A.period)
    assert B == A


def test_epset_cardinality():
    assert EpSet.finite([1, 5]).cardinality() == 2
    assert EpSet.residue(0, 2).cardinality() == math.inf
    assert EpSet.finite([1, 5]).is_finite() and not EpSet.full().is_finite()
    assert EpSet.empty().is_empty()
    assert EpSet.tail(3).first(2) == [3, 4]


def test_natfunction_series():
    f = NatFunction.geometric(1.0, 0.5)
    assert f.series_sum() == pytest.approx(2.0, abs=1e-15)
    assert f.series_sum(EpSet.residue(0, 2)) == pytest.approx(4 / 3, abs=1e-15)
    g = NatFunction.from_values([3.0, 1.0])
    assert g.series_sum() == 4.0
    assert np.allclose((f + g).values(4), [4.0, 1.5, 0.25, 0.125])


def test_natfunction_products_and_restrict():
    f = NatFunction.geometric(2.0, 0.5)
    g = NatFunction.geometric(1.0, 0.5)
    assert np.allclose((f * g).values(5), 2.0 * 0.25 ** np.arange(5))
    r = f.restrict(EpSet.residue(1, 2))
    assert np.allclose(r.values(4), [0, 1.0, 0, 0.25])
    assert NatFunction.constant(-2.0).sup_abs() == 2.0


def test_divergent_series_raises():
    with pytest.raises(SeriesDiverges):
        NatFunction.constant(1.0).series_sum()
    assert NatFunction.constant(0.0).series_sum() == 0.0
