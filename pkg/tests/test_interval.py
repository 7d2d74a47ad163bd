import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonadd.errors import InvalidInterval
from nonadd.interval import Interval, hausdorff, iv_inf, iv_sup, minkowski_sum

pos = st.floats(0, 100, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = sorted((draw(pos), draw(pos)))
    return Interval(a, b)


def test_rejects_bad_intervals():
    for lo, hi in ((2, 1), (-1, 1), (float("nan"), 1)):
        with pytest.raises(InvalidInterval):
            Interval(lo, hi)


def test_arithmetic():
    assert Interval(1, 2) + Interval(0.5, 1) == Interval(1.5, 3)
    assert Interval(1, 2).mul(Interval(2, 3)) == Interval(2, 6)
    assert 2 * Interval(1, 2) == Interval(2, 4)
    assert Interval(1, 4) & Interval(2, 3) == Interval(1, 3)
    assert Interval(1, 4) | Interval(2, 3) == Interval(2, 4)
    assert Interval(1, 3).norm() == 3


@given(intervals(), intervals(), intervals())
def test_hausdorff_metric(a, b, c):
    assert hausdorff(a, a) == 0
    assert hausdorff(a, b) == hausdorff(b, a)
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9


@given(intervals(), intervals())
def test_order_and_lattice(a, b):
    m, j = a & b, a | b
    assert m.precedes(a) and m.precedes(b)
    assert a.precedes(j) and b.precedes(j)
    assert a.issubset(Interval(min(a.lo, b.lo), max(a.hi, b.hi)))


def test_sequence_ops():
    seq = [Interval(1, 5), Interval(0, 7), Interval(2, 3)]
    assert minkowski_sum(seq) == Interval(3, 15)
    assert iv_inf(seq) == Interval(0, 3)
    assert iv_sup(seq) == Interval(2, 7)
