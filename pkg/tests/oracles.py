"""Independent brute-force references used by the tests."""

import math

from nonadd.ground import mask_points
from nonadd.partition import set_partitions


def brute_variation(table, E):
    """sup over finite disjoint families inside E, by enumerating every family.

    A family inside E is a partition of E plus a sentinel point; the block holding
    the sentinel is the part of E left uncovered.
    """
    pts = mask_points(E) + [-1]
    best = 0.0
    for blocks in set_partitions(pts):
        masks = [sum(1 << p for p in b) for b in blocks if -1 not in b]
        best = max(best, math.fsum(abs(table[m]) for m in masks))
    return best


def singleton_sum(f, table):
    return math.fsum(f[i] * table[1 << i] for i in range(len(f)))
