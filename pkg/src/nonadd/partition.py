"""Partitions, the refinement order, common refinements and refinement streams."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import NotInAlgebra, SpaceMismatch
from .ground import EpSet, GroundSpace, mask_points


def _is_empty(space, A) -> bool:
    return A == 0 if space.is_finite else A.is_empty()


def _subset(space, A, B) -> bool:
    return (A & ~B) == 0 if space.is_finite else A.issubset(B)


def _union_all(space, blocks):
    u = space.empty()
    for b in blocks:
        u = u | b
    return u


def _is_singleton(space, A) -> bool:
    if space.is_finite:
        return A != 0 and A & (A - 1) == 0
    return A.is_finite() and A.cardinality() == 1


@dataclass(frozen=True)
class Partition:
    """Finite list of disjoint nonempty blocks covering the space.

    With ``tail=True`` every point not covered by ``blocks`` forms its own singleton
    block, which is how countable partitions of the naturals are represented.
    """

    space: GroundSpace
    blocks: tuple
    tail: bool = False

    def __post_init__(self):
        blocks = tuple(self.space.check_set(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = self.space.empty()
        for b in blocks:
            if _is_empty(self.space, b):
                raise NotInAlgebra("partition blocks must be nonempty")
            if not _is_empty(self.space, seen & b):
                raise NotInAlgebra("partition blocks must be pairwise disjoint")
            seen = seen | b
        if not self.tail and seen != self.space.full():
            raise NotInAlgebra("partition blocks must cover the space")
        if self.space.is_finite and self.tail:
            # materialize the singleton tail on finite spaces
            rest = self.space.full() & ~seen
            object.__setattr__(self, "blocks", blocks + tuple(1 << i for i in mask_points(rest)))
            object.__setattr__(self, "tail", False)

    @classmethod
    def singletons(cls, space: GroundSpace) -> "Partition":
        if space.is_finite:
            return cls(space, tuple(1 << i for i in range(space.n)))
        return cls(space, (), tail=True)

    @classmethod
    def trivial(cls, space: GroundSpace) -> "Partition":
        return cls(space, (space.full(),))

    @property
    def remainder(self):
        """Points covered by the singleton tail."""
        return self.space.full() - _union_all(self.space, self.blocks) if self.tail else self.space.empty()

    def block_count(self):
        return float("inf") if self.tail and not _is_empty(self.space, self.remainder) else len(self.blocks)

    def key(self):
        """Order-independent identity of the block set."""
        return (frozenset(self.blocks), self.tail and not _is_empty(self.space, self.remainder))

    def __str__(self):
        if self.space.is_finite:
            parts = ["{" + ",".join(map(str, mask_points(b))) + "}" for b in self.blocks]
        else:
            parts = [str(b) for b in self.blocks]
        if self.tail:
            parts.append("tail:singletons")
        return "[" + " | ".join(parts) + "]"


@dataclass(frozen=True)
class TaggedPartition:
    partition: Partition
    tags: tuple

    def __post_init__(self):
        if len(self.tags) != len(self.partition.blocks):
            raise NotInAlgebra("one tag per (non-tail) block is required")
        sp = self.partition.space
        for b, t in zip(self.partition.blocks, self.tags):
            inside = (b >> int(t)) & 1 if sp.is_finite else int(t) in b
            if not inside:
                raise NotInAlgebra(f"tag {t} is not in its block")


def _check(P: Partition, Q: Partition):
    if P.space != Q.space:
        raise SpaceMismatch(f"{P.space} vs {Q.space}")


def is_finer(P2: Partition, P1: Partition) -> bool:
    """True iff every block of ``P2`` lies inside some block of ``P1``."""
    _check(P2, P1)
    sp = P2.space
    rem1 = P1.remainder
    for b in P2.blocks:
        if any(_subset(sp, b, c) for c in P1.blocks):
            continue
        if P1.tail and _is_singleton(sp, b) and _subset(sp, b, rem1):
            continue
        return False
    # tail singletons of P2 always sit inside some block of P1
    return True


def common_refinement(P: Partition, Q: Partition) -> Partition:
    _check(P, Q)
    sp = P.space
    rem = P.remainder | Q.remainder
    blocks = []
    for e in P.blocks:
        for g in Q.blocks:
            x = (e & g) - rem if not sp.is_finite else (e & g) & ~rem
            if not _is_empty(sp, x):
                blocks.append(x)
    return Partition(sp, tuple(blocks), tail=P.tail or Q.tail)


def set_partitions(points: list[int]) -> Iterator[list[list[int]]]:
    """All set partitions of ``points`` via restricted growth strings."""
    n = len(points)
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i, m):
        if i == n:
            blocks = [[] for _ in range(m + 1)]
            for p, k in zip(points, rgs):
                blocks[k].append(p)
            yield blocks
            return
        for k in range(m + 2):
            rgs[i] = k
            yield from rec(i + 1, max(m, k))

    rgs[0] = 0
    yield from rec(1, 0)


def all_partitions(space: GroundSpace) -> list[Partition]:
    out = []
    for blocks in set_partitions(list(range(space.n))):
        masks = tuple(sum(1 << p for p in b) for b in blocks)
        out.append(Partition(space, masks))
    return out


def residue_split(k: int) -> Partition:
    """Partition of N into ``k`` infinite residue classes, refining ``residue_split(k - 1)``.

    Blocks are ``{n : n = 2^i - 1 mod 2^(i+1)}`` for ``i < k - 1`` plus the class
    ``{n : n = 2^(k-1) - 1 mod 2^(k-1)}`` that is split further at the next level.
    """
    sp = GroundSpace.nat()
    if k < 1:
        raise ValueError("k >= 1")
    blocks = [EpSet.residue((1 << i) - 1, 1 << (i + 1)) for i in range(k - 1)]
    blocks.append(EpSet.residue((1 << (k - 1)) - 1, 1 << (k - 1)))
    return Partition(sp, tuple(blocks))


def prefix_singletons(k: int) -> Partition:
    """``{0}, ..., {k-1}`` and one block with everything else (on N)."""
    sp = GroundSpace.nat()
    blocks = [EpSet.finite([i]) for i in range(k)]
    rest = EpSet.tail(k)
    if not rest.is_empty():
        blocks.append(rest)
    return Partition(sp, tuple(blocks))


def _halve(points):
    mid = len(points) // 2
    return points[:mid], points[mid:]


def refine_stream(space: GroundSpace, strategy: str = "singleton-first", budget: int = 64) -> Iterator[Partition]:
    """Pull-based stream of partitions.

    ``singleton-first`` and ``binary-split`` yield chains, each partition finer than
    the previous one; on a finite space both end at the singleton partition.
    ``exhaustive`` (finite, n <= 5) yields every partition, coarser ones first.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    count = 0
    if strategy == "exhaustive":
        if not space.is_finite or space.n > 5:
            raise ValueError("exhaustive enumeration needs a finite space with n <= 5")
        parts = sorted(all_partitions(space), key=lambda P: (len(P.blocks), sorted(P.blocks)))
        yield from parts[:budget]
        return
    if strategy == "singleton-first":
        if space.is_finite:
            for k in range(space.n):
                if count >= budget:
                    return
                blocks = tuple(1 << i for i in range(k))
                rest = space.full() & ~((1 << k) - 1)
                yield Partition(space, blocks + ((rest,) if rest else ()))
                count += 1
            return
        for k in range(budget):
            yield prefix_singletons(k)
        return
    if strategy == "binary-split":
        if space.is_finite:
            blocks = [list(range(space.n))]
            while count < budget:
                yield Partition(space, tuple(sum(1 << p for p in b) for b in blocks))
                count += 1
                if all(len(b) == 1 for b in blocks):
                    return
                blocks = [h for b in blocks for h in (_halve(b) if len(b) > 1 else (b,)) if h]
            return
        for k in range(1, budget + 1):
            yield residue_split(k)
        return
    raise ValueError(f"unknown refinement strategy {strategy!r}")
