"""Base-block development over cyclic groups and two-factor products.

A list of starter blocks is developed by translating it through the whole
group; the result is a Steiner triple system exactly when the 6 signed
pairwise differences per starter, taken over all starters, hit every
nonzero group element exactly once.  ``difference_coverage`` computes that
multiset, ``residual_differences`` the uncovered part, and
``complete_base_blocks`` searches for canonical starters realising the
residual when a published list is arithmetically short.

Point indexing is fixed: cyclic elements are their own index, product
elements map (x, y) -> m2*x + y.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence, Union

from .designs import AlmostParallelClass, Design, canonical_block

GroupElement = Union[int, tuple[int, int]]
BaseBlock = tuple[GroupElement, GroupElement, GroupElement]


@dataclass(frozen=True)
class CyclicGroup:
    """Integers modulo n under addition."""

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("cyclic group needs order >= 3")

    @property
    def order(self) -> int:
        return self.n

    @property
    def zero(self) -> int:
        return 0

    def elements(self) -> Iterable[int]:
        return range(self.n)

    def canon(self, e: int) -> int:
        return e % self.n

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.n

    def neg(self, a: int) -> int:
        return (-a) % self.n

    def index(self, e: int) -> int:
        return e % self.n

    def element(self, i: int) -> int:
        return i


@dataclass(frozen=True)
class ProductGroup:
    """Direct product of two cyclic groups; elements are coordinate pairs."""

    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 2 or self.m2 < 2:
            raise ValueError("product group needs both factors >= 2")

    @property
    def order(self) -> int:
        return self.m1 * self.m2

    @property
    def zero(self) -> tuple[int, int]:
        return (0, 0)

    def elements(self) -> Iterable[tuple[int, int]]:
        return ((x, y) for x in range(self.m1) for y in range(self.m2))

    def canon(self, e: tuple[int, int]) -> tuple[int, int]:
        return (e[0] % self.m1, e[1] % self.m2)

    def add(self, a, b) -> tuple[int, int]:
        return ((a[0] + b[0]) % self.m1, (a[1] + b[1]) % self.m2)

    def sub(self, a, b) -> tuple[int, int]:
        return ((a[0] - b[0]) % self.m1, (a[1] - b[1]) % self.m2)

    def neg(self, a) -> tuple[int, int]:
        return ((-a[0]) % self.m1, (-a[1]) % self.m2)

    def index(self, e: tuple[int, int]) -> int:
        return (e[0] % self.m1) * self.m2 + e[1] % self.m2

    def element(self, i: int) -> tuple[int, int]:
        return divmod(i, self.m2)


GroupSpec = Union[CyclicGroup, ProductGroup]


def _canon_members(base_block, group: GroupSpec) -> tuple:
    members = tuple(group.canon(e) for e in base_block)
    if len(members) != 3 or len(set(members)) != 3:
        raise ValueError(f"base block {base_block!r} must have 3 distinct group elements")
    return members


def develop(base: Sequence[BaseBlock], group: GroupSpec) -> Design:
    """Translate every starter block through the whole group.

    Starters whose orbit is shorter than the group order are rejected
    rather than silently deduplicated.
    """
    blocks = []
    for bb in base:
        members = _canon_members(bb, group)
        orbit = set()
        for t in group.elements():
            blk = canonical_block(group.index(group.add(m, t)) for m in members)
            orbit.add(blk)
            blocks.append(blk)
        if len(orbit) < group.order:
            raise ValueError(f"base block {bb!r} has a short orbit ({len(orbit)} of {group.order} translates)")
    return Design.from_blocks(group.order, blocks)


def difference_coverage(base: Sequence[BaseBlock], group: GroupSpec) -> Counter:
    """Multiset of all 6*len(base) signed pairwise differences.

    Development yields a Steiner triple system iff this hits every nonzero
    group element exactly once.
    """
    coverage: Counter = Counter()
    for bb in base:
        members = _canon_members(bb, group)
        for a, b in permutations(members, 2):
            coverage[group.sub(a, b)] += 1
    return coverage


def coverage_is_exact(base: Sequence[BaseBlock], group: GroupSpec) -> bool:
    """Whether the signed differences cover each nonzero element exactly once."""
    coverage = difference_coverage(base, group)
    return len(coverage) == group.order - 1 and all(c == 1 for c in coverage.values())


def residual_differences(base: Sequence[BaseBlock], group: GroupSpec) -> set:
    """Nonzero group elements not covered by the starters' differences.

    Requires simple coverage (no element hit twice).
    """
    coverage = difference_coverage(base, group)
    repeated = sorted((e for e, c in coverage.items() if c > 1), key=group.index)
    if repeated:
        raise ValueError(f"difference {repeated[0]!r} is covered more than once; coverage must be simple")
    return {e for e in group.elements() if e != group.zero and e not in coverage}


def complete_base_blocks(base: Sequence[BaseBlock], group: GroupSpec) -> list[BaseBlock]:
    """Starter blocks whose differences realise exactly the residual coverage.

    Candidates are blocks {0, d1, d1+d2}; each difference triple is reported
    by its lexicographically least zero-containing representative, so
    translates are never reported as distinct.  Returns [] when the given
    starters already cover everything; raises when no completion exists.
    """
    residual = residual_differences(base, group)
    if not residual:
        return []
    if len(residual) % 6:
        raise ValueError(f"uncompletable: {len(residual)} residual differences, not a multiple of 6")
    reps: dict[frozenset, tuple[int, int, int]] = {}
    for d1 in residual:
        for d3 in residual:
            if d3 == d1:
                continue
            diff_set = frozenset(
                {d1, group.neg(d1), d3, group.neg(d3), group.sub(d3, d1), group.sub(d1, d3)}
            )
            if len(diff_set) != 6 or not diff_set <= residual:
                continue
            rep = tuple(sorted((group.index(group.zero), group.index(d1), group.index(d3))))
            if diff_set not in reps or rep < reps[diff_set]:
                reps[diff_set] = rep
    candidates = sorted(reps.items(), key=lambda kv: kv[1])

    def search(remaining: frozenset) -> list | None:
        if not remaining:
            return []
        target = min(remaining, key=group.index)
        for diff_set, rep in candidates:
            if target in diff_set and diff_set <= remaining:
                rest = search(remaining - diff_set)
                if rest is not None:
                    return [rep] + rest
        return None

    found = search(frozenset(residual))
    if found is None:
        raise ValueError("uncompletable: residual differences admit no base-block completion")
    return [tuple(group.element(i) for i in rep) for rep in sorted(found)]


def translate_apc(apc: AlmostParallelClass, t: GroupElement, group: GroupSpec) -> AlmostParallelClass:
    """Shift every block and the missed point by the group element t."""
    t = group.canon(t)

    def shift(idx: int) -> int:
        return group.index(group.add(group.element(idx), t))

    blocks = frozenset(canonical_block(shift(p) for p in blk) for blk in apc.blocks)
    return AlmostParallelClass(blocks, shift(apc.missed))
