"""Core types and validators for partial Steiner triple systems and 3-GDDs.

Points are dense integers 0..n-1 throughout; external labels live only in
the I/O layer.  The types here are plain immutable containers.  Raw
constructors check nothing, so that validators can be exercised on broken
inputs; the ``from_blocks`` classmethods merely canonicalise ordering.
Validators re-derive every structural property from scratch (a verdict
never depends on how an object was built or ordered) and return reports
instead of raising, so batch pipelines can aggregate outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

Block = tuple[int, int, int]


def canonical_block(members: Iterable[int]) -> Block:
    """Sort a triple of distinct points into canonical ascending order."""
    blk = tuple(sorted(members))
    if len(blk) != 3 or blk[0] == blk[1] or blk[1] == blk[2]:
        raise ValueError(f"a block needs 3 distinct points, got {blk!r}")
    return blk


def _pairs(blk) -> list[tuple[int, int]]:
    a, b, c = sorted(blk)
    return [(a, b), (a, c), (b, c)]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural check: OK, or the first violation found."""

    ok: bool
    category: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls) -> "ValidationReport":
        return cls(True)

    @classmethod
    def failed(cls, category: str, detail: str) -> "ValidationReport":
        return cls(False, category, detail)

    def __str__(self) -> str:
        return "ok" if self.ok else f"{self.category}: {self.detail}"


@dataclass(frozen=True)
class Design:
    """A point set 0..n-1 with a list of 3-element blocks.

    Whether the blocks form a partial or a full Steiner triple system is a
    matter of validation, not of type.
    """

    n: int
    blocks: tuple[Block, ...]

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Design":
        """Canonicalise member order and block order; no other checks."""
        return cls(n, tuple(sorted(canonical_block(b) for b in blocks)))

    @cached_property
    def block_set(self) -> frozenset[Block]:
        return frozenset(tuple(sorted(b)) for b in self.blocks)

    @property
    def size(self) -> int:
        """Number of blocks (the size of a partial system)."""
        return len(self.blocks)

    @property
    def points(self) -> range:
        return range(self.n)


@dataclass(frozen=True)
class GroupType:
    """Multiset of group sizes, e.g. 12^4 18^1, stored as (size, count) parts."""

    parts: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, *parts: tuple[int, int]) -> "GroupType":
        merged: dict[int, int] = {}
        for size, count in parts:
            if size < 1 or count < 1:
                raise ValueError(f"group sizes and multiplicities must be >= 1, got {size}^{count}")
            merged[size] = merged.get(size, 0) + count
        return cls(tuple(sorted(merged.items())))

    @property
    def total_points(self) -> int:
        return sum(size * count for size, count in self.parts)

    @property
    def group_count(self) -> int:
        return sum(count for _, count in self.parts)

    def group_sizes(self) -> list[int]:
        """All group sizes in canonical order (ascending size)."""
        return [size for size, count in self.parts for _ in range(count)]

    def cross_pairs(self) -> int:
        """Number of point pairs lying in two different groups."""
        n = self.total_points
        within = sum(count * size * (size - 1) // 2 for size, count in self.parts)
        return n * (n - 1) // 2 - within

    def key(self) -> str:
        """Canonical string such as ``3:12^5`` or ``3:12^4+18^1``."""
        return "3:" + "+".join(f"{size}^{count}" for size, count in self.parts)


@dataclass(frozen=True)
class Gdd:
    """A 3-GDD: a partition of the points into groups plus a transverse design."""

    group_type: GroupType
    groups: tuple[tuple[int, ...], ...]
    design: Design


@dataclass(frozen=True)
class AlmostParallelClass:
    """Pairwise disjoint blocks covering every point except ``missed``."""

    blocks: frozenset[Block]
    missed: int

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], missed: int) -> "AlmostParallelClass":
        return cls(frozenset(canonical_block(b) for b in blocks), missed)


@dataclass(frozen=True)
class NonseqCertificate:
    """Almost parallel classes missing n-1 or more distinct points.

    A verified certificate witnesses that the design is nonsequenceable:
    any ordering of the points has either its first or its last point
    missed by some entry, and that entry's blocks partition the remaining
    n-1 points, a proper segment.
    """

    entries: Mapping[int, AlmostParallelClass]

    def __len__(self) -> int:
        return len(self.entries)


def validate_psts(d: Design) -> ValidationReport:
    """Check the partial-system condition: every pair in at most one block.

    Also rejects malformed blocks (wrong arity, repeated or out-of-range
    members).  Duplicate blocks surface as repeated pairs.
    """
    if d.n < 0:
        return ValidationReport.failed("order", f"negative order {d.n}")
    seen: dict[tuple[int, int], Block] = {}
    for blk in d.blocks:
        members = tuple(blk)
        if len(members) != 3 or len(set(members)) != 3:
            return ValidationReport.failed("malformed-block", f"block {members!r} does not have 3 distinct points")
        if not all(isinstance(p, int) and 0 <= p < d.n for p in members):
            return ValidationReport.failed("malformed-block", f"block {members!r} has points outside 0..{d.n - 1}")
        for pair in _pairs(members):
            if pair in seen:
                return ValidationReport.failed(
                    "repeated-pair",
                    f"pair {pair} covered by blocks {seen[pair]} and {tuple(sorted(members))}",
                )
            seen[pair] = tuple(sorted(members))
    return ValidationReport.passed()


def validate_sts(d: Design) -> ValidationReport:
    """Check the full Steiner condition: every pair in exactly one block."""
    rep = validate_psts(d)
    if not rep:
        return rep
    if d.n % 6 not in (1, 3):
        return ValidationReport.failed("order", f"no Steiner triple system of order {d.n} exists (n must be 1 or 3 mod 6)")
    covered = 3 * len(d.blocks)
    total = d.n * (d.n - 1) // 2
    if covered < total:
        uncovered = _first_uncovered_pair(d)
        return ValidationReport.failed("uncovered-pair", f"pair {uncovered} is in no block")
    expected = d.n * (d.n - 1) // 6
    if len(d.blocks) != expected:
        return ValidationReport.failed("size", f"{len(d.blocks)} blocks, expected {expected}")
    return ValidationReport.passed()


def _first_uncovered_pair(d: Design) -> tuple[int, int]:
    seen = set()
    for blk in d.blocks:
        seen.update(_pairs(blk))
    for a in range(d.n):
        for b in range(a + 1, d.n):
            if (a, b) not in seen:
                return (a, b)
    raise AssertionError("no uncovered pair")


def validate_gdd(g: Gdd) -> ValidationReport:
    """Check that the blocks decompose exactly the cross-group pairs."""
    n = g.group_type.total_points
    if g.design.n != n:
        return ValidationReport.failed("order", f"design has {g.design.n} points, group type needs {n}")
    flat = sorted(p for grp in g.groups for p in grp)
    if flat != list(range(n)):
        return ValidationReport.failed("groups", "groups are not a partition of the point set")
    if sorted(len(grp) for grp in g.groups) != sorted(g.group_type.group_sizes()):
        return ValidationReport.failed("group-type", "group sizes do not match the declared type")
    gid = [0] * n
    for i, grp in enumerate(g.groups):
        for p in grp:
            gid[p] = i
    seen: dict[tuple[int, int], Block] = {}
    for blk in g.design.blocks:
        members = tuple(blk)
        if len(members) != 3 or len(set(members)) != 3 or not all(
            isinstance(p, int) and 0 <= p < n for p in members
        ):
            return ValidationReport.failed("malformed-block", f"block {members!r} is not a transverse triple candidate")
        if len({gid[p] for p in members}) != 3:
            return ValidationReport.failed("within-group-pair", f"block {tuple(sorted(members))} hits a group twice")
        for pair in _pairs(members):
            if pair in seen:
                return ValidationReport.failed(
                    "repeated-pair", f"pair {pair} covered by blocks {seen[pair]} and {tuple(sorted(members))}"
                )
            seen[pair] = tuple(sorted(members))
    cross = g.group_type.cross_pairs()
    if len(seen) < cross:
        for a in range(n):
            for b in range(a + 1, n):
                if gid[a] != gid[b] and (a, b) not in seen:
                    return ValidationReport.failed("uncovered-pair", f"cross pair ({a}, {b}) is in no block")
    if 3 * len(g.design.blocks) != cross:
        return ValidationReport.failed("size", f"{len(g.design.blocks)} blocks, expected {cross // 3}")
    return ValidationReport.passed()


def verify_apc(d: Design, apc: AlmostParallelClass) -> bool:
    """True iff the blocks all belong to ``d``, are pairwise disjoint, and
    cover exactly the points other than ``apc.missed``."""
    if not 0 <= apc.missed < d.n:
        return False
    block_set = d.block_set
    covered: set[int] = set()
    for blk in apc.blocks:
        key = tuple(sorted(blk))
        if key not in block_set:
            return False
        if covered.intersection(key):
            return False
        covered.update(key)
    return len(covered) == d.n - 1 and apc.missed not in covered


def verify_certificate(d: Design, cert: NonseqCertificate) -> bool:
    """True iff the certificate has >= n-1 entries, each a valid almost
    parallel class of ``d`` missing exactly its key point."""
    if len(cert.entries) < d.n - 1:
        return False
    for missed, apc in cert.entries.items():
        if apc.missed != missed or not verify_apc(d, apc):
            return False
    return True
