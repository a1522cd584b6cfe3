"""Exact-cover solver (dancing links) and the block searches built on it.

The solver is the classic Algorithm X over a toroidal doubly-linked
matrix, written with an explicit stack instead of recursion and with an
optional node budget so that callers embedding it inside their own
backtracking can never hang.  Exceeding the budget raises; it is a
distinct outcome from "no solution exists".

Determinism: the column chosen is always the one with the fewest
remaining candidates, ties broken by lowest element index, and rows are
tried in candidate-insertion order.  For a fixed instance the solution
list is therefore reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Optional

from .designs import AlmostParallelClass, Design


class BudgetExceededError(RuntimeError):
    """A search hit its node budget before finishing."""


@dataclass(frozen=True)
class ExactCoverInstance:
    """A universe 0..universe_size-1 and candidate subsets to cover it with."""

    universe_size: int
    candidates: tuple[tuple[Hashable, tuple[int, ...]], ...]

    @classmethod
    def build(cls, universe_size: int, candidates: Iterable[tuple[Hashable, Iterable[int]]]) -> "ExactCoverInstance":
        if universe_size < 0:
            raise ValueError("universe_size must be nonnegative")
        normalised = []
        ids = set()
        for cand_id, elems in candidates:
            subset = tuple(sorted(elems))
            if not subset:
                raise ValueError(f"candidate {cand_id!r} is empty")
            if len(set(subset)) != len(subset):
                raise ValueError(f"candidate {cand_id!r} repeats an element")
            if subset[0] < 0 or subset[-1] >= universe_size:
                raise ValueError(f"candidate {cand_id!r} leaves the universe 0..{universe_size - 1}")
            if cand_id in ids:
                raise ValueError(f"duplicate candidate id {cand_id!r}")
            ids.add(cand_id)
            normalised.append((cand_id, subset))
        return cls(universe_size, tuple(normalised))


@dataclass(frozen=True)
class ExactCoverSolution:
    """Candidate ids whose subsets partition the universe."""

    chosen: frozenset


class _Node:
    __slots__ = ("left", "right", "up", "down", "column", "row_id")

    def __init__(self):
        self.left = self.right = self.up = self.down = self
        self.column: "_Column" = None  # type: ignore[assignment]
        self.row_id: Hashable = None


class _Column(_Node):
    __slots__ = ("size", "index")

    def __init__(self, index: int):
        super().__init__()
        self.size = 0
        self.index = index
        self.column = self


class _Matrix:
    """Sparse 0/1 matrix as circular doubly-linked lists."""

    def __init__(self, inst: ExactCoverInstance):
        self.header = _Column(-1)
        self.columns = []
        prev: _Node = self.header
        for i in range(inst.universe_size):
            col = _Column(i)
            col.left, col.right = prev, self.header
            prev.right = col
            self.header.left = col
            self.columns.append(col)
            prev = col
        for cand_id, subset in inst.candidates:
            self._add_row(cand_id, subset)

    def _add_row(self, row_id: Hashable, subset: tuple[int, ...]) -> None:
        first = None
        for e in subset:
            col = self.columns[e]
            node = _Node()
            node.row_id = row_id
            node.column = col
            node.up, node.down = col.up, col
            col.up.down = node
            col.up = node
            col.size += 1
            if first is None:
                first = node
            else:
                node.left, node.right = first.left, first
                first.left.right = node
                first.left = node

    def choose_column(self) -> _Column:
        best = None
        col = self.header.right
        while col is not self.header:
            if best is None or col.size < best.size:
                best = col
                if col.size == 0:
                    break
            col = col.right
        return best  # type: ignore[return-value]

    def cover(self, col: _Column) -> None:
        col.right.left = col.left
        col.left.right = col.right
        row = col.down
        while row is not col:
            node = row.right
            while node is not row:
                node.down.up = node.up
                node.up.down = node.down
                node.column.size -= 1
                node = node.right
            row = row.down

    def uncover(self, col: _Column) -> None:
        row = col.up
        while row is not col:
            node = row.left
            while node is not row:
                node.column.size += 1
                node.down.up = node
                node.up.down = node
                node = node.left
            row = row.up
        col.right.left = col
        col.left.right = col


def solve(inst: ExactCoverInstance, limit: int, *, node_budget: Optional[int] = None) -> list[ExactCoverSolution]:
    """Find up to ``limit`` exact covers, in deterministic search order.

    Returns an empty list iff the instance has no exact cover.  Raises
    BudgetExceededError if more than ``node_budget`` rows are applied
    before the search finishes.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    matrix = _Matrix(inst)
    header = matrix.header
    solutions: list[ExactCoverSolution] = []
    partial: list[_Node] = []
    stack: list[list] = []  # frames [column, row]; row == column means "before first row"
    nodes = 0
    backtracking = False
    while True:
        if not backtracking:
            if header.right is header:
                solutions.append(ExactCoverSolution(frozenset(nd.row_id for nd in partial)))
                if len(solutions) >= limit or not stack:
                    return solutions
                backtracking = True
                continue
            column = matrix.choose_column()
            matrix.cover(column)
            stack.append([column, column])
            backtracking = True
            continue
        if not stack:
            return solutions
        frame = stack[-1]
        column, row = frame
        if row is not column:
            node = row.left
            while node is not row:
                matrix.uncover(node.column)
                node = node.left
            partial.pop()
        row = row.down
        frame[1] = row
        if row is column:
            matrix.uncover(column)
            stack.pop()
            continue
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise BudgetExceededError(f"exact-cover search exceeded its budget of {node_budget} nodes")
        partial.append(row)
        node = row.right
        while node is not row:
            matrix.cover(node.column)
            node = node.right
        backtracking = False


def exists_cover(inst: ExactCoverInstance, *, node_budget: Optional[int] = None) -> bool:
    """Whether any exact cover exists (stops at the first one)."""
    return bool(solve(inst, 1, node_budget=node_budget))


def find_apc(d: Design, missed: int) -> Optional[AlmostParallelClass]:
    """Search d's blocks for an almost parallel class avoiding ``missed``.

    Universe: the points other than ``missed``; candidates: the blocks not
    containing it.  Returns None iff no such class exists.
    """
    if not 0 <= missed < d.n:
        raise ValueError(f"missed point {missed} outside 0..{d.n - 1}")

    def squeeze(p: int) -> int:
        return p if p < missed else p - 1

    candidates = []
    for blk in sorted(d.block_set):
        if missed not in blk:
            candidates.append((blk, tuple(squeeze(p) for p in blk)))
    inst = ExactCoverInstance.build(d.n - 1, candidates)
    found = solve(inst, 1)
    if not found:
        return None
    return AlmostParallelClass(frozenset(found[0].chosen), missed)


def segment_partitionable(d: Design, segment: Iterable[int], *, node_budget: Optional[int] = None) -> bool:
    """Whether some set of d's blocks, each inside ``segment``, partitions it.

    Always False when the segment size is not a multiple of 3.
    """
    seg = set(segment)
    if len(seg) % 3:
        return False
    if not seg:
        return True
    if len(seg) == 3:
        return tuple(sorted(seg)) in d.block_set
    position = {p: i for i, p in enumerate(sorted(seg))}
    candidates = []
    for blk in sorted(d.block_set):
        if seg.issuperset(blk):
            candidates.append((blk, tuple(position[p] for p in blk)))
    inst = ExactCoverInstance.build(len(seg), candidates)
    return exists_cover(inst, node_budget=node_budget)


class SegmentOracle:
    """Memoized segment-partition decisions for one fixed design.

    Point sets recur constantly while a sequence search backtracks, so
    decisions are cached by the set itself (as a bitmask), which never
    needs invalidating.  Agrees with ``segment_partitionable`` everywhere.
    """

    def __init__(self, d: Design):
        self.design = d
        by_point: list[list[int]] = [[] for _ in range(d.n)]
        for blk in sorted(d.block_set):
            mask = (1 << blk[0]) | (1 << blk[1]) | (1 << blk[2])
            by_point[blk[0]].append(mask)  # filed under the lowest point
        self._blocks_at = by_point
        self._memo: dict[int, bool] = {0: True}

    def partitionable(self, points: Iterable[int]) -> bool:
        mask = 0
        count = 0
        for p in points:
            mask |= 1 << p
            count += 1
        if count % 3:
            return False
        return self.mask_partitionable(mask)

    def mask_partitionable(self, mask: int) -> bool:
        """Partition decision for a point set given as a bitmask whose
        population count is a multiple of 3."""
        memo = self._memo
        hit = memo.get(mask)
        if hit is not None:
            return hit
        pivot = (mask & -mask).bit_length() - 1  # lowest point must be covered
        result = False
        for bmask in self._blocks_at[pivot]:
            if bmask & mask == bmask and self.mask_partitionable(mask & ~bmask):
                result = True
                break
        memo[mask] = result
        return result
