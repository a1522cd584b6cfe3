"""Sequenceability: admissibility checks, exhaustive search, certification.

A sequence of a design's points is admissible when no proper segment can
be partitioned into blocks.  "Segment" is read either as any contiguous
subsequence (the default, strictest reading) or as proper prefixes and
suffixes only; a certificate of almost parallel classes refutes both
readings at once, since its refuting segment always has length n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .designs import AlmostParallelClass, Design, NonseqCertificate
from .exact_cover import BudgetExceededError, SegmentOracle, find_apc


class SegmentPolicy(Enum):
    ALL_INTERVALS = "all-intervals"
    PREFIXES_AND_SUFFIXES = "prefixes-and-suffixes"


class CertificationError(RuntimeError):
    """Certification failed; carries the points that admit no almost
    parallel class.  More than one such point means the certificate
    criterion is inapplicable, not that the design is sequenceable."""

    def __init__(self, missing: Sequence[int]):
        self.missing = tuple(missing)
        super().__init__(f"no almost parallel class misses point(s) {list(self.missing)}")


def _check_permutation(d: Design, seq: Sequence[int]) -> tuple[int, ...]:
    order = tuple(seq)
    if sorted(order) != list(range(d.n)):
        raise ValueError(f"sequence must be a permutation of 0..{d.n - 1}")
    return order


def is_admissible(d: Design, seq: Sequence[int], policy: SegmentPolicy = SegmentPolicy.ALL_INTERVALS) -> bool:
    """Whether no proper segment of the sequence is partitionable into blocks.

    Segments are scanned longest first: on certified designs the length
    n-1 suffix or prefix is partitionable, so rejection is immediate.
    """
    order = _check_permutation(d, seq)
    n = d.n
    oracle = SegmentOracle(d)
    for length in range(n - 1, 0, -1):
        if length % 3:
            continue
        if policy is SegmentPolicy.PREFIXES_AND_SUFFIXES:
            starts = (0, n - length)
        else:
            starts = range(n - length + 1)
        for i in starts:
            if oracle.partitionable(order[i : i + length]):
                return False
    return True


def find_admissible_sequence(
    d: Design,
    policy: SegmentPolicy = SegmentPolicy.ALL_INTERVALS,
    node_budget: int = 10**8,
) -> Optional[tuple[int, ...]]:
    """Exhaustive backtracking search for an admissible sequence.

    A prefix is pruned as soon as some segment ending at its last point is
    partitionable; that segment stays a proper segment in every
    completion.  Returns None only after the whole tree is exhausted;
    raises BudgetExceededError after ``node_budget`` prefix extensions.

    Segment contents are tracked as prefix bitmasks, so each check is one
    subtraction plus a memoized partition decision.
    """
    n = d.n
    oracle = SegmentOracle(d)
    solve = oracle.mask_partitionable
    all_intervals = policy is SegmentPolicy.ALL_INTERVALS
    prefix: list[int] = []
    pmask: list[int] = [0]  # pmask[j] = bitmask of prefix[:j]
    nodes = 0

    def extend() -> bool:
        nonlocal nodes
        t1 = len(prefix) + 1
        done = t1 == n
        base = pmask[-1]
        for p in range(n):
            bit = 1 << p
            if base & bit:
                continue
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(f"sequence search exceeded its budget of {node_budget} nodes")
            m1 = base | bit
            # segments ending at the new point, shortest first
            ok = True
            if all_intervals:
                for i in range(t1 - 3, -1, -3):
                    if i == 0 and done:
                        continue  # the whole sequence is not a proper segment
                    if solve(m1 - pmask[i]):
                        ok = False
                        break
            elif not done:
                ok = t1 % 3 != 0 or not solve(m1)  # proper prefix
            else:
                for i in range(t1 - 3, 0, -3):  # proper suffixes, at completion
                    if solve(m1 - pmask[i]):
                        ok = False
                        break
            if ok:
                if done:
                    prefix.append(p)
                    return True
                prefix.append(p)
                pmask.append(m1)
                if extend():
                    return True
                prefix.pop()
                pmask.pop()
        return False

    if n == 0 or extend():
        return tuple(prefix)
    return None


def certify_nonsequenceable(d: Design) -> NonseqCertificate:
    """Search an almost parallel class missing each point; succeed when at
    most one point lacks one.  Raises CertificationError otherwise."""
    entries: dict[int, AlmostParallelClass] = {}
    missing: list[int] = []
    for point in range(d.n):
        apc = find_apc(d, point)
        if apc is None:
            missing.append(point)
        else:
            entries[point] = apc
    if len(entries) < d.n - 1:
        raise CertificationError(missing)
    return NonseqCertificate(entries)


@dataclass(frozen=True)
class SequenceViolation:
    """A proper segment of a sequence together with the almost parallel
    class that partitions it."""

    kind: str  # "suffix" or "prefix"
    start: int  # first position of the segment, 0-based inclusive
    end: int  # last position, inclusive
    segment: tuple[int, ...]
    apc: AlmostParallelClass


def explain_nonsequenceable(d: Design, cert: NonseqCertificate, seq: Sequence[int]) -> SequenceViolation:
    """Produce the concrete refutation for one sequence: the class missing
    its first point partitions the suffix of length n-1, or the class
    missing its last point partitions the prefix of length n-1."""
    order = _check_permutation(d, seq)
    n = d.n
    apc = cert.entries.get(order[0])
    if apc is not None:
        return SequenceViolation("suffix", 1, n - 1, order[1:], apc)
    apc = cert.entries.get(order[-1])
    if apc is not None:
        return SequenceViolation("prefix", 0, n - 2, order[: n - 1], apc)
    raise ValueError("certificate misses both endpoints; it cannot have n-1 verified entries")


__all__ = [
    "SegmentPolicy",
    "CertificationError",
    "SequenceViolation",
    "is_admissible",
    "find_admissible_sequence",
    "certify_nonsequenceable",
    "explain_nonsequenceable",
]
