"""Admissibility, exhaustive sequencing, certification, explanations."""

import random
from itertools import permutations

import pytest

from nonseq_sts import (
    BudgetExceededError,
    CertificationError,
    Design,
    SegmentPolicy,
    base_case,
    certified_psts,
    certify_nonsequenceable,
    explain_nonsequenceable,
    find_admissible_sequence,
    is_admissible,
    segment_partitionable,
    verify_apc,
    verify_certificate,
)

from oracles import admissible_by_enumeration
from reference_systems import STS7_BLOCKS

BOTH_POLICIES = (SegmentPolicy.ALL_INTERVALS, SegmentPolicy.PREFIXES_AND_SUFFIXES)


@pytest.fixture(scope="module")
def sts7():
    return Design.from_blocks(7, STS7_BLOCKS)


class TestIsAdmissible:
    @pytest.mark.parametrize("policy", BOTH_POLICIES)
    def test_published_order7_sequence(self, sts7, policy):
        assert is_admissible(sts7, range(7), policy)  # a b c d e f g

    def test_block_as_interior_segment(self):
        d = Design.from_blocks(4, [(0, 1, 2)])
        assert not is_admissible(d, [3, 0, 1, 2][::-1])
        assert not is_admissible(d, [0, 1, 2, 3])
        assert is_admissible(d, [0, 1, 3, 2])

    def test_whole_sequence_is_not_proper(self):
        d = Design.from_blocks(3, [(0, 1, 2)])
        assert is_admissible(d, [0, 1, 2])

    def test_not_a_permutation(self, sts7):
        with pytest.raises(ValueError):
            is_admissible(sts7, [0, 0, 1, 2, 3, 4, 5])

    @pytest.mark.parametrize("policy", BOTH_POLICIES)
    def test_agrees_with_enumeration_oracle(self, sts7, policy):
        rng = random.Random(11)
        for _ in range(40):
            seq = list(range(7))
            rng.shuffle(seq)
            expected = admissible_by_enumeration(
                7, STS7_BLOCKS, seq, all_intervals=policy is SegmentPolicy.ALL_INTERVALS
            )
            assert is_admissible(sts7, seq, policy) == expected, seq

    def test_policy_monotonicity(self, sts7):
        """Admissible under all intervals implies admissible under
        prefixes-and-suffixes (the latter checks a subset of segments)."""
        rng = random.Random(13)
        designs = [Design.from_blocks(7, STS7_BLOCKS), base_case(13).design]
        for d in designs:
            for _ in range(100):
                seq = list(range(d.n))
                rng.shuffle(seq)
                if is_admissible(d, seq, SegmentPolicy.ALL_INTERVALS):
                    assert is_admissible(d, seq, SegmentPolicy.PREFIXES_AND_SUFFIXES)


class TestFindAdmissibleSequence:
    def test_order7_has_a_sequence(self, sts7):
        seq = find_admissible_sequence(sts7)
        assert seq is not None
        assert is_admissible(sts7, seq)

    def test_empty_design(self):
        assert find_admissible_sequence(Design(3, ())) == (0, 1, 2)
        assert find_admissible_sequence(Design(0, ())) == ()

    def test_single_block_design(self):
        seq = find_admissible_sequence(Design.from_blocks(4, [(0, 1, 2)]))
        assert seq == (0, 1, 3, 2)

    def test_budget_exhaustion(self, sts7):
        with pytest.raises(BudgetExceededError):
            find_admissible_sequence(sts7, node_budget=1)

    @pytest.mark.parametrize("policy", BOTH_POLICIES)
    def test_self_consistency(self, sts7, policy):
        seq = find_admissible_sequence(sts7, policy)
        assert is_admissible(sts7, seq, policy)

    def test_agrees_with_factorial_brute_force(self):
        """On tiny designs the searcher matches trying every permutation
        against the subset-enumeration oracle."""
        rng = random.Random(4242)
        cases = []
        for _ in range(8):
            n = rng.randint(5, 7)
            blocks = []
            pairs = set()
            for _ in range(rng.randint(1, 6)):
                blk = tuple(sorted(rng.sample(range(n), 3)))
                bp = {(blk[0], blk[1]), (blk[0], blk[2]), (blk[1], blk[2])}
                if pairs & bp:
                    continue
                pairs |= bp
                blocks.append(blk)
            cases.append((n, blocks))
        # fixed larger designs, up to 9 points and 6 blocks
        cases.append((8, [(0, 1, 2), (3, 4, 5), (0, 3, 6), (1, 4, 7), (2, 5, 6)]))
        cases.append((9, [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8)]))
        for n, blocks in cases:
            d = Design.from_blocks(n, blocks)
            got = find_admissible_sequence(d)
            oracle_hit = None
            for perm in permutations(range(n)):
                if admissible_by_enumeration(n, blocks, perm):
                    oracle_hit = perm
                    break
            assert (got is not None) == (oracle_hit is not None)
            if got is not None:
                assert admissible_by_enumeration(n, blocks, got)

    def test_all_triples_on_four_points_is_exhausted(self):
        d = Design.from_blocks(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
        assert find_admissible_sequence(d) is None


def test_no_certifiable_design_below_order_13():
    """Orders 4 and 7 are the only ones under 13 where classes even have
    integral size, and there two classes with different missed points always
    collide on a pair; so no small design can carry a certificate.  Checked
    on greedy-random maximal partial systems."""
    from oracles import brute_force_apcs

    rng = random.Random(5150)
    for n in (4, 7):
        triples = [c for c in permutations(range(n), 3) if c[0] < c[1] < c[2]]
        for _ in range(30):
            blocks, pairs = [], set()
            for blk in rng.sample(triples, min(len(triples), n * 2)):
                bp = {(blk[0], blk[1]), (blk[0], blk[2]), (blk[1], blk[2])}
                if not pairs & bp:
                    pairs |= bp
                    blocks.append(blk)
            missed_points = {
                x for x in range(n) if brute_force_apcs(n, blocks, x)
            }
            assert len(missed_points) <= 1, (n, blocks)
            with pytest.raises(CertificationError):
                certify_nonsequenceable(Design.from_blocks(n, blocks))


class TestCertify:
    def test_order19(self):
        d = base_case(19).design
        cert = certify_nonsequenceable(d)
        assert len(cert) == 19
        assert verify_certificate(d, cert)

    def test_order7_fails_for_every_point(self, sts7):
        with pytest.raises(CertificationError) as exc:
            certify_nonsequenceable(sts7)
        assert exc.value.missing == tuple(range(7))

    def test_reduced_design_recertifies(self):
        d = certified_psts(13, 1).design
        cert = certify_nonsequenceable(d)
        assert len(cert) == 12
        assert verify_certificate(d, cert)


@pytest.fixture(scope="module")
def cd13():
    return base_case(13)


class TestExplain:
    def _check(self, cd, violation, seq):
        n = cd.design.n
        assert violation.end - violation.start + 1 == n - 1
        assert violation.segment == tuple(seq[violation.start : violation.end + 1])
        assert segment_partitionable(cd.design, violation.segment)
        covered = set()
        for blk in violation.apc.blocks:
            assert blk in cd.design.block_set
            covered |= set(blk)
        assert covered == set(violation.segment)

    def test_suffix_case(self, cd13):
        seq = [0] + list(range(1, 13))
        v = explain_nonsequenceable(cd13.design, cd13.certificate, seq)
        assert v.kind == "suffix" and v.apc.missed == 0
        self._check(cd13, v, seq)

    def test_prefix_case(self, cd13):
        entries = dict(cd13.certificate.entries)
        del entries[12]  # force the prefix branch for sequences starting at 12
        from nonseq_sts import NonseqCertificate

        cert = NonseqCertificate(entries)
        assert verify_certificate(cd13.design, cert)
        seq = [12] + list(range(1, 12)) + [0]
        v = explain_nonsequenceable(cd13.design, cert, seq)
        assert v.kind == "prefix" and v.apc.missed == 0
        self._check(cd13, v, seq)

    def test_interior_anchor_is_fine(self, cd13):
        seq = list(range(1, 13)) + [0]  # 0 is last; suffix case still applies
        v = explain_nonsequenceable(cd13.design, cd13.certificate, seq)
        assert v.kind == "suffix" and v.apc.missed == 1
        self._check(cd13, v, seq)

    def test_soundness_link_on_random_permutations(self, cd13):
        """1000 random permutations: all rejected under both policies, and
        the explanation always produces a verified partitioned proper segment."""
        rng = random.Random(2024)
        d, cert = cd13.design, cd13.certificate
        assert verify_certificate(d, cert)
        for i in range(1000):
            seq = list(range(13))
            rng.shuffle(seq)
            policy = BOTH_POLICIES[i % 2]
            assert not is_admissible(d, seq, policy)
            v = explain_nonsequenceable(d, cert, seq)
            assert len(v.segment) < d.n
            self._check(cd13, v, seq)
