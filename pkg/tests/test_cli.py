"""End-to-end CLI behaviour: commands, exit codes, machine-parseable output."""

import json
import subprocess
import sys

import pytest

from nonseq_sts.cli import main
from nonseq_sts.documents import DesignDocument
from nonseq_sts.designs import Design

from reference_systems import STS7_BLOCKS, STS7_LABELS


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, dict(
        line.split(": ", 1) for line in out.strip().splitlines() if ": " in line
    )


@pytest.fixture()
def sts7_file(tmp_path):
    doc = DesignDocument(Design.from_blocks(7, STS7_BLOCKS), labels=STS7_LABELS)
    path = tmp_path / "sts-7.json"
    doc.save(path)
    return path


class TestBuild:
    def test_build_13(self, capsys, tmp_path):
        out = tmp_path / "sts-13.json"
        code, kv = run_cli(capsys, "build", 13, "--out", out)
        assert code == 0
        assert kv["BLOCKS"] == "26" and kv["ENTRIES"] == "13"
        raw = json.loads(out.read_text())
        assert len(raw["blocks"]) == 26
        assert len(raw["certificate"]) == 13

    def test_build_with_removals(self, capsys, tmp_path):
        out = tmp_path / "psts.json"
        code, kv = run_cli(capsys, "build", 13, "--a", 1, "--out", out)
        assert code == 0
        assert kv["BLOCKS"] == "25"

    def test_build_7_exits_2(self, capsys, tmp_path):
        assert main(["build", "7", "--out", str(tmp_path / "x.json")]) == 2

    def test_build_bad_a_exits_2(self, capsys, tmp_path):
        assert main(["build", "13", "--a", "5", "--out", str(tmp_path / "x.json")]) == 2

    def test_rigid_removal_exits_1(self, capsys, tmp_path):
        # a=2 at order 13 cannot be certified; surfaced as a failed check
        assert main(["build", "13", "--a", "2", "--out", str(tmp_path / "x.json")]) == 1


class TestVerify:
    def test_build_then_verify(self, capsys, tmp_path):
        out = tmp_path / "sts-37.json"
        assert main(["--cache-dir", str(tmp_path / "cache"), "build", "37", "--out", str(out)]) == 0
        capsys.readouterr()
        code, kv = run_cli(capsys, "verify", out)
        assert code == 0
        assert kv["PSTS"] == "ok" and kv["STS"] == "ok"
        assert kv["CERTIFICATE"] == "ok" and kv["VERDICT"] == "pass"

    def test_partial_system_verifies(self, capsys, tmp_path):
        out = tmp_path / "psts.json"
        assert main(["build", "19", "--a", "3", "--out", str(out)]) == 0
        capsys.readouterr()
        code, kv = run_cli(capsys, "verify", out)
        assert code == 0
        assert kv["PSTS"] == "ok"
        assert kv["STS"].startswith("no")  # informational: it is a partial system
        assert kv["VERDICT"] == "pass"

    def test_tampered_certificate_names_entry(self, capsys, tmp_path):
        out = tmp_path / "sts-13.json"
        assert main(["build", "13", "--out", str(out)]) == 0
        capsys.readouterr()
        raw = json.loads(out.read_text())
        raw["certificate"][3]["blocks"][0] = [0, 1, 2]  # not a design block
        out.write_text(json.dumps(raw))
        code, kv = run_cli(capsys, "verify", out)
        assert code == 1
        assert kv["CERTIFICATE"] == f"fail (entry {raw['certificate'][3]['missed']})"
        assert kv["VERDICT"] == "fail"

    def test_truncated_json_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema": 1, "n": 13, "blo')
        assert main(["verify", str(bad)]) == 2

    def test_missing_file_exits_2(self, capsys, tmp_path):
        assert main(["verify", str(tmp_path / "nope.json")]) == 2

    def test_broken_design_fails(self, capsys, tmp_path):
        doc = DesignDocument(Design.from_blocks(4, [(0, 1, 2), (0, 1, 3)]))
        path = tmp_path / "broken.json"
        doc.save(path)
        code, kv = run_cli(capsys, "verify", path)
        assert code == 1
        assert kv["PSTS"].startswith("repeated-pair")


class TestSequence:
    def test_order7_prints_a_sequence(self, capsys, sts7_file):
        code, kv = run_cli(capsys, "sequence", sts7_file)
        assert code == 0
        seq = [int(p) for p in kv["SEQUENCE"].split()]
        assert sorted(seq) == list(range(7))
        assert kv["LABELED"].split() == [STS7_LABELS[p] for p in seq]

    def test_single_block_design_has_a_sequence(self, capsys, tmp_path):
        path = tmp_path / "one-block.json"
        DesignDocument(Design.from_blocks(4, [(0, 1, 2)])).save(path)
        code, kv = run_cli(capsys, "sequence", path)
        assert code == 0
        assert kv["SEQUENCE"] == "0 1 3 2"

    def test_budget_exit_4(self, capsys, sts7_file):
        code, kv = run_cli(capsys, "sequence", sts7_file, "--budget", 1)
        assert code == 4
        assert kv["RESULT"] == "BUDGET"

    def test_interleaving_disjoint_blocks_succeeds(self, capsys, tmp_path):
        path = tmp_path / "two-blocks.json"
        DesignDocument(Design.from_blocks(6, [(0, 1, 2), (3, 4, 5)])).save(path)
        code, kv = run_cli(capsys, "sequence", path)
        assert code == 0

    def test_exhausted_search_exits_3(self, capsys, tmp_path):
        # all four triples on 4 points: every permutation starts with a block
        path = tmp_path / "all-triples.json"
        blocks = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        DesignDocument(Design.from_blocks(4, blocks)).save(path)
        code, kv = run_cli(capsys, "sequence", path)
        assert code == 3
        assert kv["RESULT"] == "NONE (exhausted)"

    def test_policy_flag(self, capsys, sts7_file):
        code, kv = run_cli(capsys, "sequence", sts7_file, "--policy", "prefixes-and-suffixes")
        assert code == 0


class TestCertify:
    def test_recertify_stripped_document(self, capsys, tmp_path):
        out = tmp_path / "sts-31.json"
        assert main(["build", "31", "--out", str(out)]) == 0
        capsys.readouterr()
        raw = json.loads(out.read_text())
        del raw["certificate"]
        out.write_text(json.dumps(raw))
        code, kv = run_cli(capsys, "certify", out)
        assert code == 0
        assert kv["ENTRIES"] == "31"
        assert len(json.loads(out.read_text())["certificate"]) == 31

    def test_order7_lists_all_points(self, capsys, sts7_file):
        code, kv = run_cli(capsys, "certify", sts7_file, "--out", str(sts7_file) + ".out")
        assert code == 1
        assert kv["MISSING"] == "0 1 2 3 4 5 6"

    def test_recertify_reduced_partial_system(self, capsys, tmp_path):
        out = tmp_path / "psts.json"
        assert main(["build", "13", "--a", "1", "--out", str(out)]) == 0
        capsys.readouterr()
        raw = json.loads(out.read_text())
        del raw["certificate"]
        out.write_text(json.dumps(raw))
        code, kv = run_cli(capsys, "certify", out)
        assert code == 0
        assert kv["ENTRIES"] == "12"


class TestCatalog:
    def test_small_range(self, capsys, tmp_path):
        code, kv = run_cli(
            capsys,
            "--cache-dir", tmp_path / "cache",
            "catalog", "--min", 13, "--max", 38, "--dir", tmp_path / "out",
        )
        assert code == 0
        assert set(kv) == {"13", "19", "25", "31", "37"}
        for n in (13, 19, 25, 31, 37):
            assert (tmp_path / "out" / f"sts-{n}.json").exists()
            assert kv[str(n)].startswith("ok")


def test_console_entry_point_smoke(tmp_path):
    """The installed module is runnable as a subprocess."""
    out = tmp_path / "sts-13.json"
    proc = subprocess.run(
        [sys.executable, "-m", "nonseq_sts.cli", "build", "13", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "BLOCKS: 26" in proc.stdout
    proc = subprocess.run(
        [sys.executable, "-m", "nonseq_sts.cli", "verify", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "VERDICT: pass" in proc.stdout
