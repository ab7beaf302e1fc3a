"""Tests for the command-line interface."""

import pytest

from ipcg_search.cli.main import OUTPUT_DIR_ENV, ExitCode, build_parser, main
from ipcg_search.cli.report import render_report
from ipcg_search.core.graph import enumerate_graphs
from ipcg_search.core.graph6 import read_graph6_file
from ipcg_search.search.generator import (
    CERTIFICATES_FILE,
    REMAINING_FILE,
    REPORT_FILE,
    STATE_FILE,
)
from ipcg_search.search.state import load_snapshot


def tree_lines(text: str) -> list[str]:
    return [line for line in text.splitlines() if line.startswith("T")]


@pytest.fixture(scope="module")
def campaign_dir(tmp_path_factory):
    """Output of a finished 4-vertex k=1 campaign."""
    out = tmp_path_factory.mktemp("n4")
    code = main(
        ["generate", "--n", "4", "--k", "1", "--rounds", "300", "--time", "120", "--out", str(out)]
    )
    assert code == ExitCode.OK
    return out


class TestTrees:
    """Tests for the trees command."""

    @pytest.mark.parametrize("n, count", [(3, 1), (8, 4), (10, 11)])
    def test_counts(self, capsys, n, count):
        """Test one Newick line per tree plus a summary."""
        assert main(["trees", str(n)]) == ExitCode.OK
        out = capsys.readouterr().out
        lines = tree_lines(out)
        assert len(lines) == count
        assert all(line.rstrip().endswith(";") for line in lines)
        assert f"# {count} binary tree(s) with {n} leaves" in out

    @pytest.mark.parametrize("n", [1, 17])
    def test_out_of_range(self, capsys, n):
        """Test n outside 2..16 is an input error."""
        assert main(["trees", str(n)]) == ExitCode.INPUT_ERROR
        assert "Error" in capsys.readouterr().out


class TestGraphs:
    """Tests for the graphs command."""

    def test_write_file(self, tmp_path, capsys):
        """Test all 11 graphs on 4 vertices are written."""
        out = tmp_path / "g4.g6"
        assert main(["graphs", "4", "--out", str(out)]) == ExitCode.OK
        assert read_graph6_file(out) == enumerate_graphs(4)
        assert "Wrote 11 graph(s)" in capsys.readouterr().out

    def test_sample(self, capsys):
        """Test a seeded sample is a reproducible subset."""
        assert main(["graphs", "5", "--sample", "6", "--seed", "3"]) == ExitCode.OK
        first = capsys.readouterr().out.split()
        assert main(["graphs", "5", "--sample", "6", "--seed", "3"]) == ExitCode.OK
        second = capsys.readouterr().out.split()
        assert first == second
        assert len(set(first)) == 6

        main(["graphs", "5"])
        everything = capsys.readouterr().out.split()
        assert len(everything) == 34
        assert set(first) <= set(everything)

    def test_bad_sample(self, capsys):
        """Test sample sizes beyond the graph count are rejected."""
        assert main(["graphs", "3", "--sample", "5"]) == ExitCode.INPUT_ERROR


class TestGenerate:
    """Tests for the generate command."""

    def test_artifacts(self, campaign_dir):
        """Test every artifact is written and nothing remains."""
        for name in (CERTIFICATES_FILE, STATE_FILE, REMAINING_FILE, REPORT_FILE):
            assert (campaign_dir / name).exists()
        assert read_graph6_file(campaign_dir / REMAINING_FILE) == []
        assert "#Remaining" in (campaign_dir / REPORT_FILE).read_text(encoding="utf-8")

    def test_resume_finished(self, campaign_dir, capsys):
        """Test resuming a finished campaign succeeds without new rounds."""
        assert main(["generate", "--out", str(campaign_dir), "--resume"]) == ExitCode.OK
        assert "All 11 target(s) identified" in capsys.readouterr().out

    def test_budget_exhausted(self, tmp_path, capsys):
        """Test one round cannot reach all six 6-edge graphs on 5 vertices."""
        code = main(
            ["generate", "--n", "5", "--k", "1", "--rounds", "1", "--time", "60",
             "--out", str(tmp_path)]
        )
        assert code == ExitCode.BUDGET_EXHAUSTED
        assert "Budget exhausted" in capsys.readouterr().out
        assert read_graph6_file(tmp_path / REMAINING_FILE)

    def test_targets_file(self, tmp_path):
        """Test targets read from a graph6 file."""
        targets = tmp_path / "g3.g6"
        main(["graphs", "3", "--out", str(targets)])
        code = main(
            ["generate", "--targets", str(targets), "--k", "1", "--time", "60",
             "--out", str(tmp_path / "run")]
        )
        assert code == ExitCode.OK

    def test_missing_targets_file(self, tmp_path, capsys):
        """Test an unreadable targets file is an input error."""
        code = main(
            ["generate", "--targets", str(tmp_path / "missing.g6"), "--out", str(tmp_path)]
        )
        assert code == ExitCode.INPUT_ERROR
        assert "Error" in capsys.readouterr().out

    def test_unknown_schedule(self, tmp_path, capsys):
        """Test an unknown preset lists the available ones."""
        code = main(["generate", "--n", "4", "--schedule", "nope", "--out", str(tmp_path)])
        assert code == ExitCode.INPUT_ERROR
        assert "Available" in capsys.readouterr().out

    @pytest.mark.parametrize("n", ["2", "11"])
    def test_n_out_of_range(self, tmp_path, n):
        """Test --n outside 3..10."""
        assert main(["generate", "--n", n, "--out", str(tmp_path)]) == ExitCode.INPUT_ERROR

    def test_bad_weight_range(self, tmp_path):
        """Test malformed ranges are input errors."""
        code = main(["generate", "--n", "4", "--leaf-range", "20", "--out", str(tmp_path)])
        assert code == ExitCode.INPUT_ERROR

    @pytest.mark.parametrize(
        "flags", [["--leaf-range", "1:5"], ["--internal-range", "1:9"], ["--trees", "1"], ["--rounds", "3"]]
    )
    def test_resume_rejects_phase_flags(self, campaign_dir, capsys, flags):
        """Test phase flags on resume need an explicit schedule or time."""
        code = main(["generate", "--out", str(campaign_dir), "--resume", *flags])
        assert code == ExitCode.INPUT_ERROR
        assert "need --schedule or --time" in capsys.readouterr().out

    def test_resume_without_state(self, tmp_path):
        """Test --resume needs a snapshot."""
        assert main(["generate", "--out", str(tmp_path), "--resume"]) == ExitCode.INPUT_ERROR

    def test_sources_exclusive(self):
        """Test --targets and --n cannot be combined."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["generate", "--targets", "a.g6", "--n", "4"])


class TestVerify:
    """Tests for the verify command."""

    def test_all_pass(self, campaign_dir, tmp_path, capsys):
        """Test every certificate of the campaign passes against the targets."""
        targets = tmp_path / "g4.g6"
        main(["graphs", "4", "--out", str(targets)])
        capsys.readouterr()
        certs = campaign_dir / CERTIFICATES_FILE
        assert main(["verify", str(certs), "--targets", str(targets)]) == ExitCode.OK
        assert "11/11 passed" in capsys.readouterr().out

    def test_corrupted(self, campaign_dir, tmp_path, capsys):
        """Test a damaged record makes verification fail."""
        path = tmp_path / "certs.jsonl"
        text = (campaign_dir / CERTIFICATES_FILE).read_text(encoding="utf-8")
        path.write_text(text + "not a certificate\n", encoding="utf-8")
        assert main(["verify", str(path)]) == ExitCode.VERIFY_FAILED
        out = capsys.readouterr().out
        assert "FAIL FORMAT" in out
        assert "11/12 passed" in out

    def test_empty(self, tmp_path, capsys):
        """Test an empty file verifies vacuously."""
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        assert main(["verify", str(path)]) == ExitCode.OK
        assert "0/0 passed" in capsys.readouterr().out


class TestReport:
    """Tests for the report command."""

    def test_report(self, campaign_dir, capsys):
        """Test the table and the tree tallies are printed."""
        assert main(["report", str(campaign_dir)]) == ExitCode.OK
        out = capsys.readouterr().out
        assert "#Remaining" in out
        assert "Identified per tree:" in out
        assert "Targets: 11" in out

    def test_output_dir_from_environment(self, campaign_dir, monkeypatch, capsys):
        """Test the default directory comes from the environment."""
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(campaign_dir))
        assert main(["report"]) == ExitCode.OK
        assert "n=4, k=1" in capsys.readouterr().out

    def test_missing_directory(self, tmp_path):
        """Test a directory without a snapshot is an input error."""
        assert main(["report", str(tmp_path)]) == ExitCode.INPUT_ERROR

    def test_tallies_balance(self, campaign_dir):
        """Test the balance line is printed when the tallies add up."""
        text = render_report(load_snapshot(campaign_dir / STATE_FILE))
        assert "Tree tallies sum to 7 = 11 targets - 4 trivially known - 0 remaining" in text
        assert "MISMATCH" not in text

    def test_tallies_mismatch(self, campaign_dir):
        """Test a wrong tally sum is reported instead of the balance line."""
        snapshot = load_snapshot(campaign_dir / STATE_FILE)
        snapshot["tree_tallies"] = {"1": 99}
        text = render_report(snapshot)
        assert "MISMATCH: tree tallies sum to 99" in text
        assert "Tree tallies sum to 99 =" not in text
