import csv
import json
import subprocess
import sys

import pytest

from handball_sim import cli, report
from handball_sim.formats import StructuralError

SUMMARY_HEADER = ["metric", "RR", "KO/S", "KO/R", "G64/S", "G64/R", "G66/S", "G66/R", "G46/S", "G46/R"]
SLUGS = ["rr", "ko_seeded", "ko_random", "g64_seeded", "g64_random", "g66_seeded", "g66_random",
         "g46_seeded", "g46_random"]


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def baseline_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("baseline")
    assert cli.run_cli(["--preset", "baseline", "--runs", "3000", "--seed", "42", "--out", str(out)]) == 0
    return out


def test_baseline_files(baseline_dir):
    assert sorted(p.name for p in baseline_dir.iterdir()) == sorted([f"{s}.csv" for s in SLUGS] + ["summary.csv"])


def test_summary_rows_in_order(baseline_dir):
    rows = read_csv(baseline_dir / "summary.csv")
    assert rows[0] == SUMMARY_HEADER
    assert [r[0] for r in rows[1:]] == list(report.SUMMARY_ROWS)
    assert rows[1][1:] == ["23", "5", "5", "5", "5", "5", "5", "3", "3"]
    assert rows[3][1:] == ["276", "76", "76", "80", "80", "82", "82", "68", "68"]
    assert rows[-1][1] == report.MISSING


def test_report_schema(baseline_dir):
    rows = read_csv(baseline_dir / "g66_seeded.csv")
    assert rows[0] == ["metric", "value", "se", "n"]
    names = [r[0] for r in rows[1:]]
    assert names[:4] == [f"avg_rank_place_{k}" for k in range(1, 5)]
    assert "final_quality" in names and "win_prob_best_p_24" in names
    assert all(r[3] == "3000" for r in rows[1:])
    assert all(len(r[1].split(".")[1]) == 6 for r in rows[1:] if r[1] != report.MISSING)


def test_byte_identical_reruns(baseline_dir, tmp_path):
    assert cli.run_cli(["--preset", "baseline", "--runs", "3000", "--seed", "42", "--out", str(tmp_path),
                        "--threads", "1"]) == 0
    for p in baseline_dir.iterdir():
        assert (tmp_path / p.name).read_bytes() == p.read_bytes()


def test_single_design_report(tmp_path, capsys):
    args = ["--format", "g66", "--seeding", "seeded", "--alpha", "4", "--beta", "24", "--runs", "100000",
            "--seed", "7", "--out", str(tmp_path)]
    assert cli.run_cli(args) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["g66_seeded.csv", "summary.csv"]
    values = {r[0]: r[1] for r in read_csv(tmp_path / "g66_seeded.csv")[1:]}
    for k, expected in enumerate([3.48, 4.88, 4.94, 7.16], start=1):
        assert float(values[f"avg_rank_place_{k}"]) == pytest.approx(expected, abs=0.05)


@pytest.mark.parametrize("emit, ext", [("json", "json"), ("table", "txt")])
def test_other_emit_modes(tmp_path, emit, ext):
    assert cli.run_cli(["--format", "ko", "--runs", "2000", "--out", str(tmp_path), "--emit", emit]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted([f"ko_random.{ext}", f"ko_seeded.{ext}",
                                                                   f"summary.{ext}"])
    if emit == "json":
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["columns"] == ["KO/S", "KO/R"]
        assert list(summary["rows"]) == list(report.SUMMARY_ROWS)
        assert json.loads((tmp_path / "ko_seeded.json").read_text())["runs"] == 2000
    else:
        lines = (tmp_path / "summary.txt").read_text().splitlines()
        assert lines[0].split() == ["metric", "KO/S", "KO/R"]
        assert lines[4].startswith("Average rank of #1")


def test_figure_data(tmp_path):
    assert cli.run_cli(["--runs", "2000", "--out", str(tmp_path), "--emit", "figdata"]) == 0
    rows = read_csv(tmp_path / "figdata.csv")
    assert rows[0] == ["figure", "series", "x", "y"]
    vs_rr = [r for r in rows if r[0] == "win_best_p_vs_RR"]
    assert {r[1] for r in vs_rr} == set(SUMMARY_HEADER[2:])
    for name in SUMMARY_HEADER[2:]:
        assert [int(r[2]) for r in vs_rr if r[1] == name] == list(range(1, 13))
    finals = [r for r in rows if r[0] == "final_best_p" and r[1] == "KO/S"]
    assert [int(r[2]) for r in finals] == list(range(1, 9))
    place = [r for r in rows if r[0] == "place_1_vs_KO" and r[1] == "G66/S"]
    assert [int(r[2]) for r in place] == list(range(1, 25))
    assert not any(r[1].startswith("KO") for r in rows if r[0].startswith("place_"))


def test_empty_design_list_gives_header_only():
    assert report.summary([], {}) == "metric\n"
    assert report.summary([], {}, "table") == "metric\n"
    assert report.figure_series([], {}) == "figure,series,x,y\n"


def test_stdout_when_no_out(capsys):
    assert cli.run_cli(["--format", "rr", "--runs", "500"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "metric,RR"


def test_convergence_preset(tmp_path):
    assert cli.run_cli(["--preset", "convergence", "--runs", "5000", "--seed", "1", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "convergence.csv")
    assert rows[0][:3] == ["design", "runs", "best_team_win"]
    assert [int(r[1]) for r in rows[1:]] == [1000, 2500, 5000]


def test_sensitivity_preset_layout(tmp_path):
    assert cli.run_cli(["--preset", "sensitivity_beta", "--runs", "1000", "--out", str(tmp_path)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["beta18", "beta36"]
    assert (tmp_path / "beta36" / "summary.csv").exists()


@pytest.mark.slow
def test_validation_preset(tmp_path, capsys):
    assert cli.run_cli(["--preset", "validation", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "validation.txt").read_text()
    assert "[FAIL]" not in text
    assert text.count("[PASS]") == 25


@pytest.mark.parametrize("args", [
    ["--format", "swiss"],
    ["--runs", "0"],
    ["--runs", "-5"],
    ["--alpha", "-1"],
    ["--beta", "nan"],
    ["--seed", str(2**64)],
    ["--preset", "everything"],
    ["--emit", "xml"],
])
def test_usage_errors(args):
    with pytest.raises(SystemExit) as info:
        cli.run_cli(args)
    assert info.value.code == cli.EXIT_USAGE


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.run_cli(["--format", "rr", "--runs", "10", "--out", str(blocker / "sub")]) == cli.EXIT_USAGE
    assert "not writable" in capsys.readouterr().err


def test_structural_error_exit(monkeypatch, capsys):
    def broken(config):
        raise StructuralError("teams 1 and 2 would meet a third time", run_index=41)

    monkeypatch.setattr(cli, "run_experiment", broken)
    assert cli.run_cli(["--format", "ko", "--runs", "100"]) == cli.EXIT_SIMULATION
    assert "run 41" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "handball_sim", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "--preset" in proc.stdout
