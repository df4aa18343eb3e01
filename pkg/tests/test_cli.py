import json
import subprocess
import sys
from pathlib import Path

import pytest

from lakebench.cli import main

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def make_synth(capsys, out_dir, nodes=30, vocab=20, extra=()):
    code, _, err = run_cli(
        capsys, "synth", "--nodes", str(nodes), "--vocab", str(vocab),
        "--kw-per-node", "2", "--mean-degree", "1.5", "--seed", "3",
        "--out", str(out_dir), *extra,
    )
    assert code == 0, err
    return out_dir / "node.csv", out_dir / "edge.csv"


def test_help_exits_zero_without_touching_filesystem(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["--help"]) == 0
    for cmd in ("synth", "sample", "queries", "search", "bench", "report"):
        assert main([cmd, "--help"]) == 0
    assert main(["ingest", "movies", "--help"]) == 0
    capsys.readouterr()
    assert list(tmp_path.iterdir()) == []


def test_usage_errors_exit_2(capsys):
    assert run_cli(capsys, "frobnicate")[0] == 2
    assert run_cli(capsys, "synth", "--no-such-flag")[0] == 2
    assert run_cli(capsys)[0] == 2


def test_missing_required_flag_names_it(capsys):
    code, _, err = run_cli(capsys, "synth", "--nodes", "5")
    assert code == 2
    assert "--vocab" in err
    code, _, err = run_cli(capsys, "report")
    assert code == 2
    assert "--in" in err


def test_synth_output_and_overwrite_guard(tmp_path, capsys):
    out = tmp_path / "d"
    nodes, edges = make_synth(capsys, out)
    first = nodes.read_bytes(), edges.read_bytes()

    code, _, err = run_cli(
        capsys, "synth", "--nodes", "30", "--vocab", "20", "--kw-per-node", "2",
        "--mean-degree", "1.5", "--seed", "3", "--out", str(out),
    )
    assert code == 1
    assert "already exists" in err

    make_synth(capsys, out, extra=("--force",))
    assert (nodes.read_bytes(), edges.read_bytes()) == first


def test_synth_example_invocation(tmp_path, capsys):
    out = tmp_path / "d"
    code, _, _ = run_cli(
        capsys, "synth", "--nodes", "100", "--vocab", "50", "--kw-per-node", "3",
        "--mean-degree", "2", "--seed", "7", "--out", str(out),
    )
    assert code == 0
    assert (out / "node.csv").exists()
    assert (out / "edge.csv").exists()


def test_search_prints_tab_separated_hits(tmp_path, capsys):
    (tmp_path / "n.csv").write_text("0,apple\n1,pie\n", encoding="utf-8")
    (tmp_path / "e.csv").write_text("0,1\n", encoding="utf-8")
    code, out, _ = run_cli(
        capsys, "search", "--nodes", str(tmp_path / "n.csv"),
        "--edges", str(tmp_path / "e.csv"), "--r", "1", "--query", "apple pie",
    )
    assert code == 0
    assert out.splitlines() == ["0\tapple,pie\t2", "1\tapple,pie\t2"]


def test_search_without_hits_prints_nothing(tmp_path, capsys):
    (tmp_path / "n.csv").write_text("0,apple\n", encoding="utf-8")
    (tmp_path / "e.csv").write_text("", encoding="utf-8")
    code, out, _ = run_cli(
        capsys, "search", "--nodes", str(tmp_path / "n.csv"),
        "--edges", str(tmp_path / "e.csv"), "--query", "zebra", "--mode", "all",
    )
    assert code == 0
    assert out == ""


def test_queries_single_writes_suite_and_sidecar(tmp_path, capsys):
    nodes, _ = make_synth(capsys, tmp_path / "d")
    suite = tmp_path / "s1.txt"
    code, out, _ = run_cli(
        capsys, "queries", "--nodes", str(nodes), "--policy", "single",
        "--count", "4", "--cutoff", "0.5", "--seed", "1", "--out", str(suite),
    )
    assert code == 0
    assert "4 queries" in out
    lines = suite.read_text().splitlines()
    assert len(lines) == 4
    assert all(len(line.split()) == 1 for line in lines)
    meta = json.loads((tmp_path / "s1.meta.json").read_text())
    assert meta["provenance"]["policy"] == "single"
    assert meta["provenance"]["seed"] == 1


def test_queries_multi_policies_validate_flags(tmp_path, capsys):
    nodes, edges = make_synth(capsys, tmp_path / "d")
    code, _, err = run_cli(
        capsys, "queries", "--nodes", str(nodes), "--policy", "multi-random",
        "--count", "2", "--out", str(tmp_path / "m.txt"),
    )
    assert code == 2
    assert "--k" in err

    code, _, err = run_cli(
        capsys, "queries", "--nodes", str(nodes), "--policy", "multi-related",
        "--k", "2", "--count", "2", "--out", str(tmp_path / "m.txt"),
    )
    assert code == 2
    assert "--edges" in err

    code, _, _ = run_cli(
        capsys, "queries", "--nodes", str(nodes), "--edges", str(edges),
        "--policy", "multi-related", "--k", "2", "--count", "2",
        "--cutoff", "0.5", "--r", "1", "--out", str(tmp_path / "m.txt"),
    )
    assert code == 0
    assert all(len(l.split()) == 2 for l in (tmp_path / "m.txt").read_text().splitlines())


def test_downstream_error_is_verbatim_on_stderr(tmp_path, capsys):
    nodes, _ = make_synth(capsys, tmp_path / "d", vocab=20)
    code, _, err = run_cli(
        capsys, "queries", "--nodes", str(nodes), "--policy", "single",
        "--count", "500", "--out", str(tmp_path / "s.txt"),
    )
    assert code == 1
    assert err.startswith("error: ")
    assert "lower the count or raise the cutoff fraction" in err


def test_missing_input_file_is_operational_error(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "search", "--nodes", str(tmp_path / "nope.csv"),
        "--edges", str(tmp_path / "nope2.csv"), "--query", "a",
    )
    assert code == 1
    assert "error:" in err


def test_config_file_merges_under_explicit_flags(tmp_path, capsys):
    config = tmp_path / "synth.json"
    config.write_text(json.dumps({
        "nodes": 30, "vocab": 20, "kw-per-node": 2, "mean-degree": 1.5,
        "out": str(tmp_path / "from_config"),
    }))
    out = tmp_path / "flag_wins"
    code, _, err = run_cli(
        capsys, "synth", "--config", str(config),
        "--nodes", "40", "--out", str(out),
    )
    assert code == 0, err
    assert not (tmp_path / "from_config").exists()
    report = json.loads((out / "ingest_report.json").read_text())
    assert report["nodes_written"] == 40


def test_config_unknown_key_rejected(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"nodez": 30}))
    code, _, err = run_cli(capsys, "synth", "--config", str(config))
    assert code == 1
    assert "nodez" in err


def test_ingest_movies_matches_golden(tmp_path, capsys):
    out = tmp_path / "m"
    code, stdout, _ = run_cli(
        capsys, "ingest", "movies", "--movies", str(DATA / "movies.csv"),
        "--ratings", str(DATA / "ratings.csv"), "--tags", str(DATA / "tags.csv"),
        "--out", str(out),
    )
    assert code == 0
    assert "2 nodes" in stdout
    assert (out / "node.csv").read_bytes() == (GOLDEN / "movies_node.csv").read_bytes()
    assert (out / "edge.csv").read_bytes() == (GOLDEN / "movies_edge.csv").read_bytes()


def test_ingest_dblp_and_apache(tmp_path, capsys):
    code, _, _ = run_cli(
        capsys, "ingest", "dblp", "--xml", str(DATA / "dblp.xml"),
        "--out", str(tmp_path / "d"),
    )
    assert code == 0
    assert (tmp_path / "d" / "node.csv").read_bytes() == \
        (GOLDEN / "dblp_node.csv").read_bytes()

    code, _, _ = run_cli(
        capsys, "ingest", "apache", "--log", str(DATA / "apache.log"),
        "--out", str(tmp_path / "a"),
    )
    assert code == 0
    assert (tmp_path / "a" / "node.csv").read_bytes() == \
        (GOLDEN / "apache_node.csv").read_bytes()


def test_sample_subcommand_and_clamp_note(tmp_path, capsys):
    nodes, edges = make_synth(capsys, tmp_path / "d", nodes=20)
    code, out, _ = run_cli(
        capsys, "sample", "--nodes", str(nodes), "--edges", str(edges),
        "--scale", "5", "--out", str(tmp_path / "s5"),
    )
    assert code == 0
    assert len((tmp_path / "s5" / "node.csv").read_text().splitlines()) == 5

    code, out, _ = run_cli(
        capsys, "sample", "--nodes", str(nodes), "--edges", str(edges),
        "--scale", "99", "--out", str(tmp_path / "s99"),
    )
    assert code == 0
    assert "note:" in out and "clamped" in out


def test_bench_pipeline_with_report_inspection(tmp_path, capsys):
    nodes, _ = make_synth(capsys, tmp_path / "d", nodes=40)
    suite = tmp_path / "s.txt"
    run_cli(capsys, "queries", "--nodes", str(nodes), "--policy", "single",
            "--count", "3", "--cutoff", "0.5", "--out", str(suite))
    report = tmp_path / "out.json"
    code, stdout, err = run_cli(
        capsys, "bench", "--scales", "20,40,80", "--suites", str(suite),
        "--report", str(report), "--workdir", str(tmp_path / "bw"),
        "--synth-vocab", "20", "--synth-kw-per-node", "2",
        "--synth-mean-degree", "1.5", "--seed", "3", "--r", "1",
    )
    assert code == 0, err
    assert report.exists()
    assert "scale 20" in stdout and "scale 80" in stdout

    code, stdout, _ = run_cli(capsys, "report", "--in", str(report))
    assert code == 0
    assert "scale 40" in stdout

    code, stdout, _ = run_cli(capsys, "report", "--in", str(report), "--trends")
    assert code == 0
    assert "build ratios" in stdout
    assert "stragglers" in stdout

    csv_out = tmp_path / "out.csv"
    code, _, _ = run_cli(capsys, "report", "--in", str(report),
                         "--out", str(csv_out))
    assert code == 0
    assert csv_out.read_text().startswith("scale,suite,query_index,duration_ns")

    code, _, err = run_cli(capsys, "report", "--in", str(csv_out), "--trends")
    assert code == 1
    assert "JSON" in err


def test_bench_requires_exactly_one_source(tmp_path, capsys):
    suite = tmp_path / "s.txt"
    suite.write_text("kw0\n")
    base = ["bench", "--scales", "10,20", "--suites", str(suite),
            "--report", str(tmp_path / "r.json"), "--workdir", str(tmp_path / "w")]
    code, _, err = run_cli(capsys, *base)
    assert code == 2
    assert "data source" in err

    code, _, err = run_cli(capsys, *base, "--synth-vocab", "10",
                           "--dblp", str(tmp_path / "x.xml"))
    assert code == 2


def test_bench_report_overwrite_guard(tmp_path, capsys):
    nodes, edges = make_synth(capsys, tmp_path / "d", nodes=20)
    suite = tmp_path / "s.txt"
    run_cli(capsys, "queries", "--nodes", str(nodes), "--policy", "single",
            "--count", "2", "--cutoff", "0.5", "--out", str(suite))
    report = tmp_path / "r.json"
    report.write_text("{}")
    code, _, err = run_cli(
        capsys, "bench", "--scales", "5,10", "--suites", str(suite),
        "--report", str(report), "--workdir", str(tmp_path / "w"),
        "--from-nodes", str(nodes), "--from-edges", str(edges),
    )
    assert code == 1
    assert "already exists" in err


def test_bench_subsample_clamp_warning_on_stderr(tmp_path, capsys):
    nodes, edges = make_synth(capsys, tmp_path / "d", nodes=20)
    suite = tmp_path / "s.txt"
    run_cli(capsys, "queries", "--nodes", str(nodes), "--policy", "single",
            "--count", "2", "--cutoff", "0.5", "--out", str(suite))
    code, _, err = run_cli(
        capsys, "bench", "--scales", "10,500", "--suites", str(suite),
        "--report", str(tmp_path / "r.json"), "--workdir", str(tmp_path / "w"),
        "--from-nodes", str(nodes), "--from-edges", str(edges), "--r", "1",
    )
    assert code == 0
    assert "warning:" in err and "500" in err


def test_console_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "lakebench.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "SUBCOMMAND" in proc.stdout
