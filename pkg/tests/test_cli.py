import csv
import json

import pytest

from sieve.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, main
from sieve.datasets import DatasetUnavailable, available, load_dataset
from sieve.graph import SparseGraph, write_edge_list
from sieve.pipeline import run_experiment, run_sieve


@pytest.fixture
def karate_file(tmp_path, karate):
    p = tmp_path / "karate.txt"
    with open(p, "w") as f:
        f.write("# karate\n")
        for u, v in karate.edges:
            f.write(f"{u + 1} {v + 1}\n")
    return p


def test_solve_s_writes_outputs(karate_file, tmp_path, capsys):
    out = tmp_path / "s"
    assert main(["solve", str(karate_file), "--out", str(out)]) == EXIT_OK
    rep = json.loads((out / "report.json").read_text())
    assert rep["S"] == pytest.approx(0.484437, abs=1e-6)
    assert rep["non_singleton_clusters"] == 4 and rep["singleton_clusters"] == 2
    assert rep["proven_optimal"] is True
    rows = (out / "assignment.tsv").read_text().splitlines()
    assert rows[0] == "node\tcluster" and len(rows) == 35
    assert rows[1].split("\t")[0] == "1"  # original ids kept
    assert "S=0.484437" in capsys.readouterr().out


def test_solve_q(karate_file, tmp_path):
    out = tmp_path / "q"
    assert main(["solve", str(karate_file), "--objective", "q", "--out", str(out)]) == EXIT_OK
    rep = json.loads((out / "report.json").read_text())
    assert rep["Q"] == pytest.approx(0.419790, abs=1e-6)
    assert rep["clusters"] == 4


def test_score_roundtrip(karate_file, tmp_path, capsys):
    out = tmp_path / "s"
    main(["solve", str(karate_file), "--out", str(out)])
    capsys.readouterr()
    assert main(["score", str(karate_file), str(out / "assignment.tsv")]) == EXIT_OK
    lines = dict(line.split("\t")[:2] for line in capsys.readouterr().out.splitlines())
    assert lines["S"] == "0.484437"
    assert "Q" in lines


def test_isolated_nodes_only(tmp_path):
    g = SparseGraph.from_edges(5, [])
    run = run_sieve(g, out_dir=tmp_path)
    assert run.report["S"] == 0
    assert len(set(run.labels)) == 5
    assert run.report["Q"] is None


def test_budget_exit_code(tmp_path):
    g = load_dataset("football")
    p = tmp_path / "f.txt"
    with open(p, "w") as f:
        write_edge_list(g, f)
    code = main(["solve", str(p), "--time-limit", "0.05", "--out", str(tmp_path / "o")])
    assert code == EXIT_BUDGET
    assert (tmp_path / "o" / "assignment.tsv").exists()


def test_input_errors(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.txt")]) == EXIT_INPUT
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3\n")
    assert main(["components", str(bad)]) == EXIT_INPUT
    assert "line 2" in capsys.readouterr().err
    assert main(["solve", str(bad), "--objective", "z"]) == EXIT_INPUT
    assert main(["solve", str(bad), "--density-gate", "-1"]) == EXIT_INPUT
    assert main([]) == EXIT_INPUT


def test_components_tsv(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("1 2\n3 4\n4 5\n")
    assert main(["components", str(p), "--nodes", "6", "--all"]) == EXIT_OK
    rows = list(csv.reader(capsys.readouterr().out.splitlines(), delimiter="\t"))
    assert rows[0] == ["component_id", "n_i", "m_i", "density"]
    assert rows[1:] == [["0", "2", "1", "1.000000"], ["1", "3", "2", "0.666667"], ["2", "1", "0", "1.000000"]]


def test_export_mip_cli(karate_file, tmp_path):
    assert main(["export-mip", str(karate_file), "--out", str(tmp_path / "lp")]) == EXIT_OK
    text = (tmp_path / "lp" / "component_0.lp").read_text()
    assert text.count("assign_") == 34


def test_solve_export_lp_flag(karate_file, tmp_path):
    main(["solve", str(karate_file), "--out", str(tmp_path / "o"), "--export-lp", str(tmp_path / "lp")])
    assert (tmp_path / "lp" / "component_0.lp").exists()


def test_synth_and_eval_ji(tmp_path, capsys):
    assert main(["synth", "--scenario", "3", "--n", "600", "--k", "12", "--out", str(tmp_path)]) == EXIT_OK
    truth = tmp_path / "scenario03_seed000.truth.tsv"
    assert main(["eval-ji", str(truth), str(truth)]) == EXIT_OK
    assert "JI\t1.000000" in capsys.readouterr().out


def test_experiment_smoke(tmp_path, capsys):
    assert main(["experiment", "--seeds", "1", "--n", "400", "--k", "8", "--out", str(tmp_path)]) == EXIT_OK
    rows = list(csv.DictReader(open(tmp_path / "summary.csv")))
    assert len(rows) == 24
    assert {r["objective"] for r in rows} == {"s", "q"}
    inst = list(csv.DictReader(open(tmp_path / "instances.csv")))
    assert len(inst) == 24
    capsys.readouterr()
    assert main(["summarize", str(tmp_path / "instances.csv")]) == EXIT_INPUT  # one seed: no interval


def test_experiment_parallel_matches_serial():
    _, a = run_experiment(2, scenarios=[3, 12], n=400, k=8, jobs=1)
    _, b = run_experiment(2, scenarios=[3, 12], n=400, k=8, jobs=2)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "wall_time"} for r in rows]
    assert strip(a) == strip(b)


def test_run_sieve_parallel_components():
    g = SparseGraph.from_edges(12, [(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (6, 7), (7, 8), (8, 9), (9, 5), (10, 11)])
    a = run_sieve(g, jobs=1)
    b = run_sieve(g, jobs=2)
    assert a.labels == b.labels


def test_datasets(monkeypatch, tmp_path):
    assert {"karate", "lesmis", "football"} <= set(available())
    monkeypatch.delenv("SIEVE_DATA_DIR", raising=False)
    with pytest.raises(DatasetUnavailable):
        load_dataset("dolphins")
    (tmp_path / "dolphins.txt").write_text("1 2\n2 3\n")
    monkeypatch.setenv("SIEVE_DATA_DIR", str(tmp_path))
    assert load_dataset("dolphins").m == 2
    assert load_dataset("lesmis").weights is None
    assert load_dataset("lesmis", weighted=True).total_weight > 254
