import json

import numpy as np
import pytest

from catclust.cli import main
from catclust.dataset import load_labels


@pytest.fixture
def synth_csv(tmp_path):
    prefix = tmp_path / "syn"
    rc = main(["synth", "--n", "300", "--d", "6", "--k", "3",
               "--seed", "0", "--output", str(prefix)])
    assert rc == 0
    return str(prefix) + ".csv", str(prefix) + ".labels"


def run_cluster(tmp_path, csv_path, *extra):
    tmp_path.mkdir(parents=True, exist_ok=True)
    report = tmp_path / "report.json"
    labels = tmp_path / "labels.txt"
    rc = main(["cluster", "--input", csv_path, "--output", str(report),
               "--labels-out", str(labels), *extra])
    return rc, report, labels


def test_synth_writes_both_files_deterministically(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for prefix in (a, b):
        assert main(["synth", "--n", "100", "--d", "4", "--k", "2",
                     "--seed", "5", "--output", str(prefix)]) == 0
    assert (a.with_suffix(".csv").read_bytes()
            == b.with_suffix(".csv").read_bytes())
    assert (a.with_suffix(".labels").read_bytes()
            == b.with_suffix(".labels").read_bytes())
    assert len(load_labels(a.with_suffix(".labels"))) == 100


def test_cluster_report_schema_and_labels(tmp_path, synth_csv):
    csv_path, _ = synth_csv
    rc, report, labels = run_cluster(tmp_path, csv_path, "--k0", "15")
    assert rc == 0
    doc = json.loads(report.read_text())
    assert doc["schema"] == "mcdc-report/1"
    assert doc["n"] == 300 and doc["d"] == 6
    assert doc["config"]["variant"] == "full"
    assert len(doc["kappa"]) == doc["sigma"] >= 1
    assert all(b < a for a, b in zip(doc["kappa"], doc["kappa"][1:]))
    assert doc["theta"] is not None
    assert "learn_s" in doc["timings"]
    pred = load_labels(labels)
    assert len(pred) == 300


def test_cluster_deterministic_label_files(tmp_path, synth_csv):
    csv_path, _ = synth_csv
    _, r1, l1 = run_cluster(tmp_path / "x1", csv_path, "--k0", "15")
    _, r2, l2 = run_cluster(tmp_path / "x2", csv_path, "--k0", "15")
    assert l1.read_bytes() == l2.read_bytes()
    a = json.loads(r1.read_text())
    b = json.loads(r2.read_text())
    a.pop("timings"); b.pop("timings")
    for doc in (a, b):
        doc["config"].pop("input")
    assert a == b


def test_cluster_with_label_column_reports_indices(tmp_path):
    # build a labeled CSV by joining synth output
    prefix = tmp_path / "syn"
    main(["synth", "--n", "300", "--d", "6", "--k", "3",
          "--seed", "1", "--output", str(prefix)])
    rows = (prefix.with_suffix(".csv")).read_text().splitlines()
    labels = (prefix.with_suffix(".labels")).read_text().splitlines()
    joined = tmp_path / "labeled.csv"
    out = [rows[0] + ",class"]
    out += [f"{r},{y}" for r, y in zip(rows[1:], labels)]
    joined.write_text("\n".join(out) + "\n")

    rc, report, _ = run_cluster(tmp_path, str(joined),
                                "--label-column", "class", "--k0", "15",
                                "--repeats", "3")
    assert rc == 0
    doc = json.loads(report.read_text())
    for name in ("acc", "ari", "ami", "fm"):
        block = doc["indices"][name]
        assert len(block["runs"]) == 3
        assert block["mean"] == pytest.approx(float(np.mean(block["runs"])))
        assert 0.0 <= block["mean"] <= 1.0 or name in ("ari", "ami")


def test_all_variants_run(tmp_path, synth_csv):
    csv_path, _ = synth_csv
    for variant in ("full", "mcdc1", "mcdc2", "mcdc3", "mcdc4", "kmodes"):
        args = ["--variant", variant, "--k0", "15"]
        if variant in ("mcdc1", "mcdc2", "kmodes"):
            args += ["--k", "3"]
        rc, report, labels = run_cluster(tmp_path / variant, csv_path, *args)
        assert rc == 0, variant
        assert len(load_labels(labels)) == 300


def test_variant_requires_k(tmp_path, synth_csv, capsys):
    csv_path, _ = synth_csv
    for variant in ("mcdc1", "mcdc2", "kmodes"):
        rc, _, _ = run_cluster(tmp_path / variant, csv_path,
                               "--variant", variant)
        assert rc == 2
        assert "--k is required" in capsys.readouterr().err


def test_missing_input_is_error(tmp_path, capsys):
    rc, _, _ = run_cluster(tmp_path, str(tmp_path / "nope.csv"))
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_emit_gamma(tmp_path, synth_csv):
    csv_path, _ = synth_csv
    gamma = tmp_path / "gamma.csv"
    rc = main(["cluster", "--input", csv_path, "--k0", "15",
               "--output", str(tmp_path / "r.json"),
               "--labels-out", str(tmp_path / "l.txt"),
               "--emit-gamma", str(gamma)])
    assert rc == 0
    mat = np.loadtxt(gamma, delimiter=",", dtype=np.int64, ndmin=2)
    assert mat.shape[0] == 300


def test_eval_subcommand(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("0\n0\n1\n1\n")
    b.write_text("1\n1\n0\n0\n")
    assert main(["eval", str(a), str(b)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["acc"] == 1.0 and doc["ari"] == 1.0

    b.write_text("0\n1\n")
    assert main(["eval", str(a), str(b)]) == 2
    assert "differ in length" in capsys.readouterr().err


def test_bench_axes_emit_csv(tmp_path):
    for axis, grid in (("n", "400,800"), ("d", "4,8"), ("k", "2,4")):
        out = tmp_path / f"bench_{axis}.csv"
        rc = main(["bench", "--axis", axis, "--grid", grid,
                   "--repeats", "1", "--n", "400", "--d", "4",
                   "--k-true", "2", "--m", "4", "--k", "2",
                   "--output", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "point,mean_time,std"
        assert len(lines) == 3
        for line, point in zip(lines[1:], grid.split(",")):
            cells = line.split(",")
            assert cells[0] == point
            assert float(cells[1]) >= 0.0


def test_bench_rejects_non_increasing_grid(capsys):
    assert main(["bench", "--axis", "n", "--grid", "500,400"]) == 2
    assert "strictly increasing" in capsys.readouterr().err


def test_backend_flag_gives_identical_labels(tmp_path, synth_csv):
    pytest.importorskip("catclust._kernel")
    csv_path, _ = synth_csv
    _, _, l1 = run_cluster(tmp_path / "c", csv_path, "--k0", "15",
                           "--backend", "compiled")
    _, _, l2 = run_cluster(tmp_path / "p", csv_path, "--k0", "15",
                           "--backend", "python")
    assert l1.read_bytes() == l2.read_bytes()


def test_missing_cells_clustered_by_default(tmp_path):
    csv = tmp_path / "m.csv"
    rows = ["a,b,c"]
    rng = np.random.default_rng(0)
    for i in range(60):
        vals = [str(rng.integers(0, 3)) for _ in range(3)]
        if i % 10 == 0:
            vals[0] = "?"
        rows.append(",".join(vals))
    csv.write_text("\n".join(rows) + "\n")
    rc, report, labels = run_cluster(tmp_path, str(csv), "--k0", "6")
    assert rc == 0
    assert len(load_labels(labels)) == 60

    rc, report, labels = run_cluster(tmp_path / "dropped", str(csv),
                                     "--k0", "6", "--drop-missing")
    assert rc == 0
    assert len(load_labels(labels)) == 54
