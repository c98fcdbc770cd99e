import csv
import io
import json
from pathlib import Path

import pytest

from decset.cli import main

DATA = Path(__file__).parent / "data" / "date.csv"


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def model_path(tmp_path, capsys):
    path = tmp_path / "model.json"
    code, out, _ = _run(capsys, "learn", DATA, "-o", path, "--objective", "literals")
    assert code == 0
    return path


def test_learn_writes_model_text_and_stats(model_path, capsys):
    d = json.loads(model_path.read_text())
    assert d["stats"]["literal_count"] == 4
    assert d["stats"]["rule_count"] == 3
    assert model_path.with_suffix(".txt").read_text().count("IF ") == 3


def test_learn_stats_block(tmp_path, capsys):
    code, out, _ = _run(capsys, "learn", DATA, "-o", tmp_path / "m.json")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["class"] for r in rows] == ["No", "Yes"]
    assert [int(r["cover_cost"]) for r in rows] == [2, 1]
    assert sum(int(r["rules"]) for r in rows) == 3


def test_learn_to_stdout(capsys):
    code, out, err = _run(capsys, "learn", DATA, "--objective", "r")
    assert code == 0
    assert json.loads(out)["stats"]["rule_count"] == 3
    assert err.startswith("class,")


def test_symmetry_breaking_does_not_change_costs(tmp_path, capsys):
    for obj in ("rules", "literals"):
        _run(capsys, "learn", DATA, "-o", tmp_path / "a.json", "--objective", obj)
        _run(capsys, "learn", DATA, "-o", tmp_path / "b.json", "--objective", obj, "--no-symmetry-breaking")
        a = json.loads((tmp_path / "a.json").read_text())["stats"]
        b = json.loads((tmp_path / "b.json").read_text())["stats"]
        assert [c["cover_cost"] for c in a["per_class"].values()] == [c["cover_cost"] for c in b["per_class"].values()]


def test_predict_training_file(model_path, capsys):
    code, out, _ = _run(capsys, "predict", model_path, DATA)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    assert all(r["prediction"] == r["label"] and r["status"] == "class" for r in rows)


def test_explain(model_path, capsys):
    code, out, _ = _run(capsys, "explain", model_path, DATA)
    assert code == 0
    assert len(out.splitlines()) == 4
    assert all(" THEN Date=" in l for l in out.splitlines())


def test_enumerate_class(capsys):
    code, out, _ = _run(capsys, "enumerate", DATA, "--class", "Yes", "--no-symmetry-breaking")
    terms = json.loads(out)
    assert code == 0 and len(terms) == 4
    assert all(t["size"] == 2 for t in terms)
    code, out, _ = _run(capsys, "enumerate", DATA, "--class", "Yes")
    assert len(json.loads(out)) == 1


def test_stats(model_path, capsys):
    code, out, _ = _run(capsys, "stats", model_path, DATA)
    got = dict(csv.reader(io.StringIO(out)))
    assert got["rule_count"] == "3" and got["literal_count"] == "4" and got["total_size"] == "7"
    assert float(got["train_accuracy"]) == 1.0


def test_report_dir(tmp_path, capsys):
    out = tmp_path / "rep"
    code, _, _ = _run(capsys, "learn", DATA, "-o", tmp_path / "m.json", "--report-dir", out)
    assert code == 0
    for name in ("stats.csv", "term_sizes.png", "phase_times.png"):
        assert (out / name).stat().st_size > 0
    assert (out / "term_sizes.png").read_bytes()[:4] == b"\x89PNG"


def test_seed_env_and_determinism(tmp_path, capsys, monkeypatch):
    _run(capsys, "learn", DATA, "-o", tmp_path / "a.json", "--seed", "3")
    monkeypatch.setenv("DECSET_SEED", "3")
    _run(capsys, "learn", DATA, "-o", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    monkeypatch.setenv("DECSET_SEED", "x")
    code, _, err = _run(capsys, "learn", DATA)
    assert code == 1 and "DECSET_SEED" in err


def test_errors(model_path, tmp_path, capsys):
    code, _, err = _run(capsys, "learn", tmp_path / "missing.csv")
    assert code == 1 and "cannot read" in err
    other = tmp_path / "other.csv"
    other.write_text("a,b,y\n0,1,p\n1,0,q\n")
    code, _, err = _run(capsys, "predict", model_path, other)
    assert code == 1 and "columns" in err
    code, _, err = _run(capsys, "enumerate", DATA, "--class", "Maybe")
    assert code == 1 and "Maybe" in err


def test_timeout_exit_code(tmp_path, capsys):
    import random
    rng = random.Random(1)
    lines = [",".join(f"x{r}" for r in range(14)) + ",y"]
    for _ in range(120):
        lines.append(",".join(str(rng.randint(0, 1)) for _ in range(14)) + f",{rng.randint(0, 1)}")
    path = tmp_path / "noise.csv"
    path.write_text("\n".join(lines) + "\n")
    code, _, err = _run(capsys, "learn", path, "--timeout-s", "0.2")
    assert code == 3 and "timeout" in err
