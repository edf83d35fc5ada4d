import csv
import json

import pytest

from progres.cli import main, parse_budget, ConfigError

# six entities whose pairwise-shared tokens make six singleton-pair blocks;
# uniform cardinality means purging keeps everything and every entity
# survives filtering, so the common-blocks scheme yields six weight-1 edges
FIXTURE_A = "id,text\na0,t00 t01\na1,t11 t12\na2,t22 t20\n"
FIXTURE_B = "id,text\nb0,t00 t20\nb1,t01 t11\nb2,t12 t22\n"
FIXTURE_GT = "a0,b0\na1,b1\na2,b2\n"


@pytest.fixture
def fixture_dir(tmp_path):
    (tmp_path / "a.csv").write_text(FIXTURE_A, encoding="utf-8")
    (tmp_path / "b.csv").write_text(FIXTURE_B, encoding="utf-8")
    (tmp_path / "gt.csv").write_text(FIXTURE_GT, encoding="utf-8")
    return tmp_path


def write_config(tmp_path, **extra):
    cfg = {
        "dataset": {
            "path_a": str(tmp_path / "a.csv"),
            "path_b": str(tmp_path / "b.csv"),
            "gt_path": str(tmp_path / "gt.csv"),
        },
        "family": "blocking",
        "params": {"scheme": "cb"},
        "scheduler": "ec",
        "budget": 5,
        "out": str(tmp_path / "out"),
    }
    cfg.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_run_writes_five_row_pairs_file(fixture_dir):
    cfg = write_config(fixture_dir)
    assert main(["run", "--config", str(cfg)]) == 0
    rows = read_rows(fixture_dir / "out" / "pairs.csv")
    assert rows[0] == ["rank", "left", "right", "weight"]
    assert len(rows) == 6  # header + budget of 5
    # all six edges weigh 1.0, so the id tie-break decides the prefix
    assert [(r[1], r[2]) for r in rows[1:]] == [
        ("0", "0"), ("0", "1"), ("1", "1"), ("1", "2"), ("2", "0")
    ]
    metrics = json.loads((fixture_dir / "out" / "metrics.json").read_text())
    assert metrics["budget"] == 5
    assert metrics["verified"] == 5
    curve = read_rows(fixture_dir / "out" / "curve.csv")
    assert len(curve) == 6  # header + one row per budget slot


def test_run_rejects_window_below_two(fixture_dir):
    cfg = write_config(fixture_dir, family="sorting",
                       params={"window": 1, "scheme": "acf", "scope": "local"})
    assert main(["run", "--config", str(cfg)]) == 2


def test_run_missing_input_file_exit_one(fixture_dir):
    cfg = write_config(fixture_dir)
    (fixture_dir / "b.csv").unlink()
    assert main(["run", "--config", str(cfg)]) == 1


def test_run_budget_expression_recorded(fixture_dir):
    cfg = write_config(fixture_dir, budget="3xdup")  # |Dup| = 3
    assert main(["run", "--config", str(cfg)]) == 0
    metrics = json.loads((fixture_dir / "out" / "metrics.json").read_text())
    assert metrics["budget"] == 9


def test_budget_expression_parsing():
    assert parse_budget("3xdup", 10) == 30
    assert parse_budget("2 X dup", 7) == 14
    assert parse_budget(25, 10) == 25
    assert parse_budget("25", 10) == 25
    with pytest.raises(ConfigError):
        parse_budget("dupx3", 10)
    with pytest.raises(ConfigError):
        parse_budget(0, 10)


def test_flag_overrides_config(fixture_dir):
    cfg = write_config(fixture_dir, scheduler="ec")
    out2 = fixture_dir / "out2"
    assert main(["run", "--config", str(cfg), "--scheduler", "bfs",
                 "--out", str(out2), "--budget", "2"]) == 0
    metrics = json.loads((out2 / "metrics.json").read_text())
    assert metrics["scheduler"] == "bfs"
    assert metrics["budget"] == 2


def test_unknown_scheduler_exit_two(fixture_dir):
    cfg = write_config(fixture_dir, scheduler="magic")
    assert main(["run", "--config", str(cfg)]) == 2


def test_unknown_param_key_exit_two(fixture_dir):
    cfg = write_config(fixture_dir, params={"scheme": "cb", "surprise": 1})
    assert main(["run", "--config", str(cfg)]) == 2


def test_grid_row_count_and_partial_columns(fixture_dir):
    cfg = write_config(fixture_dir, budgets=[2, 5])
    assert main(["grid", "--config", str(cfg)]) == 0
    rows = read_rows(fixture_dir / "out" / "grid.csv")
    assert rows[0] == ["family", "config", "scheduler", "budget",
                       "progressive_recall", "recall_at_budget", "verified"]
    assert len(rows) - 1 == 14 * 4 * 2  # schemes x schedulers x budgets
    perf = read_rows(fixture_dir / "out" / "grid_perf.csv")
    assert len(perf) == len(rows)
    best = json.loads((fixture_dir / "out" / "grid_best.json").read_text())
    assert set(best["blocking"]) == {"ec", "dfs", "bfs", "hybrid"}


def test_eval_recomputes_metrics(fixture_dir, capsys):
    cfg = write_config(fixture_dir)
    assert main(["run", "--config", str(cfg)]) == 0
    assert main(["eval", "--config", str(cfg),
                 "--pairs", str(fixture_dir / "out" / "pairs.csv")]) == 0
    replayed = json.loads(capsys.readouterr().out)
    original = json.loads((fixture_dir / "out" / "metrics.json").read_text())
    assert replayed["progressive_recall"] == original["progressive_recall"]
    assert replayed["recall_at_budget"] == original["recall_at_budget"]


def test_run_artifacts_reproducible(fixture_dir):
    cfg = write_config(fixture_dir)
    assert main(["run", "--config", str(cfg)]) == 0
    first_pairs = (fixture_dir / "out" / "pairs.csv").read_bytes()
    first_curve = (fixture_dir / "out" / "curve.csv").read_bytes()
    assert main(["run", "--config", str(cfg)]) == 0
    assert (fixture_dir / "out" / "pairs.csv").read_bytes() == first_pairs
    assert (fixture_dir / "out" / "curve.csv").read_bytes() == first_curve
