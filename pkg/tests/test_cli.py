import csv
from collections import Counter

import pytest

from wsntrack import io
from wsntrack.cli import main, parse_values


def table(out):
    lines = [l.split() for l in out.strip().splitlines()]
    head = lines[0]
    return [dict(zip(head, l)) for l in lines[1:]]


def test_predict_worked_example(capsys):
    assert main(["predict", "-r", "3", "-m", "10", "-l", "60", "-f", "2"]) == 0
    rows = table(capsys.readouterr().out)
    assert {r["mode"] for r in rows} == {"literal", "simulated"}
    for r in rows:
        assert r["n1"] == "900" and r["n2"] == "300"


def test_predict_rounds_flag(capsys):
    assert main(["predict", "-r", "3", "-m", "10", "--lf", "20"]) == 0
    for r in table(capsys.readouterr().out):
        assert (r["n1"], r["n3"], r["n4"]) == ("600", "180", "40")


def test_predict_zero_targets(capsys):
    assert main(["predict", "-m", "0"]) == 0
    for r in table(capsys.readouterr().out):
        assert all(r[k] == "0" for k in ("n1", "n2", "n3", "n4", "E_cn", "E_dc", "E_imp"))


def test_predict_sweep_csv(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert main(["predict", "--sweep", "m=1:5", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10 and [r["m"] for r in rows[::2]] == ["1", "2", "3", "4", "5"]


@pytest.mark.parametrize("argv", [["predict", "-f", "0"], ["predict", "--capacity", "0"], ["predict", "--sweep", "q=1:2"]])
def test_predict_bad_parameters(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_run_writes_outputs(tmp_path, capsys):
    code = main(["run", "--strategy", "improved", "--seed", "7", "--duration", "20", "--out-dir", str(tmp_path), "--dump-groups"])
    assert code == 0
    out = capsys.readouterr().out
    assert "group messages" in out and "sink-bound delivered" in out
    (run_dir,) = tmp_path.iterdir()
    names = {p.name for p in run_dir.iterdir()}
    assert names == {"manifest.json", "metrics.csv", "localization.csv", "energy.csv", "groups.csv", "summary.txt"}
    assert len(io.read_metrics_csv(run_dir / "metrics.csv")) == 10


def test_missing_config_exit_2(tmp_path, capsys):
    missing = tmp_path / "absent.cfg"
    assert main(["run", "--config", str(missing), "--out-dir", str(tmp_path)]) == 2
    assert str(missing) in capsys.readouterr().err


def test_zero_duration_exit_2(tmp_path):
    assert main(["run", "--duration", "0", "--out-dir", str(tmp_path)]) == 2


def test_unreachable_sink_exit_3(tmp_path):
    cfg = tmp_path / "far.cfg"
    cfg.write_text("radio_range_m = 1\nsink_x_m = 37\nsink_y_m = 30\n")
    assert main(["run", "--config", str(cfg), "--duration", "4", "--out-dir", str(tmp_path)]) == 3


def test_compare_columns_and_ordering(tmp_path, capsys):
    assert main(["compare", "--duration", "40", "--out-dir", str(tmp_path)]) == 0
    assert "shared" in capsys.readouterr().out
    (run_dir,) = tmp_path.iterdir()
    rows = {r["strategy"]: r for r in io.read_compare_csv(run_dir / "compare.csv")}
    assert list(rows) == ["centralized", "decentralized", "improved"]
    assert rows["improved"]["sink_msgs"] == min(r["sink_msgs"] for r in rows.values())
    assert rows["improved"]["target_to_target_msgs"] == max(r["target_to_target_msgs"] for r in rows.values())
    assert {p.name for p in run_dir.iterdir()} >= {"compare.csv", "manifest.json", "improved"}


def test_sweep_rows(tmp_path, capsys):
    argv = ["sweep", "--variable", "targets", "--values", "2:10:2", "--replications", "3", "--duration", "6", "--out-dir", str(tmp_path)]
    assert main(argv) == 0
    (run_dir,) = tmp_path.iterdir()
    rows = io.read_sweep_csv(run_dir / "sweep.csv")
    per = Counter((r["strategy"], r["metric"]) for r in rows)
    assert set(per.values()) == {15}
    assert {r["level"] for r in rows} == {"2", "4", "6", "8", "10"}


def test_sweep_empty_grid_exit_2(tmp_path):
    assert main(["sweep", "--variable", "targets", "--values", "5:1", "--out-dir", str(tmp_path)]) == 2


def test_parse_values():
    assert parse_values("1,5,10") == [1, 5, 10]
    assert parse_values("1:3") == [1, 2, 3]
    assert parse_values("0:1:0.5") == [0, 0.5, 1]
    assert parse_values("5:1") == []
