import math
import os
import subprocess
import sys

import numpy as np
import pytest

from jcdiscrim import cli
from jcdiscrim.errors import ConfigError
from jcdiscrim.report import read_csv, rows_to_csv, write_csv
from jcdiscrim.sweeps import (CSV_COLUMNS, RunConfig, SweepRow, find_extrema, ordered_map, run,
                              worker_count)

SMALL_GT = ["--gt-range", "0,10,201"]


def test_find_extrema_monotone():
    assert find_extrema([0, 1, 2, 3], [1, 2, 3, 4]) == []
    with pytest.raises(ValueError):
        find_extrema([0, 1], [0, 1])


def test_find_extrema_recovers_parabola_vertex():
    xs = np.linspace(0, 3, 31)
    for vertex in (1.234, 1.777, 0.451):
        ys = 2.5 * (xs - vertex) ** 2 - 0.7
        found = find_extrema(xs, ys)
        assert len(found) == 1
        kind, x, y, _ = found[0]
        assert kind == "min" and abs(x - vertex) < 1e-3 and abs(y + 0.7) < 1e-9


def test_find_extrema_skips_endpoints_and_breaks_ties_low():
    assert find_extrema([0, 1, 2, 3], [5, 1, 2, 3])[0][3] == 1
    assert find_extrema([0, 1, 2], [3, 2, 1]) == []
    found = find_extrema([0, 1, 2, 3, 4], [0, 2, 2, 0, 1])
    assert [f[0] for f in found] == ["max", "min"]
    assert found[0][3] == 1


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("nonsense")
    with pytest.raises(ConfigError):
        RunConfig("purity", gt_range=(5, 1, 10))
    with pytest.raises(ConfigError):
        RunConfig("purity", alpha_sq_range=(1, 1, 10))
    with pytest.raises(ConfigError):
        RunConfig("purity", priors=(0.5, 0.6))
    with pytest.raises(ConfigError):
        RunConfig("purity", omega_over_g=(0.0,))


def test_worker_count(monkeypatch):
    monkeypatch.setenv("JCD_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("JCD_THREADS", "zero")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.delenv("JCD_THREADS")
    assert worker_count() >= 1
    assert ordered_map(lambda x: x * x, range(20), threads=4) == [x * x for x in range(20)]


def test_csv_round_trip(tmp_path):
    rows = [SweepRow(0.1 + 0.2, 1 / 3, 20.0, "off", math.pi, "q_one"),
            SweepRow(2.0, None, None, "na", 1e-300, "helstrom_bound"),
            SweepRow(1.0, None, 5.0, "off", float("nan"), "guard_error")]
    path = tmp_path / "rows.csv"
    write_csv(rows, path)
    back = read_csv(path)
    assert back[:2] == rows[:2]
    assert math.isnan(back[2].objective) and back[2].kind == "guard_error"
    assert path.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)


def test_csv_round_trip_of_a_sweep(tmp_path):
    res = run(RunConfig("kennedy-sweep", alpha_sq_range=(0.5, 2.0, 4), gt_range=(0, 10, 201)))
    path = tmp_path / "k.csv"
    write_csv(res.rows, path)
    assert read_csv(path) == res.rows
    assert rows_to_csv(read_csv(path)) == path.read_text()


def test_config_file_and_overrides(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# test config\nalpha_sq = 1.0\nrwa = off\nomega-over-g = 10, 20\n"
                    "gt_range = 0,10,101  # coarse\npriors = 0.6\n")
    args = cli.build_parser().parse_args(["purity", "--config", str(conf), "--rwa", "on"])
    cfg = cli.config_from_args(args)
    assert cfg.alpha_sq == 1.0 and cfg.rwa == "on" and cfg.omega_over_g == (10.0, 20.0)
    assert cfg.gt_range == (0.0, 10.0, 101) and cfg.priors == (0.6, 0.4)

    conf.write_text("colour = blue\n")
    assert cli.main(["purity", "--config", str(conf)]) == cli.EXIT_CONFIG


@pytest.mark.parametrize("argv", [
    ["purity", "--gt-range", "0,10"],
    ["purity", "--priors", "1.5"],
    ["purity", "--alpha-sq", "x"],
    ["bounds-table", "--alpha-sq", "0"],
    ["verify", "--gt-range", "0,10,400"],
    ["purity", "--config", "/nonexistent/file"],
])
def test_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == cli.EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_guard_failure_rows_and_exit_3(tmp_path, capsys):
    out = tmp_path / "g.csv"
    # omega/g = 1 cannot host the truncation needed for alpha_sq = 1
    code = cli.main(["ambiguous-sweep", "--alpha-sq", "1", "--rwa", "off", "--omega-over-g", "1",
                     "--out", str(out)] + SMALL_GT)
    assert code == cli.EXIT_GUARD
    rows = read_csv(out)
    assert [r.kind for r in rows] == ["guard_error"]

    # a mixed run reports the failing rows and carries on
    code = cli.main(["ambiguous-sweep", "--alpha-sq", "1", "--rwa", "off", "--omega-over-g", "1,20",
                     "--out", str(out)] + SMALL_GT)
    assert code == cli.EXIT_OK
    kinds = {r.kind for r in read_csv(out)}
    assert "guard_error" in kinds and "trace_distance" in kinds


def test_every_mode_runs(tmp_path):
    cases = {
        "ambiguous-sweep": ["--alpha-sq", "4"] + SMALL_GT,
        "kennedy-sweep": ["--alpha-sq-range", "0.5,3,4"] + SMALL_GT,
        "purity": SMALL_GT,
        "bounds-table": ["--alpha-sq-range", "0.1,3,5"],
        "calibrate": ["--omega-over-g", "10,20"] + SMALL_GT,
        "verify": ["--omega-over-g", "10,20", "--gt-range", "0,1,3"],
    }
    for mode, extra in cases.items():
        csv_path, svg_path = tmp_path / f"{mode}.csv", tmp_path / f"{mode}.svg"
        assert cli.main([mode, "--out", str(csv_path), "--plot", str(svg_path)] + extra) == 0, mode
        assert read_csv(csv_path)
        svg = svg_path.read_text()
        assert svg.lstrip().startswith("<?xml") and "<svg" in svg
        assert "xlink:href=\"http" not in svg and "<image" not in svg


def test_ambiguous_report_lists_reported_peak(capsys, tmp_path):
    assert cli.main(["ambiguous-sweep", "--alpha-sq", "4", "--rwa", "on",
                     "--out", str(tmp_path / "a.csv")]) == 0
    text = capsys.readouterr().out
    assert "max  state_trace_distance rwa=on: 0.9896 at alpha_sq=4.0000 gt=0.3960" in text


def test_bounds_table_rows_respect_chain():
    res = run(RunConfig("bounds-table", alpha_sq_range=(0.05, 5, 40)))
    by = {}
    for r in res.rows:
        by.setdefault(r.alpha_sq, {})[r.kind] = r.objective
    for vals in by.values():
        assert vals["two_level_bound"] >= vals["qutrit_bound"] - 1e-12
        assert vals["qutrit_bound"] >= vals["helstrom_bound"] - 1e-12
        assert vals["theorem1_gap"] >= -1e-12


def test_csv_to_stdout_without_out(capsys):
    assert cli.main(["bounds-table", "--alpha-sq-range", "0.5,1,2"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert "bounds-table" in captured.err


def test_plot_is_reproducible(tmp_path):
    paths = [tmp_path / "p1.svg", tmp_path / "p2.svg"]
    for p in paths:
        assert cli.main(["purity", "--plot", str(p), "--out", str(tmp_path / "x.csv")] + SMALL_GT) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point(tmp_path):
    out = tmp_path / "b.csv"
    proc = subprocess.run([sys.executable, "-m", "jcdiscrim", "bounds-table", "--alpha-sq-range",
                           "0.5,1,3", "--out", str(out)], capture_output=True, text=True,
                          env={**os.environ, "JCD_THREADS": "2"})
    assert proc.returncode == 0, proc.stderr
    assert len(read_csv(out)) == 12
