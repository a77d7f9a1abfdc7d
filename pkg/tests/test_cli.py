import pytest

from mcmimo.cli import build_parser, build_request, main
from mcmimo.experiments import read_results


CONFIG_TEXT = (
    "L = 2\nK = 1\nM = 8\ntau = 4\n"
    "p_f_db = 20\np_r_db = 10\ngamma = 1\n"
    "a = 0.5\nb = 0\nseed = 3\ntrials = 300\n"
)


def test_experiment_runs_and_writes_csv(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code = main(["theorem1_verify", "--trials", "300", "--m-values", "2,4", "--out", str(out)])
    assert code == 0
    rows = read_results(out)
    assert {r.M for r in rows} == {2, 4}
    assert "wrote" in capsys.readouterr().out


def test_byte_identical_reruns(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["fig4_msweep", "--trials", "200", "--m-values", "2,4"]
    main(args + ["--out", str(p1)])
    main(args + ["--out", str(p2)])
    assert p1.read_bytes() == p2.read_bytes()


def test_config_file_feeds_request(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(CONFIG_TEXT)
    args = build_parser().parse_args(["theorem1_verify", "--config", str(cfg)])
    req = build_request(args)
    assert req.config.L == 2
    assert req.config.seed == 3
    assert req.trials == 300
    assert req.a == 0.5


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(CONFIG_TEXT)
    args = build_parser().parse_args(
        ["theorem1_verify", "--config", str(cfg), "--seed", "99", "--trials", "500"]
    )
    req = build_request(args)
    assert req.config.seed == 99
    assert req.trials == 500


def test_sweep_axis_parsing():
    args = build_parser().parse_args(["fig3_sweep", "--a-values", "0.2,0.4", "--b-values", "0.05"])
    req = build_request(args)
    assert req.a_values == [0.2, 0.4]
    assert req.b_values == [0.05]


def test_error_rows_reported_on_stderr(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code = main(["fig4_msweep", "--trials", "200", "--m-values", "1,2", "--out", str(out)])
    assert code == 0  # sweep survives the degenerate point
    captured = capsys.readouterr()
    assert "ERROR" in captured.err
    rows = read_results(out)
    assert any(r.error for r in rows)
    assert any(r.error is None for r in rows)
