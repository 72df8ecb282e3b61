import json

import pytest

from icscr.cli import (
    ConfigError,
    SweepConfig,
    build_config,
    cmd_regions,
    load_config_file,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_regions_single_point(capsys):
    code, out, _ = run(capsys, "regions", "--alpha-max", "0", "--beta-max", "0")
    assert code == 0
    assert out == "alpha,beta,region,d\n0,0,2,1\n"


def test_regions_region1_block(capsys):
    code, out, _ = run(capsys, "regions", "--alpha-min", "2", "--alpha-max", "3",
                       "--beta-max", "1", "--alpha-step", "0.25", "--beta-step", "0.25")
    rows = out.splitlines()[1:]
    assert len(rows) == 5 * 5
    assert all(r.split(",")[2:] == ["1", "1"] for r in rows)


def test_regions_full_grid_all_labels(tmp_path):
    out = tmp_path / "r.csv"
    cmd_regions(SweepConfig(out=str(out)))
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,beta,region,d"
    assert len(lines) == 1 + 301 * 301
    assert {line.split(",")[2] for line in lines[1:]} == {str(k) for k in range(1, 10)}
    # Row-major: alpha outer, beta inner.
    assert lines[1].startswith("0,0,") and lines[2].startswith("0,0.01,")


def test_regions_json_and_threads(capsys):
    _, one, _ = run(capsys, "regions", "--alpha-step", "0.5", "--beta-step", "0.5")
    _, four, _ = run(capsys, "regions", "--alpha-step", "0.5", "--beta-step", "0.5", "--threads", "4")
    assert one == four
    _, js, _ = run(capsys, "regions", "--alpha-step", "1", "--beta-step", "1", "--format", "json")
    rows = json.loads(js)
    assert rows[0] == {"alpha": 0.0, "beta": 0.0, "region": 2, "d": 1.0}


def test_curve(capsys):
    code, out, _ = run(capsys, "curve", "--alpha-step", "0.1", "--beta-list", "0.5")
    assert code == 0
    assert "0.8,0.5,0.7" in out.splitlines()
    _, out, _ = run(capsys, "curve", "--alpha-step", "0.25", "--beta-list", "0")
    d = [float(r.split(",")[2]) for r in out.splitlines()[1:]]
    assert d[:5] == pytest.approx([1, 0.75, 0.5, 0.625, 0.5])
    _, out, _ = run(capsys, "curve", "--alpha-step", "0.5")
    betas = {r.split(",")[1] for r in out.splitlines()[1:]}
    assert betas == {"0", "0.5", "1", "1.5", "2", "3"}


def test_rates(capsys):
    code, out, _ = run(capsys, "rates", "1", "1", "1", "1")
    rep = json.loads(out)
    assert code == 0
    mac = [s for s in rep["schemes"] if s["scheme"] == "MAC"][0]
    assert mac["sym_rate"] == pytest.approx(1.1610, abs=1e-4)
    assert rep["bounds"]["active"] == "single_user"

    _, out, _ = run(capsys, "rates", "2", "1", "0", "1")
    rep = json.loads(out)
    assert rep["bounds"]["z_bound"] is not None and rep["bounds"]["weak_interference"] is not None
    assert rep["margin"] >= 0

    _, out, _ = run(capsys, "rates", "0", "0", "0", "1")
    assert all(s["sym_rate"] == 0 for s in json.loads(out)["schemes"])


def test_rates_bad_channel(capsys):
    code, _, err = run(capsys, "rates", "-1", "1", "1")
    assert code == 2 and "h_d" in err


def test_slope(capsys):
    code, out, _ = run(capsys, "slope", "1.5", "0.25")
    rep = json.loads(out)
    assert code == 0 and rep["achieved_slope"] == pytest.approx(0.75, abs=0.05)
    code, _, _ = run(capsys, "slope", "0", "0", "--rho-list", "2,4,8,16", "--tol", "1e-3")
    assert code == 1


def test_verify_small_grid(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--alpha-step", "0.1", "--beta-step", "0.1", "--out", str(out))
    summary = json.loads(out.read_text())
    assert code == 0 and summary["failures"] == 0
    recs = summary["minmax_discrepancies"]["records"]
    assert [0.9, 0.0, 9, 0.55, 0.9] in [[round(v, 12) for v in r] for r in recs]


def test_verify_tight_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--alpha-step", "0.5", "--beta-step", "0.5", "--tol", "1e-6")
    assert code == 1
    assert json.loads(out)["checks"]["slope_sandwich"]["failures"] > 0


@pytest.mark.parametrize("argv", [
    ["verify", "--alpha-min", "2", "--alpha-max", "1"],
    ["regions", "--beta-step", "0"],
    ["regions", "--format", "xml"],
    ["regions", "--rho-list", "2,4"],
    ["regions", "--grid-step", "0.5"],
    ["regions", "--tol", "abc"],
    ["regions", "--config", "/nonexistent/file"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("# comment\nalpha-max = 0.5\nalpha_step=0.5\nbeta-max=0\n")
    _, out, _ = run(capsys, "regions", "--config", str(cfg))
    assert len(out.splitlines()) == 1 + 2
    _, out, _ = run(capsys, "regions", "--config", str(cfg), "--alpha-max", "1")
    assert len(out.splitlines()) == 1 + 3


def test_config_parsing(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("rho-list = 2^10, 2^20, 2**30, 1e12\n")
    config = build_config({}, load_config_file(cfg))
    assert config.rho_list == (1024.0, 2.0**20, 2.0**30, 1e12)
    cfg.write_text("bogus = 1\n")
    with pytest.raises(ConfigError):
        load_config_file(cfg)
    cfg.write_text("no equals sign\n")
    with pytest.raises(ConfigError):
        load_config_file(cfg)


def test_axis_rounding():
    cfg = SweepConfig(alpha_min=0, alpha_max=0.3, alpha_step=0.1)
    assert list(cfg.alpha_axis()) == [0.0, 0.1, 0.2, 0.3]
