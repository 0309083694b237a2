import json

import pytest

from freezethaw import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["simulate", "--n", "25", "--tau-max", "40", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_simulate_csv_layout(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "3", "--tau-max", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# freezethaw simulate"
    config = json.loads(lines[1].removeprefix("# config: "))
    assert config["n_sites_b"] == 3 and config["tau_max"] == 1.0
    header = [line for line in lines if not line.startswith("#")][0]
    assert header == ",".join(cli.SIM_COLUMNS)
    rows = [line for line in lines if not line.startswith("#")][1:]
    assert len(rows) == 21
    assert rows[0].split(",")[-1] == "1.0"


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "inf", "--tau-max", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["provenance"] == "infinite-n"
    assert data["config"]["n_sites_b"] == "inf"
    assert len(data["data"]["tau"]) == 41


@pytest.mark.parametrize(
    "argv",
    [
        ["--tau-step", "0"],
        ["--tau-step", "-0.1"],
        ["--tau-max", "0.01"],
        ["--n", "0"],
        ["--n", "abc"],
        ["--theta", "3"],
        ["--alpha-abs", "1.5"],
        ["--eta", "0"],
        ["--eps", "2"],
        ["--min-duration", "0.5"],
    ],
)
def test_invalid_config_writes_nothing(tmp_path, capsys, argv):
    out = tmp_path / "x.csv"
    code, _, err = run(capsys, "simulate", *argv, "--out", str(out))
    assert code != 0 and err
    assert not out.exists()


def test_unwritable_output(capsys):
    code, _, err = run(capsys, "simulate", "--n", "2", "--tau-max", "1", "--out", "/nonexistent/dir/x.csv")
    assert code == 3 and "cannot write" in err


def test_detect_finite(capsys):
    code, out, _ = run(capsys, "detect", "--n", "25", "--which", "both")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert set(data["reports"]) == {"K_A", "K_B"}
    assert 26 <= data["period_estimate"] <= 28
    assert data["config"]["tau_max"] == 108.0


def test_detect_physical_units(capsys):
    _, out, _ = run(capsys, "detect", "--n", "10", "--eta", "2")
    data = json.loads(out)
    assert data["predicted_physical_time"]["period"] == 6.0
    assert data["predicted"]["period"] == 12.0


def test_detect_short_grid_has_null_period(capsys):
    code, out, _ = run(capsys, "detect", "--n", "25", "--tau-max", "40")
    data = json.loads(out)
    assert code == 0 and data["period_estimate"] is None and "period_error" in data


def test_detect_infinite(capsys):
    _, out, _ = run(capsys, "detect", "--n", "inf", "--tau-max", "200")
    data = json.loads(out)
    assert data["period_estimate"] == "inf"
    assert data["reports"]["K_B"]["unbounded"] is True


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1", "--tau-max", "20")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert data["closed_form_dev"] <= 1e-10
    for key, tol in cli.VERIFY_TOLERANCES.items():
        assert data[key] is None or data[key] <= tol


def test_verify_detects_injected_fault(capsys):
    code, out, err = run(capsys, "verify", "--n", "5", "--tau-max", "10", "--inject-fault", "1e-5")
    assert code == 1 and "max_amp_dev_integrator" in err
    assert json.loads(out)["failed"] == ["max_amp_dev_integrator"]


def test_verify_hides_fault_flag(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "--help"])
    assert "inject" not in capsys.readouterr().out


@pytest.mark.parametrize("n", ["inf", "101"])
def test_verify_rejects_large_n(capsys, n):
    code, _, err = run(capsys, "verify", "--n", n)
    assert code == 2 and "verify" in err


def test_verify_is_seeded(capsys):
    _, a, _ = run(capsys, "verify", "--n", "2", "--tau-max", "5", "--seed", "3")
    _, b, _ = run(capsys, "verify", "--n", "2", "--tau-max", "5", "--seed", "3")
    assert a == b


def test_taylor_table(capsys):
    code, out, _ = run(capsys, "taylor", "--n", "2", "--m-max", "4")
    assert code == 0
    assert out.splitlines()[0] == "m\tfinite\tinfinite\tequal"
    assert out.splitlines()[4].endswith("false")


def test_taylor_short_scan_warns(capsys):
    code, _, err = run(capsys, "taylor", "--n", "10", "--m-max", "4")
    assert code == 0 and "warning" in err


def test_taylor_json(capsys):
    code, out, _ = run(capsys, "taylor", "--n", "3", "--m-max", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["pattern_holds"] is True
    assert data["rows"][1]["finite"] == "1/2"


def test_taylor_bounds(capsys):
    code, _, _ = run(capsys, "taylor", "--n", "inf", "--m-max", "4")
    assert code == 2


def test_scan_keeps_order(capsys):
    code, out, _ = run(capsys, "scan", "--n", "40,inf,25")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines() if not line.startswith("#")]
    assert rows[0] == list(cli.SCAN_COLUMNS)
    assert [r[0] for r in rows[1:]] == ["40", "inf", "25"]
    assert rows[2][3] == "inf" and rows[2][2] == ""
    assert 41 <= float(rows[1][3]) <= 43


def test_scan_empty_list(capsys):
    code, _, err = run(capsys, "scan", "--n", ",")
    assert code == 2 and err


def test_taylor_n5(capsys):
    code, out, _ = run(capsys, "taylor", "--n", "5", "--m-max", "8")
    flags = [line.split("\t")[3] for line in out.splitlines()[1:]]
    assert code == 0 and flags == ["true"] * 6 + ["false"] * 3


def test_taylor_n1_rows(capsys):
    code, out, _ = run(capsys, "taylor", "--n", "1", "--m-max", "2")
    rows = [line.split("\t")[1:3] for line in out.splitlines()[1:]]
    assert code == 0 and rows == [["1", "1"], ["1/2", "1/2"], ["1/24", "1/12"]]


def test_scan_n1_has_no_freeze(capsys):
    _, out, _ = run(capsys, "scan", "--n", "1")
    row = [line for line in out.splitlines() if not line.startswith("#")][1].split(",")
    assert row[0] == "1" and row[1] == "" and row[2] == ""
