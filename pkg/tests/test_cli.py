"""Command-line behavior: parsing, output formats, exit codes."""
import argparse
import json
import math

import numpy as np
import pytest

from qcorr.cli import main, parse_angle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_parse_angle_tokens():
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("pi/8") == pytest.approx(math.pi / 8)
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("0.5*pi") == pytest.approx(math.pi / 2)
    assert parse_angle("1.25") == 1.25
    with pytest.raises(argparse.ArgumentTypeError):
        parse_angle("two")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_angle("pi/0")


def test_state_json_payload(capsys):
    code, out = run(capsys, "state", "--theta", "pi/4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["eta"] == pytest.approx(0.125)
    assert payload["xi"] == pytest.approx(0.375)
    assert payload["q"] == pytest.approx(0.5)
    m = payload["measures"]
    assert m["concurrence"]["closed"] == pytest.approx(0.5)
    assert m["concurrence"]["oracle"] == pytest.approx(0.5, abs=1e-9)
    assert m["quantum_discord"]["closed"] == pytest.approx(0.18872187554086717)
    # serialized matrix round-trips to the family member
    re = np.array(payload["state"]["re"]).reshape(4, 4)
    assert re[0, 0] == pytest.approx(0.125)
    assert re[1, 2] == pytest.approx(-0.375)


def test_state_degrees_flag(capsys):
    code, out = run(capsys, "state", "--theta", "45", "--degrees", "--json")
    assert code == 0
    assert json.loads(out)["theta"] == pytest.approx(math.pi / 4)


def test_state_text_output(capsys):
    code, out = run(capsys, "state", "--theta", "pi/3", "--measures", "concurrence")
    assert code == 0
    assert "eta = 0.1875" in out
    assert "concurrence" in out


def test_evolve_rk4_agrees_with_kraus(capsys):
    base = ["evolve", "--theta", "pi/5", "--axis", "x", "--time", "1.2", "--json",
            "--measures", "concurrence"]
    _, out_k = run(capsys, *base)
    _, out_r = run(capsys, *base, "--method", "rk4", "--steps", "800")
    mk = json.loads(out_k)["state"]["re"]
    mr = json.loads(out_r)["state"]["re"]
    assert np.abs(np.array(mk) - np.array(mr)).max() < 1e-8


def test_evolve_reports_gamma_t(capsys):
    code, out = run(capsys, "evolve", "--theta", "pi/4", "--axis", "z", "--time", "0.5",
                    "--gamma", "2", "--json", "--measures", "concurrence")
    assert code == 0
    payload = json.loads(out)
    assert payload["gamma_t"] == pytest.approx(1.0)
    assert payload["measures"]["concurrence"]["closed"] == pytest.approx(
        payload["measures"]["concurrence"]["oracle"], abs=1e-9
    )


def test_evolve_check_footer(capsys):
    code, out = run(capsys, "evolve", "--theta", "pi/4", "--channel", "z", "--t", "0.5",
                    "--method", "rk4", "--steps", "600", "--check",
                    "--measures", "concurrence")
    assert code == 0
    footer = out.strip().splitlines()[-1]
    assert footer.startswith("check: max deviation vs analytic")
    assert footer.endswith("-> ok")
    code, out = run(capsys, "evolve", "--theta", "pi/4", "--axis", "z", "--time", "0.5",
                    "--method", "analytic", "--check", "--json",
                    "--measures", "concurrence")
    assert code == 0
    check = json.loads(out)["check"]
    assert check["reference"] == "kraus" and check["passed"]
    assert check["max_deviation"] <= 1e-14


def test_sweep_csv_format(capsys):
    code, out = run(capsys, "sweep", "--thetas", "pi/8,pi/4", "--times", "0:1:0.5",
                    "--axes", "x", "--measures", "concurrence")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "channel,measure,theta,gamma_t,value_closed,value_oracle"
    assert len(lines) == 1 + 2 * 3  # two thetas, three times from the range
    # oracle column stays empty without --oracle
    assert lines[1].endswith(",")
    assert lines[1].startswith("x,concurrence,")


def test_sweep_tmax_tsteps_grid(capsys):
    code, out = run(capsys, "sweep", "--thetas", "pi/8,pi/4,3pi/8", "--channel", "y",
                    "--measures", "concurrence", "--tmax", "3", "--tsteps", "61")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 3 * 61
    # y noise never kills the entanglement on this family
    values = [float(line.split(",")[4]) for line in lines[1:]]
    assert min(values) > 0.0


def test_sweep_time_flags_are_exclusive():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--thetas", "pi/4", "--times", "0,1", "--tmax", "2", "--tsteps", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--thetas", "pi/4"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--thetas", "pi/4", "--tsteps", "5"])
    assert exc.value.code == 2


def test_sweep_oracle_column_filled(capsys):
    code, out = run(capsys, "sweep", "--thetas", "pi/4", "--times", "0.5",
                    "--axes", "z", "--measures", "concurrence", "--oracle")
    lines = out.strip().splitlines()
    closed, oracle = lines[1].split(",")[4:6]
    assert abs(float(closed) - float(oracle)) < 1e-9


def test_sweep_out_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, _ = run(capsys, "sweep", "--thetas", "pi/4", "--times", "0,1",
                  "--axes", "y", "--measures", "geometric_discord", "--out", str(target))
    assert code == 0
    lines = target.read_text().strip().splitlines()
    assert lines[0].startswith("channel,measure")
    assert len(lines) == 3


def test_sweep_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("QCORR_THREADS", "3")
    code, out = run(capsys, "sweep", "--thetas", "pi/4", "--times", "0,0.5",
                    "--axes", "x", "--measures", "concurrence")
    assert code == 0
    assert len(out.strip().splitlines()) == 3


def test_deathtime_json(capsys):
    code, out = run(capsys, "deathtime", "--theta", "pi/4", "--axis", "z", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "esd"
    # ln sqrt(3): the closed-form death time at this angle
    assert payload["time"] == pytest.approx(0.5493061443340549, rel=1e-6)
    assert payload["closed_form_time"] == pytest.approx(0.5493061443340549, rel=1e-12)


def test_deathtime_half_life_text(capsys):
    code, out = run(capsys, "deathtime", "--theta", "pi/4", "--axis", "y",
                    "--measure", "geometric_discord")
    assert code == 0
    assert "half_life" in out


def test_verify_quick_json(capsys):
    code, out = run(capsys, "verify", "--quick", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    statuses = {c["status"] for c in payload["checks"]}
    assert statuses <= {"pass", "expected_fail"}


def test_verify_quick_text_lines(capsys):
    code, out = run(capsys, "verify", "--quick")
    assert code == 0
    assert "[PASS]" in out and "[XFAIL]" in out


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["state", "--theta", "nonsense"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["sweep", "--thetas", "pi/4", "--times", "0,1", "--measures", "bogus"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["state", "--theta", "pi/4", "--precision", "30"])
    assert err.value.code == 2
    capsys.readouterr()


def test_computation_errors_exit_3(capsys):
    code = main(["evolve", "--theta", "pi/4", "--axis", "z", "--time", "-2"])
    assert code == 3
    capsys.readouterr()


def test_help_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as err:
        main(["--help"])
    assert err.value.code == 0
    capsys.readouterr()
