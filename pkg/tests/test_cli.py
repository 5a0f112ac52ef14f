import json

import pytest

from quditid import cli
from quditid.detection import povm_from_dict


def run_cli(capsys, *argv):
    rc = cli.main(list(argv))
    return rc, capsys.readouterr().out


def test_verify_d3(capsys):
    rc, out = run_cli(capsys, "verify", "--d", "3")
    assert rc == 0
    report = json.loads(out)
    assert report["ok"] is True
    assert report["failed_checks"] == []
    assert abs(report["p_succ"] - 1.0 / 36.0) <= 1e-12
    assert abs(report["p_succ"] - report["p_succ_closed_form"]) <= 1e-12


def test_verify_writes_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    rc, out = run_cli(capsys, "verify", "--d", "2", "--out", str(path))
    assert rc == 0
    assert out == ""
    report = json.loads(path.read_text())
    assert report["d"] == 2
    assert report["ok"] is True


def test_verify_exit_code_2_on_failure(capsys, monkeypatch):
    fake = {"ok": False, "failed_checks": ["povm_completeness"], "d": 2}
    monkeypatch.setattr(cli, "verify_report", lambda d: fake)
    rc, out = run_cli(capsys, "verify", "--d", "2")
    assert rc == 2
    assert json.loads(out)["failed_checks"] == ["povm_completeness"]


def test_build_round_trips(capsys):
    rc, out = run_cli(capsys, "build", "--d", "2")
    assert rc == 0
    obj = json.loads(out)
    assert obj["d"] == 2
    assert obj["scale"] == pytest.approx(2.0 / 3.0, abs=1e-16)
    assert [e["n"] for e in obj["elements"]] == [1, 2]
    assert all(len(e["vectors"]) == 2 for e in obj["elements"])
    povm = povm_from_dict(obj)
    assert povm.d == 2


def test_simulate_json_summary(capsys):
    rc, out = run_cli(capsys, "simulate", "--d", "2", "--trials", "2000", "--seed", "11")
    assert rc == 0
    summary = json.loads(out)
    assert summary["trials"] == 2000
    assert summary["seed"] == 11
    assert summary["error_rate"] == 0.0
    assert summary["error_count"] == 0
    counts = (
        summary["success_count"]
        + summary["error_count"]
        + summary["inconclusive_count"]
    )
    assert counts == 2000
    assert 0.0 < summary["success_rate"] < 1.0


def test_simulate_csv(capsys):
    rc, out = run_cli(
        capsys, "simulate", "--d", "2", "--trials", "50", "--seed", "0",
        "--format", "csv",
    )
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "trial,truth,outcome,p_success,p_inconclusive"
    assert len(lines) == 51
    first = lines[1].split(",")
    assert first[0] == "0"
    assert first[1] in {"1", "2"}
    assert first[2] in {"0", "1", "2"}
    total = float(first[3]) + float(first[4])
    assert total <= 1.0 + 1e-10
    # trial indices are sequential
    assert [row.split(",")[0] for row in lines[1:]] == [str(i) for i in range(50)]


def test_simulate_threads_hint_does_not_change_output(capsys, monkeypatch):
    monkeypatch.delenv("QID_THREADS", raising=False)
    rc1, out1 = run_cli(capsys, "simulate", "--d", "2", "--trials", "9000", "--seed", "4")
    monkeypatch.setenv("QID_THREADS", "4")
    rc2, out2 = run_cli(capsys, "simulate", "--d", "2", "--trials", "9000", "--seed", "4")
    assert rc1 == rc2 == 0
    a = json.loads(out1)
    b = json.loads(out2)
    a.pop("wall_time_s")
    b.pop("wall_time_s")
    assert a == b


def test_simulate_bad_threads_hint_is_ignored(capsys, monkeypatch):
    monkeypatch.setenv("QID_THREADS", "not-a-number")
    rc, out = run_cli(capsys, "simulate", "--d", "2", "--trials", "100", "--seed", "0")
    assert rc == 0
    assert json.loads(out)["trials"] == 100


def test_optimize_eigen(capsys):
    rc, out = run_cli(capsys, "optimize", "--d", "2")
    assert rc == 0
    payload = json.loads(out)
    assert payload["mode"] == "eigen"
    assert abs(payload["alpha_opt"] - 2.0 / 3.0) <= 1e-12
    assert abs(payload["S_opt"] - 4.0 / 3.0) <= 1e-12
    assert len(payload["spectrum"]) == 2
    assert abs(payload["spectrum"][0] - 0.5) <= 1e-12
    assert abs(payload["spectrum"][1] - 1.5) <= 1e-12


def test_optimize_grid(capsys):
    rc, out = run_cli(
        capsys, "optimize", "--d", "3", "--mode", "grid", "--resolution", "0.05"
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["mode"] == "grid"
    assert payload["resolution"] == 0.05
    assert len(payload["alpha_opt"]) == 3
    assert 9.0 / 4.0 - 0.15 <= payload["S_opt"] <= 9.0 / 4.0 + 1e-9


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["build"],
        ["build", "--d", "9"],
        ["verify", "--d", "5"],
        ["simulate", "--d", "2", "--trials", "0"],
        ["simulate", "--d", "2", "--seed", "-1"],
        ["optimize", "--d", "4", "--mode", "grid"],
        ["optimize", "--d", "2", "--resolution", "0.5"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    assert cli.main(argv) == 1
    capsys.readouterr()


def test_help_exits_0(capsys):
    assert cli.main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "build" in out and "simulate" in out
