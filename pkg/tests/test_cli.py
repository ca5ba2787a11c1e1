import json

import pytest

from fpincidence import cli
from fpincidence.bounds import BoundId
from fpincidence.harness.report import parse_csv
from fpincidence.invariants import CheckResult


def _run(capsysbinary, argv):
    code = cli.main(argv)
    out, err = capsysbinary.readouterr()
    return code, out, err.decode()


def test_incidence_csv(capsysbinary):
    code, out, _ = _run(capsysbinary, ["incidence", "--prime", "31", "--points", "20,30", "--curves", "40",
                                       "--trials", "2", "--bounds", "conic-small", "--no-timing"])
    assert code == 0
    header, rows = parse_csv(out)
    assert len(rows) == 4 and "wall_time_s" not in header
    assert all(r["dyadic_identity"] == "true" for r in rows)
    again = _run(capsysbinary, ["incidence", "--prime", "31", "--points", "20,30", "--curves", "40",
                                "--trials", "2", "--bounds", "conic-small", "--no-timing"])[1]
    assert again == out


def test_config_file_with_flag_override(tmp_path, capsysbinary):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("prime = 31\nfamily = circles\ncurves = 30\npoints = 25\ntrials = 3\n")
    out_path = tmp_path / "out.json"
    code, out, _ = _run(capsysbinary, ["incidence", "--config", str(cfg), "--trials", "1", "--format", "json",
                                       "--out", str(out_path)])
    assert code == 0 and out == b""
    rows = json.loads(out_path.read_text())
    assert len(rows) == 1 and rows[0]["prime"] == 31 and rows[0]["curves"] == 30


def test_rich_command(capsysbinary):
    code, out, _ = _run(capsysbinary, ["rich", "--prime", "13", "--points", "80", "--curves", "50", "--k", "3",
                                       "--threads", "2"])
    assert code == 0
    assert parse_csv(out)[1][0]["k"] == "3"


def test_usage_errors_exit_1(capsysbinary):
    code, _, err = _run(capsysbinary, ["incidence", "--bounds", "nonsense"])
    assert code == 1 and "conic-small" in err
    assert _run(capsysbinary, ["incidence", "--prime", "9"])[0] == 1
    assert _run(capsysbinary, ["pinned", "--prime", "13"])[0] == 1  # 13 is 1 mod 4
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["incidence", "--format", "xml"])
    assert exc.value.code == 1


def test_invariants_exit_codes(monkeypatch, capsys):
    assert cli.main(["invariants", "--check", "field"]) == 0
    assert "PASS" in capsys.readouterr().out
    monkeypatch.setattr(cli, "run_suite", lambda names: [CheckResult("broken", 1, ("counterexample",))])
    assert cli.main(["invariants"]) == 2
    out = capsys.readouterr().out
    assert "FAIL" in out and "counterexample" in out


def test_bound_list_and_evaluate(capsys):
    assert cli.main(["bound", "--list"]) == 0
    listed = capsys.readouterr().out
    assert all(b.value in listed for b in BoundId)
    assert cli.main(["bound", "conic-small", "--size-p", "100", "--size-c", "1000", "--p", "101"]) == 0
    out = capsys.readouterr().out
    assert "applicable: yes" in out and "(dominant)" in out


@pytest.mark.parametrize("argv, column", [
    (["pinned", "--prime", "31", "--points", "40", "--trials", "2"], "recount"),
    (["pinned", "--prime", "13", "--points", "30", "--any-prime", "--poly", "product"], "recount"),
    (["image", "--prime", "31", "--points", "30", "--points-f", "8"], "sumset"),
    (["distset", "--prime", "11", "--points", "20", "--dim", "3"], "distances"),
    (["beck", "--prime", "101", "--points", "12"], "gp_formula_holds"),
    (["beck", "--prime", "101", "--points", "16", "--generator", "cartesian"], "conics"),
])
def test_application_commands(capsysbinary, argv, column):
    code, out, _ = _run(capsysbinary, argv)
    assert code == 0
    header, rows = parse_csv(out)
    assert column in header and rows
    if column in ("recount", "gp_formula_holds"):
        assert all(r[column] == "true" for r in rows)


def test_bench_small(capsysbinary):
    code, out, _ = _run(capsysbinary, ["bench", "--prime", "101", "--points", "300", "--curves", "300",
                                       "--thread-counts", "1,2"])
    assert code == 0
    rows = parse_csv(out)[1]
    assert [r["threads"] for r in rows] == ["1", "2"]
    assert all(r["identical"] == "true" for r in rows)
    assert len({r["incidences"] for r in rows}) == 1
