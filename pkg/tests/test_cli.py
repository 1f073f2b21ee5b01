import json
import subprocess
import sys

import pytest

from grpforge import cli
from grpforge.report import SCHEMA, Report, factored


def test_witt_output(capsys):
    code, rep = cli.run(["witt", "3", "3"])
    assert code == cli.EXIT_OK
    assert rep.data == {"degrees": [3, 3, 8], "total": 14}
    assert "total: 14" in capsys.readouterr().out
    code, rep = cli.run(["witt", "2", "5"])
    assert rep.data["degrees"] == [2, 1, 2, 3, 6]


@pytest.mark.parametrize("spec, summary", [("S3", "6 / 6 / 1"), ("C3", "2 / 1 / 2"), ("Q8", "24 / 4 / 6")])
def test_aut_orders(spec, summary):
    code, rep = cli.run(["aut", spec])
    assert code == cli.EXIT_OK
    assert rep.data["summary"] == summary


def test_json_round_trip(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, rep = cli.run(["aut", "Q8", "--json", str(out)])
    assert code == 0
    d = json.loads(out.read_text())
    assert d["schema"] == SCHEMA and d["tool"] == "grpforge"
    assert d["orders"]["Aut"]["factors"] == {"2": 3, "3": 1}
    assert d["passed"] is True and d["command"] == ["aut", "Q8", "--json", str(out)]
    capsys.readouterr()
    cli.run(["witt", "2", "2", "--json", "-"])
    d = json.loads(capsys.readouterr().out)
    assert d["data"]["total"] == 3


def test_usage_errors(capsys):
    assert cli.run(["aut", "C0x"])[0] == cli.EXIT_USAGE
    assert cli.run(["construct", "pettet", "C1"])[0] == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        cli.run(["frobnicate"])
    assert exc.value.code == cli.EXIT_USAGE


def test_resource_limits(capsys):
    assert cli.run(["aut", "S4", "--bound", "10"])[0] == cli.EXIT_BOUND
    assert cli.run(["aut", "C5xC5", "--timeout", "0"])[0] == cli.EXIT_BOUND
    assert "resource limit" in capsys.readouterr().err


def test_cache(tmp_path):
    _, first = cli.run(["aut", "D8", "--cache", str(tmp_path)])
    _, second = cli.run(["aut", "D8", "--cache", str(tmp_path)])
    assert first.data["cache"] == "miss" and second.data["cache"] == "hit"
    assert first.orders == second.orders
    entry = next(tmp_path.iterdir())
    entry.write_text("{not json")
    _, third = cli.run(["aut", "D8", "--cache", str(tmp_path)])
    assert third.data["cache"] == "miss" and third.orders == first.orders


def test_verify_suites():
    code, rep = cli.run(["verify", "lie", "--n", "3", "--p", "5"])
    assert code == 0 and rep.data["solutions"] == [[[1, 2], 1]]
    assert cli.run(["verify", "outhol", "--p", "3", "--n", "2"])[0] == 0
    code, rep = cli.run(["verify", "p3", "--p", "3"])
    assert code == 0 and len(rep.checks) == 9
    assert cli.run(["verify", "lemma-aut", "C7|xC3"])[0] == 0
    assert cli.run(["verify", "genrel", "--n", "2", "--p", "3", "--trials", "2"])[0] == 0
    assert cli.run(["verify", "multilinear", "--n", "3", "--c", "3", "--p", "5", "--samples", "20"])[0] == 0


def test_construct_kinds():
    code, rep = cli.run(["construct", "holomorph", "--p", "3", "--n", "2"])
    assert code == 0 and rep.orders["G"]["value"] == "2^2*3^2"
    code, rep = cli.run(["construct", "cayley", "S3"])
    assert code == 0
    code, rep = cli.run(["construct", "pettet", "C2"])
    assert code == 0 and rep.orders


def test_report_helpers():
    assert factored(2**6 * 5**11) == {"value": "2^6*5^11", "factors": {"2": 6, "5": 11}}
    assert factored(1)["value"] == "1"
    assert factored({3: 2, 2: 0})["value"] == "3^2"
    r = Report(["x"])
    r.check("a", True)
    assert r.passed
    r.check("b", False, witness=(1, 2))
    assert not r.passed and r.checks[1]["witness"] == [1, 2]
    assert "[FAIL] b" in r.render()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grpforge.cli", "witt", "2", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "total: 5" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "grpforge.cli", "aut", "nonsense!"], capture_output=True, text=True)
    assert proc.returncode == 2
