import json
import subprocess
import sys

import pytest

from supoly import build_family
from supoly.cli import main, parse_curve, parse_element, parse_grid, table_from_json, table_to_json
from supoly.liealg import sl2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--m", "3", "--order", "6")
    data = json.loads(out)
    assert code == 0
    entries = {e["k"]: e["coeffs"] for e in data["entries"]}
    assert entries[4] == ["9/7"]
    assert entries[6] == ["0", "90/91"]
    assert entries[1] == entries[2] == entries[3] == []


def test_table_case2(capsys):
    _, out, _ = run(capsys, "table", "--family", "case2", "--order", "2")
    assert json.loads(out)["entries"][2]["coeffs"] == ["1"]


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--order", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "family,m,k,degree,coeff"
    assert "case1,3,4,0,9/7" in lines


def test_json_round_trip():
    t = build_family(5, "case2", 15)
    assert table_from_json(json.loads(json.dumps(table_to_json(t)))) == t


def test_reduce_and_bracket(capsys):
    assert run(capsys, "reduce", "--n", "0", "--l", "0")[1] == "0\n"
    assert run(capsys, "reduce", "--n", "-1", "--l", "0")[1] == "w0\n"
    assert run(capsys, "bracket", "--x", "h,1,0", "--y", "h,-1,0")[1] == "-8*w0\n"
    assert run(capsys, "bracket", "--x", "e,1,1", "--y", "f,1,1")[1] == "h*t^2*u^2\n"


def test_reduce_is_deterministic(capsys):
    a = run(capsys, "reduce", "--n", "9", "--l", "2", "--format", "json")[1]
    b = run(capsys, "reduce", "--n", "9", "--l", "2", "--format", "json")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["table", "--order", "-1"],
    ["table", "--m", "1", "--order", "3"],
    ["table", "--family", "case9", "--order", "3"],
    ["reduce", "--n", "1", "--l", "3"],
    ["reduce", "--curve", "1,2,1", "--n", "1", "--l", "1"],
    ["bracket", "--x", "q,1,0", "--y", "h,0,0"],
    ["quadrature", "--grid", "0.1:1.5"],
    ["nonsense"],
])
def test_config_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 2


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "pde", "--m", "3", "--family", "case1")[0] == 0
    code, out, err = run(capsys, "verify", "pde", "--m", "3", "--family", "case2")
    assert code == 1 and "FAIL pde" in err
    assert run(capsys, "verify", "pde", "--m", "3", "--family", "case2", "--pde-variant", "corrected")[0] == 0


def test_verify_algebra(capsys):
    assert run(capsys, "verify", "jacobi", "--m", "3")[0] == 0
    code, _, err = run(capsys, "verify", "theorem35", "--m", "3", "--range", "1")
    assert code == 0 and "note: module sector" in err
    assert run(capsys, "verify", "ode", "--m", "4", "--nmax", "20")[0] == 0


def test_verify_csv(capsys, tmp_path):
    path = tmp_path / "report.csv"
    code, _, _ = run(capsys, "verify", "favard", "--m", "3,4", "--format", "csv", "--output", str(path))
    rows = path.read_text().splitlines()
    assert code == 0 and rows[0] == "check,params,ok,detail" and len(rows) == 5


def test_uniqueness_json(capsys):
    code, out, _ = run(capsys, "uniqueness", "--m", "5", "--n", "8", "--r", "10")
    data = json.loads(out)
    assert code == 0 and data["dimension"] == 1 and data["contains_member"]


def test_quadrature_small_grid(capsys):
    code, out, err = run(capsys, "quadrature", "--m", "3,4", "--grid", "0.3:0.2;-0.6:0.4")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0] == "family,m,c,z,series,integral,abs_diff"
    assert err.startswith("max_diff=")


def test_parsers():
    assert parse_curve("quartic", 3).basis_size() == 9
    assert parse_curve("0,1,-2c,0,1", 3).D == 4
    assert parse_grid("0.1:0.2; -0.3:0.4") == [(0.1, 0.2), (-0.3, 0.4)]
    assert parse_element("h,1,0", sl2()).loop == {(1, 1, 0): parse_element("h,1,0", sl2()).loop[(1, 1, 0)]}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "supoly", "bracket", "--x", "h,1,0", "--y", "h,-1,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "-8*w0\n"
