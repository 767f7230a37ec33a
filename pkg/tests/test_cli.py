import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from qfermions import cli


def run(capsys, *args):
    code = cli.main(list(args))
    return code, capsys.readouterr().out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_betas_csv(capsys):
    code, out = run(capsys, "betas", "--algebra", "A", "--n-max", "3", "--q", "0.5")
    assert code == 0
    assert out == "n,value\n0,0.0\n1,1.0\n2,0.0\n3,4.0\n"


def test_betas_exact_column(capsys):
    code, out = run(capsys, "betas", "--algebra", "B", "--n-max", "2", "--exact")
    assert rows(out)[2] == {"n": "2", "laurent": "q^-1 - q", "value": "1.5"}


def test_basic_factorial(capsys):
    _, out = run(capsys, "basic", "--kind", "boson", "--q", "1", "--n-max", "4")
    assert [r["factorial"] for r in rows(out)] == ["1.0", "1.0", "2.0", "6.0", "24.0"]


def test_json_output_and_precision(capsys):
    _, out = run(capsys, "basic", "--q", "0.3", "--n-max", "2", "--format", "json", "--precision", "4")
    data = json.loads(out)
    assert data[2]["value"] == 3.033


def test_jd_coefficients(capsys):
    _, out = run(capsys, "jd", "--coeffs", "0,1,1", "--q", "0.5")
    # [2] at q=1/2 is 3/2
    assert out == "power,coeff\n0,1.0\n1,1.5\n"


def test_jd_limit_table(capsys):
    _, out = run(capsys, "jd", "--kind", "bosonic", "--coeffs", "0,0,1", "--eps", "0.01,0.001,0.0001")
    last = rows(out)[-1]
    assert last["eps"] == "order"
    assert float(last["distance_to_ordinary"]) == pytest.approx(2.0, abs=0.1)


def test_fermifn_sweep(capsys):
    _, out = run(capsys, "fermifn", "--nu", "1.5", "--sweep", "z:0.1:10:3:log")
    r = rows(out)
    assert [x["status"] for x in r] == ["ok"] * 3
    assert r[0]["method"] == "series" and r[-1]["method"] == "integral"


def test_dist_columns(capsys):
    _, out = run(capsys, "dist", "--q", "0.5", "--sweep", "E:-1:1:3")
    mid = rows(out)[1]
    assert float(mid["simplified"]) == pytest.approx(2 / 3, abs=1e-12)
    assert float(mid["exact_trace"]) == 0.5


def test_thermo_units_and_status(capsys):
    code, out = run(capsys, "thermo", "--quantity", "n", "--q", "0.5", "--sweep", "z:0.1:1:2")
    assert code == 0
    assert all(r["units"] == "k=h=m=1" and r["status"] == "ok" for r in rows(out))


def test_virial_max_dev_row(capsys):
    _, out = run(capsys, "virial", "--order", "3")
    last = rows(out)[-1]
    assert last["q"] == "max_dev" and float(last["a3"]) < 1e-8


def test_mu_blank_beyond_sommerfeld_range(capsys):
    code, out = run(capsys, "mu", "--sweep", "T:0.1:0.5:2")
    r = rows(out)
    assert code == 0
    assert r[1]["mu_sommerfeld2"] == "nan" and r[1]["status"] == "ok"


def test_out_file(tmp_path, capsys):
    path = tmp_path / "spec.csv"
    assert cli.main(["spectrum", "--n-max", "2", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert path.read_bytes().startswith(b"n,energy\n")


@pytest.mark.parametrize(
    "args",
    [
        ["betas", "--q", "0"],
        ["betas", "--q", "1.2"],
        ["betas", "--q", "abc"],
        ["betas", "--precision", "2"],
        ["fermifn", "--sweep", "z:1:0:3"],
        ["fermifn", "--sweep", "w:0:1:3"],
        ["fermifn", "--sweep", "T:0.1:1:3"],
        ["virial", "--order", "7"],
        ["jd", "--kind", "bosonic", "--coeffs", "1,2", "--q", "1"],
        [],
    ],
)
def test_usage_errors_exit_2(args, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(args)
    assert exc.value.code == 2


def test_sweep_spec_values():
    s = cli.SweepSpec.parse("T:1:100:3:log")
    assert s.values() == pytest.approx([1.0, 10.0, 100.0])


def test_format_cell_rounding():
    assert cli.format_cell(1 / 3, 5) == "0.33333"
    assert cli.format_cell(math.nan, 5) == "nan"
    assert cli.format_cell(7, 5) == "7"


def test_numeric_failure_exit_1(capsys, monkeypatch):
    def boom(*a, **k):
        raise cli.thermo.SolverError("forced")

    monkeypatch.setattr(cli.thermo, "chemical_potential", boom)
    code, out = run(capsys, "thermo", "--quantity", "mu", "--sweep", "T:0.1:1:2")
    assert code == 1
    assert all(r["mu"] == "nan" and r["status"] == "error" for r in rows(out))


def test_selftest_green_and_failure_hook(capsys):
    assert cli.main(["selftest"]) == 0
    assert "19/19 invariants passed" in capsys.readouterr().out
    assert cli.main(["selftest", "--tolerance-scale", "1e-30"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_console_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qfermions", "spectrum", "--n-max", "1", "--q", "1"], capture_output=True)
    assert r.returncode == 0 and r.stdout == b"n,energy\n0,-0.5\n1,0.5\n"


def test_betas_vacuum_only(capsys):
    _, out = run(capsys, "betas", "--n-max", "0")
    assert out == "n,value\n0,0.0\n"


def test_thermo_pressure_depends_on_y_only(capsys):
    _, a = run(capsys, "thermo", "--quantity", "P", "--q", "0.5", "--sweep", "z:0.25:0.5:2")
    _, b = run(capsys, "thermo", "--quantity", "P", "--q", "1", "--sweep", "z:0.5:1:2")
    assert [r["P"] for r in rows(a)] == [r["P"] for r in rows(b)]


def test_thermo_entropy_classical_limit(capsys):
    _, out = run(capsys, "thermo", "--quantity", "S", "--q", "1", "--sweep", "z:1e-6:1e-5:2:log")
    for r in rows(out):
        assert float(r["S"]) == pytest.approx(2.5 - math.log(float(r["z"])), abs=1e-4)


@given(st.floats(allow_nan=False, allow_infinity=False), st.integers(3, 17))
def test_csv_cells_round_trip(x, precision):
    cell = cli.format_cell(x, precision)
    assert float(cell) == float(f"{x:.{precision}g}")
    assert cli.format_cell(float(cell), precision) == cell
