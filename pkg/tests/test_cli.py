import json
import math

import numpy as np
import pytest

from fracops.cli import main
from fracops.grid import Family, make_uniform_grid, sample_family, write_table_csv
from fracops.serialize import Table, emit_report, parse_json, to_csv, to_json


def run(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr().out
    return code, out


def test_norm_bounds_json(capsysbinary):
    code, out = run(capsysbinary, "norm-bounds", "--alpha", "1", "--p", "2", "--t0", "0", "--t1", "1")
    assert code == 0
    rep = parse_json(out.decode())
    assert rep["lower"] == pytest.approx(0.5773503, abs=1e-7)
    assert rep["best_upper"] == pytest.approx(0.7071068, abs=1e-7)
    assert rep["generic_upper"] == 1.0


def test_precondition_and_usage_errors(capsysbinary):
    assert main(["norm-bounds", "--alpha", "-1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["norm-bounds", "--nonsense"])
    assert info.value.code == 2
    assert "usage" in capsysbinary.readouterr().err.decode()


def test_unwritable_output(tmp_path):
    assert main(["norm-bounds", "--output", str(tmp_path / "missing" / "r.json")]) == 3


def test_apply_identity_bit_for_bit(capsysbinary):
    code, out = run(capsysbinary, "apply", "--alpha", "0", "--family", "constant", "--format", "csv")
    g = make_uniform_grid((0, 1), 1024)
    assert code == 0
    assert out.decode() == write_table_csv(sample_family(Family.constant(), g))


def test_apply_table_roundtrip(tmp_path, capsysbinary):
    g = make_uniform_grid((0, 1), 33)
    src = tmp_path / "f.csv"
    src.write_text(write_table_csv(sample_family(Family.monomial(2), g)))
    code, out = run(capsysbinary, "apply", "--alpha", "0", "--family", "table", "--table", str(src),
                    "--format", "csv")
    assert code == 0 and out.decode() == src.read_text()


def test_alpha_zero_and_spectrum_csv(capsysbinary):
    _, out = run(capsysbinary, "alpha-zero", "--format", "csv")
    assert out.decode().splitlines()[0] == "alpha,defect"
    _, out = run(capsysbinary, "spectrum", "--alpha", "1", "--k", "3", "--format", "csv")
    lines = out.decode().splitlines()
    assert lines[0] == "k,sigma"
    vals = [float(l.split(",")[1]) for l in lines[1:]]
    np.testing.assert_allclose(vals, [0.6366, 0.2122, 0.1273], atol=5e-4)


def test_determinism(capsysbinary):
    argv = ["norm-estimate", "--alpha", "0.5", "--p", "3", "--n", "64", "--seed", "3"]
    _, a = run(capsysbinary, *argv)
    _, b = run(capsysbinary, *argv)
    assert a == b


def test_json_roundtrip_is_exact(rng):
    vals = list(rng.standard_normal(50)) + [1e-300, 5e-324, 1.7976931348623157e308, math.inf]
    back = parse_json(to_json({"x": vals, "flag": True, "none": None}))
    assert back["x"] == vals
    assert back["flag"] is True and back["none"] is None
    json.loads(to_json({"x": vals}))  # still valid JSON


def test_csv_format():
    text = to_csv(Table(["a", "b"], [[1, 0.1], [2, math.inf]]))
    assert text == "a,b\n1,0.10000000000000001\n2,inf\n"
    assert emit_report(Table(["a"], [[1]]), "csv") == b"a\n1\n"
    with pytest.raises(ValueError):
        emit_report({}, "xml")


@pytest.mark.parametrize("cmd", ["semigroup-check", "alpha-continuity", "generator-check",
                                 "unboundedness", "divergence-demo"])
def test_commands_run(cmd, capsysbinary):
    code, out = run(capsysbinary, cmd, "--n", "128")
    assert code == 0
    parse_json(out.decode())
