import json
import subprocess
import sys

import pytest

from lcsmod import pauli
from lcsmod.cli import main
from lcsmod.lcs import lcs_to_dict, magic_square, serialize_lcs

SQUARE = serialize_lcs(magic_square(3))
TRIVIAL_SQUARE = serialize_lcs(magic_square(3, (0,) * 6))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def spec(family="square", d=3, coeffs=None, b=None):
    n, m = (9, 6) if family == "square" else (10, 5)
    return json.dumps({"family": family, "d": d, "coeffs": coeffs or [1] * (2 * n),
                       "b": b if b is not None else [0] * (m - 1) + [1]})


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", SQUARE)
    assert code == 1 and out.strip() == "unsatisfiable"
    code, out, _ = run(capsys, "--json", "solve", TRIVIAL_SQUARE)
    assert code == 0 and json.loads(out)["satisfiable"] is True


def test_json_flag_after_subcommand(capsys):
    code, out, _ = run(capsys, "solve", TRIVIAL_SQUARE, "--json")
    assert code == 0
    assert out.strip() == json.dumps(json.loads(out), sort_keys=True)


def test_verify_classical(capsys, tmp_path):
    path = tmp_path / "sq.json"
    path.write_text(TRIVIAL_SQUARE)
    assert run(capsys, "verify-classical", str(path), "[0,0,0,0,0,0,0,0,0]")[0] == 0
    code, out, _ = run(capsys, "verify-classical", SQUARE, '{"assignment": [0,0,0,0,0,0,0,0,0]}')
    assert code == 1 and "row 6" in out
    assert run(capsys, "verify-classical", SQUARE, "[0, 0]")[0] == 2


def test_verify_quantum_and_extract(capsys, tmp_path):
    lcs, A = pauli.qubit_square_solution()
    lcs_path, ops_path = tmp_path / "lcs.json", tmp_path / "ops.json"
    lcs_path.write_text(serialize_lcs(lcs))
    ops_path.write_text(pauli.serialize_assignment(A))
    code, out, _ = run(capsys, "--json", "verify-quantum", str(lcs_path), str(ops_path), "--dense")
    doc = json.loads(out)
    assert code == 0 and doc["verified"] and doc["dense_verified"]
    code, _, err = run(capsys, "extract", str(lcs_path), str(ops_path))
    assert code == 3 and "even D=2" in err

    bad = json.dumps({"D": 2, "n": 2, "ops": [{"phase2D": 0, "z": [0, 0], "x": [0, 0]}] * 9})
    code, out, _ = run(capsys, "verify-quantum", str(lcs_path), bad)
    assert code == 1 and "row 6" in out


def test_extract_odd_dimension(capsys):
    from lcsmod.lcs import Lcs

    lcs = Lcs.from_rows(3, [[1, 1]], [0])
    ops = json.dumps({"D": 3, "n": 1, "ops": [{"phase2D": 0, "z": [1], "x": [0]},
                                              {"phase2D": 0, "z": [2], "x": [0]}]})
    code, out, _ = run(capsys, "--json", "extract", serialize_lcs(lcs), ops)
    assert code == 0 and json.loads(out)["assignment"] == [0, 0]


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(TRIVIAL_SQUARE))
    assert run(capsys, "solve", "-")[0] == 0


def test_gen_commands(capsys):
    code, out, _ = run(capsys, "gen-square", "--d", "3")
    assert code == 0 and json.loads(out) == lcs_to_dict(magic_square(3))
    code, out, _ = run(capsys, "gen-pentagram", "--d", "5", "--spec", "--b", "1,2,3,4,0")
    assert code == 0 and json.loads(out)["b"] == [1, 2, 3, 4, 0]
    assert run(capsys, "gen-square", "--d", "3", "--b", "1,2")[0] == 2
    assert run(capsys, "gen-square", "--d", "3", "--coeffs", ",".join(["3"] * 18))[0] == 2


def test_classify_exit_codes(capsys):
    code, out, _ = run(capsys, "classify", spec())
    assert code == 1 and "no quantum solution" in out and "J^2 = e" in out
    coeffs = [1, 3] + [1] * 16
    code, out, _ = run(capsys, "--json", "classify", spec(d=5, coeffs=coeffs))
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "classically_satisfiable"
    code, out, _ = run(capsys, "--json", "classify", spec(d=9, coeffs=[2] + [1] * 17))
    assert code == 3 and json.loads(out)["kind"] == "unsupported"
    assert run(capsys, "classify", spec(d=4))[0] == 3
    assert run(capsys, "classify", spec("pentagram", d=7, b=[3, 1, 1, 1, 0]))[0] == 0


def test_witness_emit_and_check(capsys, tmp_path):
    code, out, _ = run(capsys, "--json", "witness", spec(d=5))
    assert code == 0
    path = tmp_path / "w.json"
    path.write_text(out)
    code, out, _ = run(capsys, "--json", "witness", spec(d=5), "--check", str(path))
    assert code == 0 and json.loads(out)["reflected_verified"]

    doc = json.loads(path.read_text())
    doc["pairs"] = doc["pairs"][1:]
    path.write_text(json.dumps(doc))
    assert run(capsys, "witness", spec(d=5), "--check", str(path))[0] == 1

    coeffs = [1, 4] + [1] * 16
    assert run(capsys, "witness", spec(d=5, coeffs=coeffs))[0] == 3


@pytest.mark.parametrize(
    "argv, code",
    [
        (["selftest", "fig2"], 0),
        (["selftest", "table1", "--t", "3"], 0),
        (["selftest", "table1", "--t", "4"], 0),
        (["selftest", "fuzz", "--seed", "1", "--count", "50"], 0),
        (["selftest", "table1", "--t", "0"], 2),
    ],
)
def test_selftests(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_errors(capsys):
    code, _, err = run(capsys, "solve", "{not json")
    assert code == 2 and "input formats" in err
    code, _, err = run(capsys, "solve", "/no/such/file.json")
    assert code == 2
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "input formats" in err
    assert run(capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lcsmod", "selftest", "fig2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "square" in proc.stdout
