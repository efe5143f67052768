import json
import subprocess
import sys

import pytest

from virbi.cli import main
from virbi.cohomology import Window, coboundary_of
from virbi.algebra import LaurentMonomials
from virbi.parser import parse_tensor2
from virbi.serialize import table_to_json

K1 = LaurentMonomials(1)
TRIANGULAR = "L[0](x)L[1;1] - L[1;1](x)L[0]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bracket_example(capsys):
    code, out, _ = run(capsys, "bracket", "L[1;2]", "L[2;3]")
    assert code == 0 and out.strip() == "L[3;5]"


def test_bracket_json(capsys):
    code, out, _ = run(capsys, "bracket", "L[1;2]", "L[2;3]", "--json")
    data = json.loads(out)
    assert data["result"]["expr"] == "L[3;5]" and data["exit_code"] == 0


def test_cybe_triangular(capsys):
    code, out, _ = run(capsys, "cybe", TRIANGULAR)
    assert code == 0 and out.strip() == "c(r) = 0: true"


def test_cybe_nonzero_is_property_failure(capsys):
    code, out, _ = run(capsys, "cybe", "L[1](x)L[-1] - L[-1](x)L[1]")
    assert code == 1 and out.startswith("c(r) = 0: false")


def test_mybe_and_cojacobi(capsys):
    assert run(capsys, "mybe", TRIANGULAR, "L[2;1]")[0] == 0
    assert run(capsys, "cojacobi", TRIANGULAR, "L[2;1]")[0] == 0
    code, out, _ = run(capsys, "cojacobi", "L[1](x)L[-1] - L[-1](x)L[1]", "L[2]", "--json")
    assert code == 1 and not json.loads(out)["zero"]


def test_act(capsys):
    code, out, _ = run(capsys, "act", "L[1;1]", "L[0](x)L[0]")
    assert code == 0 and out.strip() == "-L[0;0](x)L[1;1] - L[1;1](x)L[0;0]"


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", TRIANGULAR, "--samples", "30")
    assert code == 0 and "triangular" in out
    code, out, _ = run(capsys, "certify", "L[0](x)L[0]", "--samples", "5")
    assert code == 1 and "not skew" in out


def test_witness(capsys):
    code, out, _ = run(capsys, "witness", "--skew", "L[0](x)L[0]", "--k", "0", "--gamma=-1,0,1")
    assert code == 0 and out.strip() == "witness: L[1]"
    code, out, _ = run(capsys, "witness", "--skew", "L[1](x)L[-1] - L[-1](x)L[1]")
    assert code == 0 and "skew" in out
    code, out, _ = run(capsys, "witness", "--annihilator", "L[0](x)L[0](x)L[0]", "--k", "0", "--json")
    assert code == 0 and json.loads(out)["status"] == "found"


def _table_file(tmp_path, mutate=False):
    v = parse_tensor2("L[1](x)L[-1/2;1] - 2*L[0;1](x)L[1/2]", K1)
    D = coboundary_of(v, Window.grid("1/2", 1, 1))
    data = table_to_json(D)
    if mutate:
        key = sorted(data["values"])[0]
        data["values"][key] = {"expr": "L[1](x)L[1]"}
    path = tmp_path / "table.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_inner_solve_and_cocycle_check(capsys, tmp_path):
    good = _table_file(tmp_path)
    code, out, _ = run(capsys, "inner-solve", good, "--json")
    assert code == 0 and json.loads(out)["inner"]
    assert run(capsys, "cocycle-check", good)[0] == 0


def test_inner_solve_certificate(capsys, tmp_path):
    bad = _table_file(tmp_path, mutate=True)
    code, out, _ = run(capsys, "inner-solve", bad, "--json")
    data = json.loads(out)
    assert code == 1 and not data["inner"] and data["certificate"]["verified"]
    assert run(capsys, "cocycle-check", bad)[0] == 1


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["bracket", "L[1;2", "L[0]"], 2),
        (["bracket", "L[1;2,3]", "L[0]"], 2),
        (["bracket", "L[1]"], 2),
        (["nonsense"], 2),
        (["bracket", "L[1]", "L[2]", "--table", "/does/not/exist.json"], 3),
        (["witness", "--skew", "L[1](x)L[1]", "--gamma", "1,2"], 3),
        (["inner-solve", "/does/not/exist.json"], 3),
    ],
)
def test_exit_codes(capsys, argv, expected):
    assert run(capsys, *argv)[0] == expected


def test_bad_table_json_is_usage_error(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run(capsys, "inner-solve", str(path))[0] == 2


def test_structure_table_backend(capsys, tmp_path):
    path = tmp_path / "dual.json"
    path.write_text(json.dumps({"n": 2, "unit": 0, "mult": [[{"0": "1"}, {"1": "1"}], [{"1": "1"}, {}]]}))
    code, out, _ = run(capsys, "bracket", "L[1;1]", "L[2;1]", "--table", str(path))
    assert code == 0 and out.strip() == "0"
    code, out, _ = run(capsys, "bracket", "L[1;1]", "L[2;0]", "--table", str(path))
    assert out.strip() == "L[3;1]"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "unit": 0, "mult": [[{"0": "1"}, {"1": "1"}], [{"0": "1"}, {"0": "1"}]]}))
    assert run(capsys, "bracket", "L[1]", "L[2]", "--table", str(bad))[0] == 3


def test_seed_env_only_sets_default(capsys, monkeypatch):
    monkeypatch.setenv("VIRBI_SEED", "5")
    a = run(capsys, "suite", "jacobi", "--trials", "3", "--k", "0", "--json")[1]
    b = run(capsys, "suite", "jacobi", "--trials", "3", "--k", "0", "--json", "--seed", "9")[1]
    assert json.loads(a)["seed"] == 5 and json.loads(b)["seed"] == 9
    monkeypatch.setenv("VIRBI_SEED", "minus one")
    assert run(capsys, "suite", "jacobi", "--trials", "3", "--k", "0")[0] == 3


def test_suite_text_and_json(capsys):
    code, out, _ = run(capsys, "suite", "jacobi", "--trials", "20", "--seed", "42")
    assert code == 0 and out.startswith("[PASS] jacobi (criterion 1)")
    code, out, _ = run(capsys, "suite", "skew-witness", "--trials", "2", "--json")
    data = json.loads(out)
    assert code == 0 and any(r.get("skipped") for r in data["results"])


def test_console_entry_point_byte_identical():
    cmd = [sys.executable, "-m", "virbi.cli", "suite", "involutions", "--trials", "20", "--seed", "3", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    threaded = subprocess.run(cmd + ["--threads", "4"], capture_output=True, check=True).stdout
    assert first == second == threaded
