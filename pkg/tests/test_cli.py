import json
import subprocess
import sys

import pytest

from qutritbraid.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "--json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and not data["failed"]
    assert {c["suite"] for c in data["checks"]} == {"identities", "tqft", "presentation", "closure"}


def test_verify_corrupt_control_fails(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--corrupt", "N")
    data = json.loads(out)
    assert code == 1 and data["failed"] and data["corrupted"] == ["N"]


def test_field_too_small(capsys):
    code, _, err = run(capsys, "catalog", "--field-order", "36")
    assert code == 2 and "field too small" in err


def test_field_order_env(capsys, monkeypatch):
    monkeypatch.setenv("QUTRITBRAID_FIELD_ORDER", "24")
    code, _, err = run(capsys, "catalog")
    assert code == 2 and "field too small" in err
    monkeypatch.setenv("QUTRITBRAID_FIELD_ORDER", "144")
    code, out, _ = run(capsys, "catalog", "--names", "N")
    assert code == 0 and "N" in json.loads(out)


def test_closure_json_schema_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "closure", "--gens", "G1,G2", "--out", str(a))[0] == 0
    assert run(capsys, "closure", "--gens", "G1,G2", "--out", str(b), "--backend", "numpy")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["order"] == 162
    assert set(data) >= {"order", "generators", "elements", "fingerprint"}
    assert set(data["elements"][0]) == {"matrix", "word", "order"}


def test_closure_mod_center(capsys):
    code, out, _ = run(capsys, "closure", "--gens", "G1t,G2t,FUMt", "--mode", "pu", "--summary")
    data = json.loads(out)
    assert code == 0 and data["order"] == 216 and "elements" not in data


def test_closure_unknown_name(capsys):
    code, _, err = run(capsys, "closure", "--gens", "G7")
    assert code == 2 and "unknown" in err


def test_braid(capsys):
    code, out, _ = run(capsys, "braid", "--leaves", "2,2,1,1", "--word", "s2:1,s1:-1", "--state", "e1")
    data = json.loads(out)
    assert code == 0 and data["leaf_out"] == [1, 2, 2, 1]
    assert len(data["state_out"]) == 2


def test_braid_bad_word(capsys):
    assert run(capsys, "braid", "--leaves", "2,2,2,2", "--word", "x1:1")[0] == 2
    assert run(capsys, "braid", "--leaves", "2,2,2,2", "--word", "s9:1")[0] == 2


def test_ancilla(capsys):
    code, out, _ = run(capsys, "ancilla", "--target", "minus")
    data = json.loads(out)
    assert code == 0 and data["certified"] and data["moduli_squared"] == ["1/2", "1/2"]


def test_coset_enum(capsys, tmp_path):
    code, out, _ = run(capsys, "coset-enum")
    assert code == 0 and json.loads(out)["index"] == 648
    p = tmp_path / "s3.pres"
    p.write_text("gens: a, b\nrels: a^2, b^3, a*b*a*b\n")
    code, out, _ = run(capsys, "coset-enum", "--pres", str(p), "--subgroup", "b", "--strategy", "felsch")
    assert code == 0 and json.loads(out)["index"] == 2


def test_dump_tqft(capsys):
    code, out, _ = run(capsys, "dump-tqft", "--gauge", "kl")
    assert code == 0 and json.loads(out)["gauge"] == "kl"


def test_catalog_pretty(capsys):
    code, out, _ = run(capsys, "catalog", "--pretty", "--names", "G1t,N")
    assert code == 0 and out.startswith("G1t =")


def test_timestamp_wraps_result(capsys):
    code, out, _ = run(capsys, "coset-enum", "--timestamp")
    assert set(json.loads(out)) == {"result", "timestamp"}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qutritbraid", "catalog", "--names", "J"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "J" in json.loads(res.stdout)
