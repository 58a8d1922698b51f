import json
import os
import shutil
import subprocess
import sys

import pytest

from catsem.cli import (EXIT_BUDGET, EXIT_INVALID, EXIT_IO, EXIT_NEGATIVE, EXIT_OK, OPS, main)
from catsem.serialize import emit_document, read_document, to_document
from catsem.generators import discrete_category

from conftest import FIXTURES


def fx(name):
    return os.path.join(FIXTURES, name)


# input fixture (and extra args) for every transform op
OP_INPUTS = {
    "fullify": ("over_point_chain2.compcat", []),
    "subcategorize": ("finset2_inj.compcat", []),
    "repletion": ("counterexample_target.sdmc", []),
    "compclose": ("chain_partial.dmc", []),
    "dmc2cc": ("finset2_inj.dmc", []),
    "cc2dmc": ("finset2_inj.compcat", []),
    "lex2clan": ("bool2.category", []),
    "sepcore": ("bool2.clan", []),
    "cxlcore": ("chain2_bottom.compcat", []),
    "slice": ("chain2_bottom.compcat", ["--context", "1"]),
    "cwa2cc": ("universe_chain2.cwa", []),
    "cc2cwa": ("chain2_bottom.compcat", []),
    "cwa2cwf": ("universe_chain2.cwa", []),
    "cwf2cwa": ("universe_chain2.cwf", []),
    "cwf2nm": ("universe_chain2.cwf", []),
    "nm2cwf": ("universe_finset2.natmod", []),
    "cxl2cwa": ("root_only.cxlcat", []),
}


def test_every_op_has_an_input():
    assert set(OP_INPUTS) | {"cwa2cxl"} == set(OPS)


@pytest.mark.parametrize("op", sorted(OP_INPUTS))
def test_transform_output_validates(op, tmp_path, capsys):
    name, extra = OP_INPUTS[op]
    out = str(tmp_path / f"out.{op}")
    assert main(["transform", "--op", op, *extra, fx(name), "-o", out]) == EXIT_OK
    capsys.readouterr()
    assert main(["validate", "--json", out]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_cwa2cxl_after_cxl2cwa(tmp_path, capsys):
    a = str(tmp_path / "a.cwa")
    x = str(tmp_path / "x.cxlcat")
    assert main(["transform", "--op", "cxl2cwa", fx("root_only.cxlcat"), "-o", a]) == EXIT_OK
    assert main(["transform", "--op", "cwa2cxl", a, "-o", x]) == EXIT_OK
    with open(x) as fh, open(fx("root_only.cxlcat")) as fh2:
        assert fh.read() == fh2.read()


def test_transform_emit_unit(tmp_path, capsys):
    out, unit = str(tmp_path / "o.compcat"), str(tmp_path / "u.map")
    assert main(["transform", "--op", "fullify", "--emit-unit", unit, fx("over_point_chain2.compcat"),
                 "-o", out]) == EXIT_OK
    assert read_document(unit).kind == "map"
    assert main(["validate", unit]) == EXIT_OK
    # ops without a unit refuse --emit-unit
    assert main(["transform", "--op", "cwa2cwf", "--emit-unit", unit, fx("universe_chain2.cwa"),
                 "-o", str(tmp_path / "w.cwf")]) == EXIT_INVALID


def test_transform_wrong_kind_and_missing_context(tmp_path, capsys):
    out = str(tmp_path / "o")
    assert main(["transform", "--op", "fullify", fx("bool2.category"), "-o", out]) == EXIT_INVALID
    assert main(["transform", "--op", "slice", fx("chain2_bottom.compcat"), "-o", out]) == EXIT_INVALID
    assert main(["transform", "--op", "lex2clan", fx("finset2.category"), "-o", out]) == EXIT_INVALID


def test_validate_all_fixtures(capsys):
    for name in sorted(os.listdir(FIXTURES)):
        assert main(["validate", fx(name)]) == EXIT_OK, name


def test_validate_invalid_document(tmp_path, capsys):
    data = json.loads(emit_document(to_document(discrete_category(["a", "b"]))))
    data["body"]["compose"].append(["a<=a", "b<=b", "a<=a"])
    p = tmp_path / "bad.category"
    p.write_text(json.dumps(data))
    assert main(["validate", "--json", str(p)]) == EXIT_INVALID
    rep = json.loads(capsys.readouterr().out)
    assert rep["ok"] is False and rep["violations"]


def test_io_errors(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing")]) == EXIT_IO
    p = tmp_path / "junk"
    p.write_text("{ not json")
    assert main(["validate", str(p)]) == EXIT_IO
    p.write_text(json.dumps({"kind": "topos", "version": "1", "body": {}}))
    assert main(["validate", str(p)]) == EXIT_IO


def test_classify(capsys):
    assert main(["classify", fx("finset2_inj.dmc")]) == EXIT_OK
    flags = json.loads(capsys.readouterr().out)
    assert flags["full"] and flags["replete"] and not flags["trivial"]
    assert main(["classify", fx("bool2.category")]) == EXIT_INVALID


def test_compare_laws(capsys):
    assert main(["compare", "--json", "--law", "unit-equiv", "--construction", "fullify",
                 fx("trivial_diamond.compcat")]) == EXIT_OK
    v = json.loads(capsys.readouterr().out)
    assert v["check"] == "unit-equiv" and v["ok"] and v["scope"] == "single finite instance"
    # fullify's unit on a non-full compcat is not an equivalence: a negative verdict
    assert main(["compare", "--law", "unit-equiv", "--construction", "fullify",
                 fx("over_point_chain2.compcat")]) == EXIT_NEGATIVE
    assert main(["compare", "--law", "adjunction", "--construction", "sep_core",
                 fx("chain3.category"), fx("bool2.clan")]) == EXIT_OK
    assert main(["compare", "--law", "rigidity", fx("contextual_point.compcat"),
                 fx("finset2_inj.compcat")]) == EXIT_OK
    # the source must be contextual
    assert main(["compare", "--law", "rigidity", fx("finset2_inj.compcat"),
                 fx("finset2_inj.compcat")]) == EXIT_INVALID


def test_compare_budget(capsys):
    assert main(["compare", "--law", "adjunction", "--construction", "sep_core", "--budget", "1",
                 fx("chain3.category"), fx("bool2.clan")]) == EXIT_BUDGET


def test_compare_argument_errors(capsys):
    assert main(["compare", "--law", "adjunction", fx("chain3.category")]) == EXIT_INVALID


def test_roundtrip_suite(tmp_path, capsys):
    assert main(["roundtrip", "--json", "--suite", FIXTURES]) == EXIT_OK
    res = json.loads(capsys.readouterr().out)
    assert res["ok"] and res["arrows"]


def test_counterexample(capsys):
    assert main(["counterexample", "sdmc", "--json"]) == EXIT_OK
    res = json.loads(capsys.readouterr().out)
    assert res["ok"] and set(res["legs"]) == {"both_valid", "pseudo_equivalence", "no_strict_equivalence"}
    assert main(["counterexample", "sdmc", "--budget", "3"]) == EXIT_BUDGET


def test_budget_env_default(monkeypatch, capsys):
    monkeypatch.setenv("CATSEM_BUDGET", "3")
    assert main(["counterexample", "sdmc"]) == EXIT_BUDGET


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "catsem", "validate", fx("terminal.category")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "valid" in r.stderr


def test_console_script_if_installed():
    exe = shutil.which("catsem")
    if exe is None:
        pytest.skip("console script not on PATH")
    r = subprocess.run([exe, "counterexample", "sdmc"], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS" in r.stdout
