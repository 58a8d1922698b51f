import os
import subprocess
import sys

import pytest
from hypothesis import given

from catsem import _kernel_py, fincat, kernel
from catsem.errors import BudgetExceeded
from catsem.fincat import check_category, enumerate_functors
from catsem.generators import chain, powerset_lattice

from conftest import small_categories

compiled = pytest.importorskip("catsem._kernel", reason="compiled kernel not built")


def _with_backend(monkeypatch, module):
    monkeypatch.setattr(fincat, "kernel", module)


@given(small_categories, small_categories)
def test_backends_enumerate_the_same_functors(C, D):
    keys = []
    for module in (compiled, _kernel_py):
        orig = fincat.kernel
        fincat.kernel = module
        try:
            keys.append([F._key for F in enumerate_functors(C, D)])
        finally:
            fincat.kernel = orig
    assert keys[0] == keys[1]


def test_backends_agree_on_budget(monkeypatch):
    for module in (compiled, _kernel_py):
        _with_backend(monkeypatch, module)
        with pytest.raises(BudgetExceeded) as e:
            enumerate_functors(powerset_lattice(2), powerset_lattice(2), budget=3)
        assert e.value.budget == 3


def test_backends_agree_on_associativity(monkeypatch):
    # one object, identity e, and a table with (a a) b = a but a (a b) = b
    table = {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("e", "b"): "b", ("b", "e"): "b",
             ("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "a"}
    data = {"objects": ["*"], "morphisms": [[m, "*", "*"] for m in "eab"],
            "identities": {"*": "e"}, "compose": [[g, f, h] for (g, f), h in table.items()]}
    results = []
    for module in (compiled, _kernel_py):
        _with_backend(monkeypatch, module)
        rep = check_category(data)
        results.append([(v.code, v.witness) for v in rep.violations])
        assert check_category(chain(3)).ok
    assert results[0] == results[1]
    assert results[0] and results[0][0][0] == "LawViolation"


def test_pure_python_env_switch():
    code = "import catsem.kernel as k; print(k.BACKEND)"
    env = dict(os.environ, CATSEM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
    env["CATSEM_PURE_PYTHON"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "cython"
    assert kernel.BACKEND in ("python", "cython")
