import glob
import json
import os

import pytest
from hypothesis import given

from catsem import instances as I
from catsem import translators as tr
from catsem.compcat import identity_map, identity_transformation
from catsem.errors import DocumentSyntaxError, UnknownKind, ValidationError, VersionMismatch
from catsem.generators import chain, terminal_category
from catsem.serialize import (FORMAT_VERSION, KINDS, Document, emit_document, from_document,
                              parse_document, read_document, to_document, write_document)

from conftest import FIXTURES, posets, presheaves

FIXTURE_FILES = sorted(glob.glob(os.path.join(FIXTURES, "*")))


def _cycle(obj):
    text = emit_document(to_document(obj))
    back = from_document(parse_document(text))
    return text, back


def test_terminal_category_text():
    text = emit_document(to_document(terminal_category("1")))
    data = json.loads(text)
    assert data == {"kind": "category", "version": FORMAT_VERSION,
                    "body": {"objects": ["1"], "morphisms": [["1<=1", "1", "1"]],
                             "identities": {"1": "1<=1"}, "compose": [["1<=1", "1<=1", "1<=1"]]}}
    assert text.endswith("\n") and emit_document(parse_document(text)) == text


@given(posets())
def test_category_roundtrip(C):
    text, back = _cycle(C)
    assert back == C and emit_document(to_document(back)) == text


@pytest.mark.parametrize("label,x", I.generated_dmcs(20) + I.generated_compcats() + I.generated_cwas(),
                         ids=lambda v: v if isinstance(v, str) else "")
def test_structure_roundtrip(label, x):
    text, back = _cycle(x)
    assert back == x
    assert emit_document(to_document(back)) == text


def test_cwf_natmod_cxlcat_roundtrip():
    for _, a in I.generated_cwas():
        w = tr.cwa_to_cwf(a)
        n = tr.cwf_to_natmod(w)
        for obj in (w, n):
            text, back = _cycle(obj)
            assert back == obj and emit_document(to_document(back)) == text


def test_map_and_transformation_roundtrip():
    for _, cc in I.generated_compcats()[:8]:
        m = identity_map(cc)
        assert _cycle(m)[1] == m
        t = identity_transformation(m)
        back = _cycle(t)[1]
        assert back.alpha == t.alpha and back.alphabar == t.alphabar


def test_kind_selection_for_display_classes():
    assert to_document(I.finset2_injections()).kind == "dmc"
    assert to_document(I.counterexample_target()).kind == "sdmc"
    assert to_document(tr.lex_to_clan(chain(2)), kind="clan").kind == "clan"


def test_key_order_and_whitespace_do_not_matter():
    text = emit_document(to_document(chain(3)))
    data = json.loads(text)
    data["body"]["objects"].reverse()
    shuffled = json.dumps({"version": data["version"], "body": data["body"], "kind": data["kind"]})
    assert emit_document(parse_document(shuffled)) == text


# -- errors -------------------------------------------------------------------------------

def test_duplicate_morphism_id_reports_line():
    text = emit_document(to_document(chain(2)))
    data = json.loads(text)
    data["body"]["morphisms"].append(["0<=1", "0", "1"])
    bad = json.dumps(data, indent=2)
    with pytest.raises(DocumentSyntaxError) as e:
        parse_document(bad)
    lines = bad.splitlines()
    assert e.value.line is not None and '"0<=1"' in lines[e.value.line - 1]
    # the reported line is the second occurrence among morphism rows
    first = next(i for i, l in enumerate(lines, 1) if '"0<=1"' in l)
    assert e.value.line > first


def test_duplicate_json_key():
    text = '{"kind": "category",\n "kind": "category", "version": "1", "body": {}}'
    with pytest.raises(DocumentSyntaxError) as e:
        parse_document(text)
    assert e.value.line == 2


def test_malformed_json_line():
    with pytest.raises(DocumentSyntaxError) as e:
        parse_document('{\n"kind": "category",\n"version": "1"\n"body": {}}')
    assert e.value.line == 4


def test_unknown_kind_and_version():
    body = to_document(chain(2)).body
    with pytest.raises(UnknownKind):
        parse_document(json.dumps({"kind": "topos", "version": "1", "body": body}))
    with pytest.raises(VersionMismatch):
        parse_document(json.dumps({"kind": "category", "version": "0", "body": body}))
    with pytest.raises(UnknownKind):
        Document("topos", "1", {})


def test_unknown_field_strict_and_lenient():
    data = json.loads(emit_document(to_document(chain(2))))
    data["body"]["colour"] = "blue"
    text = json.dumps(data, indent=2)
    with pytest.raises(DocumentSyntaxError):
        parse_document(text)
    assert parse_document(text, strict=False).kind == "category"
    data = json.loads(emit_document(to_document(chain(2))))
    data["comment"] = "x"
    with pytest.raises(DocumentSyntaxError):
        parse_document(json.dumps(data))


def test_missing_field():
    data = json.loads(emit_document(to_document(chain(2))))
    del data["body"]["compose"]
    with pytest.raises(DocumentSyntaxError):
        parse_document(json.dumps(data))


def test_invalid_category_rejected_on_load():
    data = json.loads(emit_document(to_document(chain(3))))
    data["body"]["compose"] = [r for r in data["body"]["compose"] if r[:2] != ["1<=2", "0<=1"]]
    data["body"]["compose"].append(["1<=2", "0<=1", "0<=0"])
    with pytest.raises(ValidationError):
        from_document(parse_document(json.dumps(data)))


def test_file_helpers(tmp_path):
    p = tmp_path / "c.category"
    doc = to_document(chain(2))
    write_document(doc, str(p))
    assert read_document(str(p)) == doc


def test_every_kind_has_a_fixture():
    kinds = {read_document(f).kind for f in FIXTURE_FILES}
    assert kinds == set(KINDS)


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=[os.path.basename(p) for p in FIXTURE_FILES])
def test_fixture_byte_identical(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    doc = parse_document(text)
    assert emit_document(doc) == text
    # and through the in-memory structure
    assert emit_document(to_document(from_document(doc), kind=doc.kind)) == text
