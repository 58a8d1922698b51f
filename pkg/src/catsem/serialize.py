"""The shared document format: JSON with a kind, a version and a body.

Canonical form has sorted keys, sorted collections and two-space indent, so
that emitting a parsed canonical document reproduces it byte for byte.
Collections are lists that are values of an object; the rows inside a
collection keep their order.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Mapping

from .compcat import CompCat, CompCatMap, CompCatTransformation
from .errors import DocumentSyntaxError, UnknownKind, VersionMismatch, ValidationError
from .fincat import Cone, FinCategory, FinFunctor, check_category, pair_id
from .presheaf import FinPresheaf, PresheafMap, category_of_elements
from .structures import ContextualCategory, CwA, CwF, DisplayClass, NaturalModel, check_dmc

FORMAT_VERSION = "1"

KINDS = ("category", "functor", "compcat", "dmc", "sdmc", "clan", "cwa", "cwf", "natmod",
         "cxlcat", "map", "transformation")

_CAT = {"objects", "morphisms", "identities", "compose"}
_FUN = {"objects", "morphisms"}
_PSH = {"at", "act"}
_DMC = ({"base", "display"}, {"chosen_pullbacks"})
_CC = ({"base", "total", "p", "chi"}, {"point"})
_CWA = ({"base", "ty", "ext", "proj", "ext_mor"}, set())
_MAP = ({"src", "dst", "F", "Fbar", "phi"}, {"point_iso"})

# required and optional fields per kind, with the schema of nested fields
_SCHEMA: dict[str, tuple[set, set]] = {
    "category": (_CAT, set()),
    "functor": ({"dom", "cod", "objects", "morphisms"}, set()),
    "compcat": _CC,
    "dmc": _DMC, "sdmc": _DMC, "clan": _DMC,
    "cwa": _CWA,
    "cwf": ({"cwa", "tm", "var"}, set()),
    "natmod": ({"base", "typ", "tmp", "p"}, {"chosen_reps"}),
    "cxlcat": ({"base", "root", "parent", "proj"}, {"chosen_pb"}),
    "map": _MAP,
    "transformation": ({"src", "dst", "alpha", "alphabar"}, set()),
}
_NESTED: dict[str, tuple[set, set]] = {
    "base": (_CAT, set()), "total": (_CAT, set()), "dom": (_CAT, set()), "cod": (_CAT, set()),
    "ty": (_PSH, set()), "tm": (_PSH, set()), "typ": (_PSH, set()), "tmp": (_PSH, set()),
    "p": (_FUN, set()), "F": (_FUN, set()), "Fbar": (_FUN, set()),
    "chi": ({"objects", "tops"}, set()),
}


@dataclass
class Document:
    kind: str
    version: str
    body: dict[str, Any]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnknownKind(f"unknown document kind {self.kind!r}")


# -- canonical text -------------------------------------------------------------------------

def _canon(x, collection: bool = False):
    if isinstance(x, Mapping):
        return {str(k): _canon(v, collection=True) for k, v in sorted(x.items())}
    if isinstance(x, (list, tuple)):
        items = [_canon(v) for v in x]
        if collection:
            return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
        return items
    return x


def emit_document(doc: Document) -> str:
    data = {"kind": doc.kind, "version": doc.version, "body": _canon(doc.body)}
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class _Duplicate(Exception):
    def __init__(self, key: str):
        self.key = key


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise _Duplicate(k)
        out[k] = v
    return out


def _line_of(text: str, token: str, occurrence: int = 1) -> int:
    """1-based line of the ``occurrence``-th appearance of ``token`` as a JSON string."""
    pat = re.compile(re.escape(json.dumps(token, ensure_ascii=False)))
    hits = list(pat.finditer(text))
    if len(hits) >= occurrence:
        return text.count("\n", 0, hits[occurrence - 1].start()) + 1
    return 1


def parse_document(text: str, strict: bool = True) -> Document:
    """Parse and structurally check a document.

    Raises DocumentSyntaxError for malformed JSON, duplicate keys or ids,
    missing fields and (in strict mode) unknown fields.
    """
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except _Duplicate as e:
        raise DocumentSyntaxError(f"duplicate key {e.key!r}", _line_of(text, e.key, 2)) from None
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, e.lineno) from None
    if not isinstance(data, dict):
        raise DocumentSyntaxError("top level must be an object")
    missing = {"kind", "version", "body"} - set(data)
    if missing:
        raise DocumentSyntaxError(f"missing field(s) {sorted(missing)}")
    extra = set(data) - {"kind", "version", "body"}
    if extra and strict:
        k = sorted(extra)[0]
        raise DocumentSyntaxError(f"unknown field {k!r}", _line_of(text, k))
    kind, version, body = data["kind"], data["version"], data["body"]
    if kind not in KINDS:
        raise UnknownKind(f"unknown document kind {kind!r}")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"document version {version!r}, expected {FORMAT_VERSION!r}")
    _check_shape(kind, body, text, strict)
    return Document(kind, version, _canon(body))


def _check_shape(kind: str, body, text: str, strict: bool) -> None:
    if not isinstance(body, dict):
        raise DocumentSyntaxError(f"{kind} body must be an object", _line_of(text, "body"))
    _check_fields(body, _SCHEMA[kind], kind, text, strict)
    nested_kind = {"cwf": {"cwa": "cwa"}, "map": {"src": "compcat", "dst": "compcat"},
                   "transformation": {"src": "map", "dst": "map"}}.get(kind, {})
    for key, value in body.items():
        if key in nested_kind:
            _check_shape(nested_kind[key], value, text, strict)
        elif key in _NESTED and not (kind == "natmod" and key == "p"):
            if not isinstance(value, dict):
                raise DocumentSyntaxError(f"field {key!r} must be an object", _line_of(text, key))
            _check_fields(value, _NESTED[key], key, text, strict)
            if _NESTED[key][0] == _CAT:
                _check_ids(value, text)


def _check_fields(obj: dict, schema: tuple[set, set], where: str, text: str, strict: bool) -> None:
    required, optional = schema
    missing = required - set(obj)
    if missing:
        raise DocumentSyntaxError(f"{where}: missing field(s) {sorted(missing)}", _line_of(text, where))
    extra = set(obj) - required - optional
    if extra and strict:
        k = sorted(extra)[0]
        raise DocumentSyntaxError(f"{where}: unknown field {k!r}", _line_of(text, k))
    if where == "category":
        _check_ids(obj, text)


def _check_ids(cat: dict, text: str) -> None:
    objs = cat.get("objects", [])
    seen: set = set()
    for o in objs:
        if o in seen:
            raise DocumentSyntaxError(f"duplicate object id {o!r}", _line_of(text, o, 2))
        seen.add(o)
    seen = set()
    for row in cat.get("morphisms", []):
        if not isinstance(row, list) or len(row) != 3:
            raise DocumentSyntaxError("morphism rows are [id, src, dst]", _line_of(text, "morphisms"))
        if row[0] in seen:
            raise DocumentSyntaxError(f"duplicate morphism id {row[0]!r}", _line_of(text, row[0], 2))
        seen.add(row[0])


def read_document(path: str, strict: bool = True) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), strict)


def write_document(doc: Document, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_document(doc))


# -- structures to bodies --------------------------------------------------------------------

def _cat_body(C: FinCategory) -> dict:
    return {"objects": list(C.objects),
            "morphisms": [[m, C.src[m], C.dst[m]] for m in C.morphisms],
            "identities": dict(C.identity),
            "compose": [[g, f, h] for (g, f), h in C.compose_table.items()]}


def _fun_tables(F: FinFunctor) -> dict:
    return {"objects": dict(F.obj_map), "morphisms": dict(F.mor_map)}


def _psh_body(P: FinPresheaf) -> dict:
    return {"at": {o: list(v) for o, v in P.at.items()},
            "act": [[f, e, x] for (f, e), x in P.act.items()]}


def _cc_body(cc: CompCat) -> dict:
    out = {"base": _cat_body(cc.base), "total": _cat_body(cc.total), "p": _fun_tables(cc.p),
           "chi": {"objects": dict(cc.chi.obj_map),
                   "tops": {m: cc.top(m) for m in cc.total.morphisms}}}
    if cc.point is not None:
        out["point"] = cc.point
    return out


def _cwa_body(a: CwA) -> dict:
    return {"base": _cat_body(a.base), "ty": _psh_body(a.Ty),
            "ext": [[g, A, x] for (g, A), x in a.ext.items()],
            "proj": [[g, A, x] for (g, A), x in a.proj.items()],
            "ext_mor": [[f, A, x] for (f, A), x in a.ext_mor.items()]}


def _map_body(m: CompCatMap) -> dict:
    out = {"src": _cc_body(m.src), "dst": _cc_body(m.dst), "F": _fun_tables(m.F),
           "Fbar": _fun_tables(m.Fbar), "phi": dict(m.phi)}
    if m.point_iso is not None:
        out["point_iso"] = m.point_iso
    return out


def to_document(obj, kind: str | None = None) -> Document:
    """Wrap a structure as a canonical document; ``kind`` picks dmc/sdmc/clan for display classes."""
    if isinstance(obj, FinCategory):
        kind, body = "category", _cat_body(obj)
    elif isinstance(obj, FinFunctor):
        kind, body = "functor", {"dom": _cat_body(obj.dom), "cod": _cat_body(obj.cod),
                                 **_fun_tables(obj)}
    elif isinstance(obj, CompCat):
        kind, body = "compcat", _cc_body(obj)
    elif isinstance(obj, DisplayClass):
        if kind is None:
            kind = "dmc" if check_dmc(obj, require_replete=True).ok else "sdmc"
        body = {"base": _cat_body(obj.base), "display": sorted(obj.display)}
        if obj.chosen_pullbacks:
            body["chosen_pullbacks"] = [[d, f, c.apex, *c.legs]
                                        for (d, f), c in obj.chosen_pullbacks.items()]
    elif isinstance(obj, CwA):
        kind, body = "cwa", _cwa_body(obj)
    elif isinstance(obj, CwF):
        kind, body = "cwf", {"cwa": _cwa_body(obj.cwa), "tm": _psh_body(obj.Tm),
                             "var": [[g, A, t] for (g, A), t in obj.var.items()]}
    elif isinstance(obj, NaturalModel):
        kind = "natmod"
        body = {"base": _cat_body(obj.base), "typ": _psh_body(obj.TyP), "tmp": _psh_body(obj.TmP),
                "p": [[o, e, x] for o, c in obj.p.components.items() for e, x in c.items()]}
        if obj.chosen_reps is not None:
            body["chosen_reps"] = [[g, A, X, u] for (g, A), (X, u) in obj.chosen_reps.items()]
    elif isinstance(obj, ContextualCategory):
        kind = "cxlcat"
        body = {"base": _cat_body(obj.base), "root": obj.root, "parent": dict(obj.parent),
                "proj": dict(obj.proj),
                "chosen_pb": [[f, X, fX, q] for (f, X), (fX, q) in obj.chosen_pb.items()]}
    elif isinstance(obj, CompCatMap):
        kind, body = "map", _map_body(obj)
    elif isinstance(obj, CompCatTransformation):
        kind, body = "transformation", {"src": _map_body(obj.src), "dst": _map_body(obj.dst),
                                        "alpha": dict(obj.alpha), "alphabar": dict(obj.alphabar)}
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return Document(kind, FORMAT_VERSION, _canon(body))


# -- bodies to structures --------------------------------------------------------------------

def _load_cat(body: dict) -> FinCategory:
    rep = check_category(body)
    if not rep.ok:
        raise ValidationError(rep)
    mors = {m: (s, d) for m, s, d in body["morphisms"]}
    comp = {(g, f): h for g, f, h in body["compose"]}
    return FinCategory(body["objects"], mors, body["identities"], comp)


def _load_psh(C: FinCategory, body: dict) -> FinPresheaf:
    return FinPresheaf(C, body["at"], {(f, e): x for f, e, x in body["act"]})


def _load_cc(body: dict) -> CompCat:
    base, total = _load_cat(body["base"]), _load_cat(body["total"])
    return CompCat.build(base, total, body["p"]["objects"], body["p"]["morphisms"],
                         body["chi"]["objects"], body["chi"]["tops"], body.get("point"))


def _load_cwa(body: dict) -> CwA:
    C = _load_cat(body["base"])
    return CwA(C, _load_psh(C, body["ty"]), {(g, A): x for g, A, x in body["ext"]},
               {(g, A): x for g, A, x in body["proj"]},
               {(f, A): x for f, A, x in body["ext_mor"]})


def _load_map(body: dict) -> CompCatMap:
    src, dst = _load_cc(body["src"]), _load_cc(body["dst"])
    F = FinFunctor(src.base, dst.base, body["F"]["objects"], body["F"]["morphisms"])
    Fbar = FinFunctor(src.total, dst.total, body["Fbar"]["objects"], body["Fbar"]["morphisms"])
    return CompCatMap(src, dst, F, Fbar, body["phi"], body.get("point_iso"))


def from_document(doc: Document):
    """Build the structure a document describes. Category tables are validated on the way."""
    b = doc.body
    k = doc.kind
    if k == "category":
        return _load_cat(b)
    if k == "functor":
        return FinFunctor(_load_cat(b["dom"]), _load_cat(b["cod"]), b["objects"], b["morphisms"])
    if k == "compcat":
        return _load_cc(b)
    if k in ("dmc", "sdmc", "clan"):
        chosen = None
        if "chosen_pullbacks" in b:
            chosen = {(d, f): Cone(apex, tuple(legs)) for d, f, apex, *legs in b["chosen_pullbacks"]}
        return DisplayClass(_load_cat(b["base"]), frozenset(b["display"]), chosen)
    if k == "cwa":
        return _load_cwa(b)
    if k == "cwf":
        a = _load_cwa(b["cwa"])
        E = category_of_elements(a.Ty).cat
        return CwF(a, _load_psh(E, b["tm"]), {(g, A): t for g, A, t in b["var"]})
    if k == "natmod":
        C = _load_cat(b["base"])
        TyP, TmP = _load_psh(C, b["typ"]), _load_psh(C, b["tmp"])
        comps: dict[str, dict[str, str]] = {}
        for o, e, x in b["p"]:
            comps.setdefault(o, {})[e] = x
        reps = None
        if "chosen_reps" in b:
            reps = {(g, A): (X, u) for g, A, X, u in b["chosen_reps"]}
        return NaturalModel(C, TyP, TmP, PresheafMap(TmP, TyP, comps), reps)
    if k == "cxlcat":
        return ContextualCategory(_load_cat(b["base"]), b["root"], dict(b["parent"]),
                                  dict(b["proj"]),
                                  {(f, X): (fX, q) for f, X, fX, q in b.get("chosen_pb", [])})
    if k == "map":
        return _load_map(b)
    if k == "transformation":
        return CompCatTransformation(_load_map(b["src"]), _load_map(b["dst"]), b["alpha"],
                                     b["alphabar"])
    raise UnknownKind(k)
