"""Command line interface: validate, classify, transform, compare, roundtrip, counterexample.

Exit codes: 0 ok, 2 validation failure, 3 law check negative, 4 budget
exceeded, 5 I/O or syntax error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Callable

from . import serialize as S
from . import translators as tr
from .compcat import CompCat, check_compcat, check_map, check_transformation, classify
from .errors import (BudgetExceeded, CatsemError, DocumentSyntaxError, UnknownKind,
                     ValidationError, ValidationReport, VersionMismatch)
from .fincat import DEFAULT_BUDGET, check_category, check_functor, terminal_object
from .laws import (check_adjunction_hom_bijection, check_contextual_rigidity,
                   check_unit_equivalence, roundtrip_suite, run_counterexample_sdmc)
from .structures import (DisplayClass, check_clan, check_cwa, check_cwf, check_cxlcat,
                         check_dmc, check_natmod)

EXIT_OK, EXIT_INVALID, EXIT_NEGATIVE, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4, 5


def _budget_default() -> int:
    return int(os.environ.get("CATSEM_BUDGET", DEFAULT_BUDGET))


def _emit(args, payload: dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


# -- validation -----------------------------------------------------------------------------

def validate_document(doc: S.Document) -> ValidationReport:
    """Run the validator for ``doc.kind``; tables that cannot even be loaded report as invalid."""
    if doc.kind == "category":
        return check_category(doc.body)
    try:
        obj = S.from_document(doc)
    except ValidationError as e:
        return e.report
    checks: dict[str, Callable] = {
        "functor": check_functor,
        "compcat": check_compcat,
        "dmc": lambda d: check_dmc(d, require_replete=True),
        "sdmc": lambda d: check_dmc(d, require_replete=False),
        "clan": check_clan,
        "cwa": check_cwa, "cwf": check_cwf, "natmod": check_natmod, "cxlcat": check_cxlcat,
        "map": check_map, "transformation": check_transformation,
    }
    return checks[doc.kind](obj)


def _load_valid(path: str):
    doc = S.read_document(path)
    rep = validate_document(doc)
    if not rep.ok:
        raise ValidationError(rep)
    return doc, S.from_document(doc)


def cmd_validate(args) -> int:
    doc = S.read_document(args.file)
    rep = validate_document(doc)
    if args.json:
        print(json.dumps(rep.to_dict(), sort_keys=True, indent=2))
    else:
        print(str(rep), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_classify(args) -> int:
    doc, obj = _load_valid(args.file)
    if isinstance(obj, DisplayClass):
        obj = tr.dmc_to_compcat(obj)
    if not isinstance(obj, CompCat):
        raise CatsemError(f"classify needs a compcat or display class, got {doc.kind}")
    flags = classify(obj)
    print(json.dumps(flags, sort_keys=True, indent=None if not args.json else 2))
    return EXIT_OK


# -- transforms -----------------------------------------------------------------------------

def _cwa_point(a):
    return terminal_object(a.base)


OPS: dict[str, tuple[tuple[str, ...], Callable]] = {
    "fullify": (("compcat",), tr.fullify),
    "subcategorize": (("compcat",), tr.subcategorize),
    "repletion": (("compcat", "dmc", "sdmc"), tr.repletion),
    "compclose": (("dmc", "sdmc"), tr.comp_closure),
    "dmc2cc": (("dmc", "sdmc", "clan"), lambda d: (tr.dmc_to_compcat(d, terminal_object(d.base)), None)),
    "cc2dmc": (("compcat",), lambda cc: (tr.compcat_to_dmc(cc), None)),
    "lex2clan": (("category",), lambda C: (tr.lex_to_clan(C), None)),
    "sepcore": (("clan",), tr.sep_core),
    "cxlcore": (("compcat",), tr.cxl_core),
    "slice": (("compcat",), None),
    "cwa2cc": (("cwa",), lambda a: (tr.cwa_to_compcat(a, _cwa_point(a)), None)),
    "cc2cwa": (("compcat",), lambda cc: (tr.compcat_to_cwa(cc), None)),
    "cwa2cwf": (("cwa",), lambda a: (tr.cwa_to_cwf(a), None)),
    "cwf2cwa": (("cwf",), lambda w: (tr.cwf_to_cwa(w), None)),
    "cwf2nm": (("cwf",), lambda w: (tr.cwf_to_natmod(w), None)),
    "nm2cwf": (("natmod",), lambda n: (tr.natmod_to_cwf(n), None)),
    "cxl2cwa": (("cxlcat",), lambda x: (tr.cxlcat_to_cwa(x), None)),
    "cwa2cxl": (("cwa",), lambda a: (tr.cwa_to_cxlcat(a), None)),
}

# kinds forced on display-class outputs
_OUT_KIND = {"lex2clan": "clan", "compclose": "dmc"}


def cmd_transform(args) -> int:
    kinds, fn = OPS[args.op]
    doc, obj = _load_valid(args.input)
    if doc.kind not in kinds:
        raise CatsemError(f"--op {args.op} takes {'/'.join(kinds)}, got {doc.kind}")
    if args.op == "slice":
        if args.context is None:
            raise CatsemError("--op slice needs --context")
        out, unit = tr.slice_at(obj, args.context)
    else:
        out, unit = fn(obj)
    kind = _OUT_KIND.get(args.op)
    if args.op == "repletion" and isinstance(out, DisplayClass):
        kind = "dmc"
    S.write_document(S.to_document(out, kind), args.output)
    if args.emit_unit:
        if unit is None:
            raise CatsemError(f"--op {args.op} has no unit or counit")
        S.write_document(S.to_document(unit), args.emit_unit)
    _emit(args, {"op": args.op, "output": args.output, "kind": S.to_document(out, kind).kind},
          f"{args.op}: wrote {args.output}")
    return EXIT_OK


# -- law checks -----------------------------------------------------------------------------

def cmd_compare(args) -> int:
    objs = [_load_valid(f)[1] for f in args.files]
    if args.law == "unit-equiv":
        if len(objs) != 1 or not args.construction:
            raise CatsemError("unit-equiv takes --construction and one file")
        v = check_unit_equivalence(args.construction, objs[0], args.files[0])
    elif args.law == "adjunction":
        if len(objs) != 2 or not args.construction:
            raise CatsemError("adjunction takes --construction and two files")
        v = check_adjunction_hom_bijection(args.construction, objs[0], objs[1], args.budget,
                                           " vs ".join(args.files))
    else:
        if len(objs) != 2:
            raise CatsemError("rigidity takes two compcat files")
        v = check_contextual_rigidity(objs[0], objs[1], args.budget, " vs ".join(args.files))
    _emit(args, v.to_dict(), f"{v.check} [{v.instance}]: {'PASS' if v.ok else 'FAIL'}\n"
          + "\n".join(f"  {k}: {val}" for k, val in sorted(v.details.items())))
    return EXIT_OK if v.ok else EXIT_NEGATIVE


def cmd_roundtrip(args) -> int:
    items = []
    for name in sorted(os.listdir(args.suite)):
        path = os.path.join(args.suite, name)
        if not os.path.isfile(path) or name.startswith("."):
            continue
        doc = S.read_document(path)
        if validate_document(doc).ok:
            items.append((name, S.from_document(doc)))
    res = roundtrip_suite(items)
    lines = [f"{a}: {r['passed']} passed, {r['failed']} failed"
             + (f" (smallest failure {r['minimal_failure']})" if r["minimal_failure"] else "")
             for a, r in res["arrows"].items()]
    _emit(args, res, "\n".join(lines) or "no applicable round trips")
    return EXIT_OK if res["ok"] else EXIT_NEGATIVE


def cmd_counterexample(args) -> int:
    res = run_counterexample_sdmc(args.budget)
    lines = [f"{leg}: {'PASS' if r['ok'] else 'FAIL'} "
             + ", ".join(f"{k}={v}" for k, v in sorted(r.items()) if k != "ok")
             for leg, r in res["legs"].items()]
    _emit(args, res, "\n".join(lines))
    return EXIT_OK if res["ok"] else EXIT_NEGATIVE


# -- entry point ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(prog="catsem", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="run the validator for a document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", parents=[common], help="print the flag record of a compcat")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("transform", parents=[common], help="apply a translator")
    p.add_argument("--op", required=True, choices=sorted(OPS))
    p.add_argument("--context", help="context for --op slice")
    p.add_argument("--emit-unit", metavar="FILE", help="also write the unit or counit")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("compare", parents=[common], help="run a law check")
    p.add_argument("--law", required=True, choices=["unit-equiv", "adjunction", "rigidity"])
    p.add_argument("--construction",
                   choices=["fullify", "subcategorize", "repletion", "comp_closure", "sep_core",
                            "cxl_core"])
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("roundtrip", parents=[common], help="round trip every document in a directory")
    p.add_argument("--suite", required=True)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("counterexample", parents=[common], help="run a bundled counterexample")
    p.add_argument("which", choices=["sdmc"])
    p.add_argument("--budget", type=int, default=_budget_default())
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, DocumentSyntaxError, UnknownKind, VersionMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValidationError as e:
        if getattr(args, "json", False):
            print(json.dumps(e.report.to_dict(), sort_keys=True, indent=2))
        print(str(e.report), file=sys.stderr)
        return EXIT_INVALID
    except CatsemError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
