"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""
import glob
import os
import sys
import time

import pytest

from catsem import instances as I
from catsem import translators as tr
from catsem.compcat import check_compcat, check_map, classify
from catsem.fibration import fibration_report
from catsem.fincat import is_lex
from catsem.laws import (check_adjunction_hom_bijection, check_contextual_rigidity,
                         check_unit_equivalence, run_counterexample_sdmc)
from catsem.presheaf import (check_presheaf_map, elements_roundtrip_iso, fibration_roundtrip_iso,
                             fibration_to_presheaf, grothendieck, is_iso_over)
from catsem.serialize import emit_document, parse_document
from catsem.structures import (check_clan, check_cwf, check_natmod, is_clan_map, is_lex_functor,
                               validate_cwf, validate_natmod)

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def crit_counterexample():
    t = time.perf_counter()
    r = run_counterexample_sdmc()
    dt = time.perf_counter() - t
    legs = r["legs"]
    ok = r["ok"] and dt < 60
    return ok, (f"valid={legs['both_valid']['ok']} pseudo_equiv={legs['pseudo_equivalence']['ok']} "
                f"strict_equivs={legs['no_strict_equivalence']['strict_equivalences']}"
                f"/{legs['no_strict_equivalence']['strict_maps']} in {dt:.2f}s")


def crit_dmc_iso():
    dmcs = I.generated_dmcs()
    families = {label.split(":")[0] for label, _ in dmcs}
    bad = []
    for label, d in dmcs:
        cc = tr.dmc_to_compcat(d)
        f = classify(cc)
        if not (check_compcat(cc).ok and f["full"] and f["subcategorical"] and f["replete"]
                and tr.compcat_to_dmc(cc) == d):
            bad.append(label)
    has_kinds = ({"chain3", "bool2"} & families and {"dag_square", "dag_parallel"} & families
                 and "finset2" in families)
    ok = len(dmcs) >= 20 and not bad and bool(has_kinds)
    return ok, f"{len(dmcs)} DMCs over {len(families)} base families, failures={bad[:3]}"


def _monotone(before, after):
    return all(after[k] for k, v in before.items() if v and k in ("full", "subcategorical", "replete"))


def crit_fullification_chain():
    ccs = I.generated_compcats()
    bad = []
    for label, cc in ccs:
        f0 = classify(cc)
        full, unit = tr.fullify(cc)
        f1 = classify(full)
        full2, unit2 = tr.fullify(full)
        sub, _ = tr.subcategorize(full)
        f2 = classify(sub)
        rep, _ = tr.repletion(sub)
        f3 = classify(rep)
        ok = (check_map(unit, require_strict=True).ok and f1["full"] and _monotone(f0, f1)
              and tr.is_strict_iso(unit2)
              and check_unit_equivalence("subcategorize", full, label).ok
              and f2["subcategorical"] and _monotone(f1, f2) and tr.subcategorize(sub)[0] == sub
              and check_unit_equivalence("repletion", sub, label).ok
              and f3["replete"] and _monotone(f2, f3) and tr.repletion(rep)[0] == rep)
        if not ok:
            bad.append(label)
    return len(ccs) >= 20 and not bad, f"{len(ccs)} compcats, failures={bad[:3]}"


def crit_adjunctions():
    t = time.perf_counter()
    pairs = I.adjunction_pairs()
    bad, counts, largest = [], {}, 0
    for c, ps in pairs.items():
        counts[c] = len(ps)
        for label, X, Y in ps:
            v = check_adjunction_hom_bijection(c, X, Y, label=label)
            largest = max(largest, v.details["left_size"], v.details["right_size"])
            if not v.ok:
                bad.append(f"{c}:{label}")
    dt = time.perf_counter() - t
    ok = not bad and all(n >= 3 for n in counts.values()) and largest <= 50 and dt < 300
    return ok, f"pairs={counts} largest hom-set={largest} failures={bad} in {dt:.2f}s"


def crit_grothendieck():
    ps = I.generated_presheaves(24)
    bad = []
    for label, P in ps:
        m = elements_roundtrip_iso(P)
        p = grothendieck(P)
        rep = fibration_report(p)
        ok = (check_presheaf_map(m).ok and m.is_iso()
              and is_iso_over(fibration_roundtrip_iso(p), grothendieck(fibration_to_presheaf(p)), p)
              and rep["fibration"] and rep["discrete"] and rep["splittable"])
        if not ok:
            bad.append(label)
    return len(ps) >= 20 and not bad, f"{len(ps)} presheaves, failures={bad[:3]}"


def crit_cwa_chain():
    cwas = I.generated_cwas()
    bad = []
    for label, a in cwas:
        try:
            w = validate_cwf(tr.cwa_to_cwf(a))
            n = validate_natmod(tr.cwf_to_natmod(w))
        except Exception:
            bad.append(label)
            continue
        b, ren = tr.cwa_roundtrip(a)
        w2, tm = tr.cwf_roundtrip(w)
        w3, tm3 = tr.cwf_natmod_roundtrip(w)
        n2, tm4 = tr.natmod_roundtrip(n)
        if not (tr.cwa_iso(a, b, ren) and tr.cwf_to_cwa(w) == a and tr.cwf_tm_iso(w, w2, tm)
                and check_cwf(w3).ok and tr.cwf_tm_iso(w, w3, tm3)
                and check_natmod(n2).ok and tr.natmod_iso(n, n2, tm4)):
            bad.append(label)
    return len(cwas) >= 10 and not bad, f"{len(cwas)} CwAs, failures={bad[:3]}"


def crit_rigidity():
    srcs = I.contextual_instances()
    bad, maps = [], 0
    for l1, src in srcs:
        for l2, dd in I.pointed_targets():
            v = check_contextual_rigidity(src, dd, label=f"{l1}|{l2}")
            maps += v.details["pointed_maps"]
            if not v.ok:
                bad.append(v.instance)
    return (len(srcs) >= 3 and not bad,
            f"{len(srcs)} contextual sources, {maps} pointed maps checked, failures={bad} "
            "(finite contextual instances have no types)")


def crit_sep_core():
    clans = [(f"lex:{n}", tr.lex_to_clan(C)) for n, C in I.meet_semilattices()]
    from catsem.serialize import from_document, read_document
    for name in ("bool2.clan", "chain3.clan"):
        clans.append((f"poset:{name}", from_document(read_document(os.path.join(FIXTURES, name)))))
    sources = [C for n, C in I.meet_semilattices() if len(C.objects) <= 3]
    bad = []
    for label, d in clans:
        if not check_clan(d).ok:
            bad.append(label)
            continue
        core, inc = tr.sep_core(d)
        if not (is_lex(core) and is_clan_map(inc, tr.lex_to_clan(core), d) and is_lex_functor(inc)):
            bad.append(label)
            continue
        for X in sources:
            if not check_adjunction_hom_bijection("sep_core", X, d).ok:
                bad.append(label)
                break
    return len(clans) >= 5 and not bad, f"{len(clans)} clans x {len(sources)} lex sources, failures={bad}"


def crit_format():
    files = sorted(glob.glob(os.path.join(FIXTURES, "*")))
    bad = []
    for path in files:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if emit_document(parse_document(text)) != text:
            bad.append(os.path.basename(path))
    return bool(files) and not bad, f"{len(files)} fixtures, failures={bad}"


CRITERIA = [
    (1, "counterexample reproduction", crit_counterexample),
    (2, "DMC to compcat isomorphism", crit_dmc_iso),
    (3, "fullification chain", crit_fullification_chain),
    (4, "adjunction hom-bijections", crit_adjunctions),
    (5, "Grothendieck equivalence", crit_grothendieck),
    (6, "CwA/CwF/natural model chain", crit_cwa_chain),
    (7, "contextual rigidity", crit_rigidity),
    (8, "separated core soundness", crit_sep_core),
    (9, "format stability", crit_format),
]


def _line(n, name, ok, detail):
    return f"ACCEPTANCE {n} {name}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("n,name,fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(n, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(n, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [fn() for _, _, fn in CRITERIA]
    for (n, name, _), (ok, detail) in zip(CRITERIA, results):
        print(_line(n, name, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
