"""Executable checks of the comparison theorems on concrete finite instances.

A Verdict is evidence about one instance. None of these checks proves a
theorem; they report what exhaustive enumeration found at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .compcat import (CompCat, CompCatMap, check_compcat, check_map, check_transformation,
                      classify, compose_maps, enumerate_maps, enumerate_transformations,
                      is_contextual, is_equivalence, is_isomorphism_map, iter_maps,
                      strictify_contextual_map)
from .errors import BudgetExceeded, ConstructionInapplicable, NotDiscrete
from .fibration import is_discrete_fibration
from .fincat import (DEFAULT_BUDGET, FinCategory, FinFunctor, check_functor,
                     compose_functors, functor_report, is_lex, search_functors,
                     terminal_object)
from .presheaf import (FinPresheaf, check_presheaf_map, elements_roundtrip_iso, fibration_to_presheaf,
                       fibration_roundtrip_iso, grothendieck, is_iso_over)
from .structures import (ContextualCategory, CwA, CwF, DisplayClass, NaturalModel, check_clan,
                         check_cwa, check_cwf, check_cxlcat, check_dmc, check_natmod,
                         is_clan_map, is_lex_functor, preserves_display)
from . import translators as tr


@dataclass
class Verdict:
    check: str
    instance: str
    ok: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"check": self.check, "instance": self.instance, "ok": self.ok,
                "details": self.details, "scope": "single finite instance"}


def _functors(C: FinCategory, D: FinCategory, budget: int, counter: list[int]) -> list[FinFunctor]:
    return [FinFunctor(C, D, o, m) for o, m in search_functors(C, D, budget=budget, counter=counter)]


# -- unit equivalences -------------------------------------------------------------------

def _as_compcat(x) -> CompCat:
    return tr.dmc_to_compcat(x) if isinstance(x, DisplayClass) else x


def check_unit_equivalence(construction: str, instance, label: str = "") -> Verdict:
    """Build the unit (or counit) of ``construction`` and test whether it is an equivalence."""
    if construction == "subcategorize":
        cc = _as_compcat(instance)
        if not classify(cc)["full"]:
            raise ConstructionInapplicable("subcategorize needs a full comprehension category")
        _, unit = tr.subcategorize(cc)
    elif construction == "repletion":
        cc = _as_compcat(instance)
        if not classify(cc)["subcategorical"]:
            raise ConstructionInapplicable("repletion needs a subcategorical comprehension category")
        _, unit = tr.repletion(cc)
    elif construction == "fullify":
        _, unit = tr.fullify(_as_compcat(instance))
    elif construction == "cxl_core":
        cc = instance
        if cc.point is None or not is_contextual(cc):
            raise ConstructionInapplicable("cxl_core unit check needs a contextual input")
        _, unit = tr.cxl_core(cc)
    else:
        raise ConstructionInapplicable(f"no unit check for {construction!r}")
    rep = check_map(unit)
    base = functor_report(unit.F)
    total = functor_report(unit.Fbar)
    ok = rep.ok and base.equivalence and total.equivalence
    return Verdict("unit-equiv", label or construction, ok, {
        "construction": construction, "map_valid": rep.ok, "strict": unit.strict,
        "base_equivalence": base.equivalence, "total_equivalence": total.equivalence,
        "total_full": total.full, "total_faithful": total.faithful,
        "total_ess_surjective": total.ess_surjective,
        "violations": rep.codes})


# -- adjunction hom bijections -------------------------------------------------------------

def _bijection(left: list, right: list, transport) -> dict[str, Any]:
    images = [transport(x) for x in left]
    keys = [_key(x) for x in images]
    right_keys = {_key(y) for y in right}
    injective = len(set(keys)) == len(keys)
    surjective = right_keys <= set(keys)
    lands = set(keys) <= right_keys
    return {"left_size": len(left), "right_size": len(right), "injective": injective,
            "surjective": surjective, "lands_in_target": lands,
            "bijection": injective and surjective and lands}


def _key(x):
    if isinstance(x, CompCatMap):
        return x._key()
    if isinstance(x, FinFunctor):
        return x._key
    return x


def check_adjunction_hom_bijection(construction: str, X, Y, budget: int = DEFAULT_BUDGET,
                                   label: str = "") -> Verdict:
    """Compare the two hom-sets of an adjunction by exhaustive enumeration.

    Left adjoints ``L`` (fullify, comp_closure) compare ``Hom(L X, Y)`` with
    ``Hom(X, Y)`` by precomposing the unit; right adjoints ``R`` (sep_core,
    cxl_core) compare ``Hom(X, R Y)`` with ``Hom(X, Y)`` by postcomposing the
    counit. Raises BudgetExceeded when enumeration runs over ``budget``.
    """
    counter = [0]
    if construction == "fullify":
        if not classify(Y)["full"]:
            raise ConstructionInapplicable("target of the fullification adjunction must be full")
        LX, unit = tr.fullify(X)
        left = list(iter_maps(LX, Y, budget=budget, counter=counter))
        right = list(iter_maps(X, Y, budget=budget, counter=counter))
        res = _bijection(left, right, lambda n: compose_maps(n, unit))
    elif construction == "comp_closure":
        if not check_dmc(X).ok:
            raise ConstructionInapplicable("source must be a DMC")
        if tr.comp_closure(Y)[0] != Y or not check_dmc(Y).ok:
            raise ConstructionInapplicable("target must be a composition-closed DMC")
        LX, _ = tr.comp_closure(X)
        fs = _functors(X.base, Y.base, budget, counter)
        left = [F for F in fs if preserves_display(F, LX, Y)]
        right = [F for F in fs if preserves_display(F, X, Y)]
        res = _bijection(left, right, lambda F: F)
    elif construction == "sep_core":
        C = X.base if isinstance(X, DisplayClass) else X
        if not is_lex(C):
            raise ConstructionInapplicable("source must be lex")
        if not check_clan(Y).ok:
            raise ConstructionInapplicable("target must be a clan")
        core, inc = tr.sep_core(Y)
        Xc = tr.lex_to_clan(C)
        left = [F for F in _functors(C, core, budget, counter) if is_lex_functor(F)]
        right = [F for F in _functors(C, Y.base, budget, counter) if is_clan_map(F, Xc, Y)]
        res = _bijection(left, right, lambda F: compose_functors(inc, F))
    elif construction == "cxl_core":
        if X.point is None or not is_contextual(X):
            raise ConstructionInapplicable("source must be contextual")
        if Y.point is None or not is_discrete_fibration(Y.p):
            raise ConstructionInapplicable("target must be discrete and pointed")
        RY, counit = tr.cxl_core(Y)
        kw = dict(strict_only=True, strictly_pointed=True, budget=budget, counter=counter)
        left = list(iter_maps(X, RY, **kw))
        right = list(iter_maps(X, Y, **kw))
        res = _bijection(left, right, lambda n: compose_maps(counit, n))
    else:
        raise ConstructionInapplicable(f"no adjunction check for {construction!r}")
    res["construction"] = construction
    res["candidates_examined"] = counter[0]
    return Verdict("adjunction", label or construction, res["bijection"], res)


# -- maps out of contextual structures ----------------------------------------------------

def check_contextual_rigidity(cc: CompCat, dd: CompCat, budget: int = DEFAULT_BUDGET,
                              label: str = "") -> Verdict:
    """Pointed pseudo maps out of a contextual ``cc`` are strictifiable and rigid."""
    if cc.point is None or not is_contextual(cc):
        raise ConstructionInapplicable("source must be contextual")
    if dd.point is None or terminal_object(dd.base) is None or not (
            len(dd.base.hom(dd.point, dd.point)) == 1
            and all(len(dd.base.hom(x, dd.point)) == 1 for x in dd.base.objects)):
        raise ConstructionInapplicable("target point must be terminal")
    maps = enumerate_maps(cc, dd, pointed=True, budget=budget)
    strictified = 0
    failures = []
    for m in maps:
        s, t = strictify_contextual_map(m)
        if (check_map(s, require_strict=True).ok and s.strictly_pointed
                and check_transformation(t).ok and t.is_invertible()):
            strictified += 1
        else:
            failures.append(repr(m))
    max_cells = 0
    for m1 in maps:
        for m2 in maps:
            n = len(enumerate_transformations(m1, m2, pointed=True, budget=budget))
            max_cells = max(max_cells, n)
    ok = strictified == len(maps) and max_cells <= 1
    return Verdict("rigidity", label or "rigidity", ok, {
        "pointed_maps": len(maps), "strictified": strictified,
        "max_transformations_between_pair": max_cells, "failures": failures[:5]})


# -- the sDMC counterexample ----------------------------------------------------------------

def run_counterexample_sdmc(budget: int = DEFAULT_BUDGET) -> dict[str, Any]:
    """Equivalent-by-pseudo-maps sDMCs with no strict equivalence between them."""
    from .instances import counterexample_target, finset2_injections
    d1, d2 = finset2_injections(), counterexample_target()
    leg1 = {"source_valid": check_dmc(d1, require_replete=False).ok,
            "target_valid": check_dmc(d2, require_replete=False).ok,
            "target_replete": check_dmc(d2, require_replete=True).ok,
            "source_displays": len(d1.display), "target_displays": len(d2.display)}
    leg1["ok"] = leg1["source_valid"] and leg1["target_valid"]
    cc1, cc2 = tr.dmc_to_compcat(d1), tr.dmc_to_compcat(d2)

    witness = None
    examined = 0
    for m in iter_maps(cc1, cc2, budget=budget):
        examined += 1
        if is_equivalence(m):
            witness = m
            break
    leg2 = {"ok": witness is not None, "maps_examined": examined}
    if witness is not None:
        leg2["F_objects"] = dict(witness.F.obj_map)
        leg2["Fbar_objects"] = dict(witness.Fbar.obj_map)
        leg2["non_identity_phi"] = sorted(A for A, sq in witness.phi.items()
                                          if not cc2.arrows.cat.is_identity(sq))

    strict = enumerate_maps(cc1, cc2, strict_only=True, budget=budget)
    strict_equivs = [m for m in strict if is_equivalence(m)]
    functors = _functors(d1.base, d2.base, budget, [0])
    preserving = [F for F in functors if all(F.mor_map[x] in d2.display for x in d1.display)]
    leg3 = {"strict_maps": len(strict), "strict_equivalences": len(strict_equivs),
            "functors": len(functors), "display_preserving_functors": len(preserving),
            "display_preserving_equivalences": sum(functor_report(F).equivalence for F in preserving)}
    leg3["ok"] = leg3["strict_equivalences"] == 0 and leg3["display_preserving_equivalences"] == 0
    return {"legs": {"both_valid": leg1, "pseudo_equivalence": leg2, "no_strict_equivalence": leg3},
            "ok": leg1["ok"] and leg2["ok"] and leg3["ok"]}


# -- round trips --------------------------------------------------------------------------

def _size(x) -> int:
    if isinstance(x, DisplayClass):
        return len(x.base.morphisms)
    if isinstance(x, FinPresheaf):
        return x.size() + len(x.base.morphisms)
    if isinstance(x, CompCat):
        return len(x.base.morphisms) + len(x.total.morphisms)
    if isinstance(x, (CwA, CwF)):
        base = x.base if isinstance(x, CwA) else x.cwa.base
        return len(base.morphisms)
    if isinstance(x, (NaturalModel, ContextualCategory)):
        return len(x.base.morphisms)
    return 0


def roundtrip_checks(x) -> dict[str, bool]:
    """Every round trip applicable to ``x``, by arrow name."""
    out: dict[str, bool] = {}
    if isinstance(x, DisplayClass):
        cc = tr.dmc_to_compcat(x)
        out["dmc<->compcat"] = check_compcat(cc).ok and tr.compcat_to_dmc(cc) == x
    elif isinstance(x, FinPresheaf):
        m = elements_roundtrip_iso(x)
        p = grothendieck(x)
        out["presheaf<->fibration"] = (check_presheaf_map(m).ok and m.is_iso()
                                       and is_iso_over(fibration_roundtrip_iso(p), grothendieck(
                                           fibration_to_presheaf(p)), p))
    elif isinstance(x, CompCat):
        if is_discrete_fibration(x.p):
            _, iso = tr.compcat_roundtrip(x)
            out["compcat<->cwa"] = tr.is_strict_iso(iso)
        if classify(x)["subcategorical"]:
            back = tr.dmc_to_compcat(tr.compcat_to_dmc(x), x.point)
            sub, unit = tr.subcategorize(x)
            out["compcat<->dmc"] = back == sub and tr.is_strict_iso(unit)
    elif isinstance(x, CwA):
        out.update(_cwa_checks(x))
    elif isinstance(x, CwF):
        w2, tm = tr.cwf_natmod_roundtrip(x)
        out["cwf<->natmod"] = check_natmod(tr.cwf_to_natmod(x)).ok and tr.cwf_tm_iso(x, w2, tm)
        w3, tm = tr.cwf_roundtrip(x)
        out["cwf<->cwa"] = tr.cwf_tm_iso(x, w3, tm)
    elif isinstance(x, NaturalModel):
        n2, tm = tr.natmod_roundtrip(x)
        out["natmod<->cwf"] = tr.natmod_iso(x, n2, tm)
    elif isinstance(x, ContextualCategory):
        a = tr.cxlcat_to_cwa(x)
        out["cxlcat<->cwa"] = check_cwa(a).ok and tr.cwa_to_cxlcat(a) == x
    return out


def _cwa_checks(a: CwA) -> dict[str, bool]:
    out = {}
    b, ren = tr.cwa_roundtrip(a)
    out["cwa<->compcat"] = tr.cwa_iso(a, b, ren)
    w = tr.cwa_to_cwf(a)
    w2, tm = tr.cwf_roundtrip(w)
    out["cwa<->cwf"] = check_cwf(w).ok and tr.cwf_to_cwa(w) == a and tr.cwf_tm_iso(w, w2, tm)
    n = tr.cwf_to_natmod(w)
    w3, tm = tr.cwf_natmod_roundtrip(w)
    n2, tm2 = tr.natmod_roundtrip(n)
    out["cwf<->natmod"] = (check_natmod(n).ok and tr.cwf_tm_iso(w, w3, tm)
                           and tr.natmod_iso(n, n2, tm2))
    root = terminal_object(a.base)
    if root is not None and is_contextual(tr.cwa_to_compcat(a, root)):
        x = tr.cwa_to_cxlcat(a)
        back = tr.cxlcat_to_cwa(x)
        ren = {g: {A: a.ext[(g, A)] for A in a.Ty.at[g]} for g in a.base.objects}
        out["cwa<->cxlcat"] = check_cxlcat(x).ok and tr.cwa_iso(a, back, ren)
    return out


def roundtrip_suite(instances: Iterable[tuple[str, Any]]) -> dict[str, Any]:
    """Run every applicable round trip; per arrow, counts and the smallest failing instance."""
    arrows: dict[str, dict[str, Any]] = {}
    for label, x in instances:
        for arrow, ok in roundtrip_checks(x).items():
            r = arrows.setdefault(arrow, {"passed": 0, "failed": 0, "minimal_failure": None,
                                          "_size": None})
            if ok:
                r["passed"] += 1
            else:
                r["failed"] += 1
                s = _size(x)
                if r["_size"] is None or s < r["_size"]:
                    r["minimal_failure"], r["_size"] = label, s
    for r in arrows.values():
        r.pop("_size")
    return {"arrows": dict(sorted(arrows.items())),
            "ok": all(r["failed"] == 0 for r in arrows.values())}
