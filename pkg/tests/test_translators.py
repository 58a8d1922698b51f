from itertools import combinations

import pytest

from catsem import instances as I
from catsem import translators as tr
from catsem.compcat import (check_compcat, check_map, classify, compose_maps, is_contextual,
                            trivial_compcat)
from catsem.errors import (NotContextual, NotDiscrete, NotFull, NotLex, NotSubcategorical,
                           SliceInfinite)
from catsem.fincat import (check_functor, functor_report, is_lex, limiting_cones, terminal_object)
from catsem.generators import chain, discrete_category, indiscrete_category, powerset_lattice
from catsem.structures import (ContextualCategory, DisplayClass, NaturalModel, check_clan, check_cwa,
                               check_cwf, check_cxlcat, check_dmc, check_natmod, is_clan_map,
                               is_lex_functor, preserves_display, universe_cwa)

COMPCATS = I.generated_compcats()
DMCS = I.generated_dmcs()
CWAS = I.generated_cwas()


def _label(xs):
    return [x[0] for x in xs]


# -- display classes and comprehension categories ----------------------------------------

@pytest.mark.parametrize("label,d", DMCS, ids=_label(DMCS))
def test_dmc_compcat_roundtrip(label, d):
    cc = tr.dmc_to_compcat(d)
    assert check_compcat(cc).ok
    flags = classify(cc)
    assert flags["full"] and flags["subcategorical"] and flags["replete"]
    assert tr.compcat_to_dmc(cc) == d


@pytest.mark.parametrize("label,cc", COMPCATS, ids=_label(COMPCATS))
def test_fullify(label, cc):
    out, unit = tr.fullify(cc)
    assert check_compcat(out).ok and classify(out)["full"]
    assert check_map(unit, require_strict=True).ok
    assert functor_report(unit.Fbar).ess_surjective
    if classify(cc)["full"]:
        assert functor_report(unit.Fbar).equivalence


@pytest.mark.parametrize("label,cc", COMPCATS, ids=_label(COMPCATS))
def test_subcategorize_on_full_and_rejects_non_full(label, cc):
    if not classify(cc)["full"]:
        with pytest.raises(NotFull):
            tr.subcategorize(cc)
        return
    out, unit = tr.subcategorize(cc)
    assert classify(out)["subcategorical"] and check_map(unit, require_strict=True).ok
    assert functor_report(unit.Fbar).equivalence


def test_compcat_to_dmc_rejects_non_subcategorical():
    cc = dict(COMPCATS)["over_point:indiscrete2"]
    with pytest.raises(NotSubcategorical):
        tr.compcat_to_dmc(cc)


def _brute_replete(C, D):
    """Arrows a with an iso square to some display arrow, by enumerating squares."""
    out = set(D)
    for a in C.morphisms:
        for d in D:
            for t in C.hom(C.src[d], C.src[a]):
                for b in C.hom(C.dst[d], C.dst[a]):
                    if C.is_iso(t) and C.is_iso(b) and C.comp(b, d) == C.comp(a, t):
                        out.add(a)
    return out


@pytest.mark.parametrize("label,d", DMCS, ids=_label(DMCS))
def test_repletion_matches_definition(label, d):
    C = d.base
    seed = frozenset(sorted(d.display)[:1])
    got, unit = tr.repletion(DisplayClass(C, seed))
    assert set(got.display) == _brute_replete(C, seed)
    assert tr.repletion(got)[0] == got
    assert functor_report(unit).equivalence


def test_repletion_of_counterexample_target():
    d = I.counterexample_target()
    r, _ = tr.repletion(d)
    assert check_dmc(r).ok and {"1>2:1", "1p>2:0"} <= r.display


def _closed(C, D):
    return (all(C.identity[o] in D for o in C.objects)
            and all(C.comp(e, f) in D for e in D for f in D if C.src[e] == C.dst[f])
            and _brute_replete(C, D) == set(D))


@pytest.mark.parametrize("C", [chain(3), powerset_lattice(1), indiscrete_category(["a", "b"])],
                         ids=["chain3", "bool1", "indiscrete2"])
def test_comp_closure_is_least_closed_class(C):
    mors = sorted(C.morphisms)
    closed = [set(s) for k in range(len(mors) + 1) for s in combinations(mors, k) if _closed(C, s)]
    for seed in [()] + [(m,) for m in mors]:
        got, _ = tr.comp_closure(DisplayClass(C, frozenset(seed)))
        want = min((s for s in closed if set(seed) <= s), key=len)
        assert set(got.display) == want
        assert all(want <= s for s in closed if set(seed) <= s)


def test_chain_partial_closure():
    d = I.chain_partial()
    closed, unit = tr.comp_closure(d)
    assert "0<=2" in closed.display and check_dmc(closed).ok
    assert preserves_display(unit, d, closed)


# -- lex categories, clans, separated core -------------------------------------------------

def test_lex_to_clan():
    for _, C in I.meet_semilattices():
        assert check_clan(tr.lex_to_clan(C)).ok
    with pytest.raises(NotLex):
        tr.lex_to_clan(discrete_category(["a", "b"]))


@pytest.mark.parametrize("name,C", I.meet_semilattices(), ids=_label(I.meet_semilattices()))
def test_sep_core_of_lex_clan(name, C):
    d = tr.lex_to_clan(C)
    core, inc = tr.sep_core(d)
    assert is_lex(core) and check_functor(inc).ok
    assert is_clan_map(inc, tr.lex_to_clan(core), d) and is_lex_functor(inc)


@pytest.mark.parametrize("label,d", DMCS, ids=_label(DMCS))
def test_separated_objects_independent_of_pullback_choice(label, d):
    C = d.base
    t = terminal_object(C)
    if t is None:
        return
    counts = [len(limiting_cones(C, C.hom(y, t)[0], C.hom(y, t)[0])) for y in C.objects]
    base = tr.separated_objects(d, 0)
    for k in range(1, min(counts)):
        assert tr.separated_objects(d, k) == base


def test_separated_objects_permuted_choice_on_indiscrete():
    C = indiscrete_category(["a", "b"])
    d = DisplayClass(C, frozenset(C.morphisms))
    assert tr.diagonal(C, "a", 0) != tr.diagonal(C, "a", 1)
    assert tr.separated_objects(d, 0) == tr.separated_objects(d, 1) == ["a", "b"]
    assert tr.separated_objects(DisplayClass(C, frozenset()), 1) == []


# -- contextual core ----------------------------------------------------------------------

@pytest.mark.parametrize("label,cc", I.finite_core_targets(), ids=_label(I.finite_core_targets()))
def test_cxl_core_finite(label, cc):
    core, counit = tr.cxl_core(cc)
    assert is_contextual(core) and check_map(counit, require_strict=True).ok
    assert counit.strictly_pointed


def test_cxl_core_infinite():
    with pytest.raises(SliceInfinite):
        tr.cxl_core(trivial_compcat(chain(2), "1"))


def test_slice_counit_composes():
    cc = I.finite_core_targets()[0][1]
    core, counit = tr.slice_at(cc, cc.point)
    core2, counit2 = tr.cxl_core(core)
    assert check_map(compose_maps(counit, counit2)).ok


# -- CwA, CwF, natural models ------------------------------------------------------------

@pytest.mark.parametrize("label,a", CWAS, ids=_label(CWAS))
def test_cwa_compcat_roundtrip(label, a):
    cc = tr.cwa_to_compcat(a)
    b, rename = tr.cwa_roundtrip(a)
    assert check_cwa(b).ok and tr.cwa_iso(a, b, rename)
    out, iso = tr.compcat_roundtrip(cc)
    assert tr.is_strict_iso(iso)


def test_compcat_to_cwa_needs_discrete():
    cc = trivial_compcat(powerset_lattice(1))
    with pytest.raises(NotDiscrete):
        tr.compcat_to_cwa(cc)


@pytest.mark.parametrize("label,a", CWAS, ids=_label(CWAS))
def test_cwf_and_natmod_roundtrips(label, a):
    w = tr.cwa_to_cwf(a)
    assert tr.cwf_to_cwa(w) == a
    w2, tm = tr.cwf_roundtrip(w)
    assert tr.cwf_tm_iso(w, w2, tm)
    n = tr.cwf_to_natmod(w)
    assert check_natmod(n).ok
    n2, tm = tr.natmod_roundtrip(n)
    assert tr.natmod_iso(n, n2, tm)
    w3, tm = tr.cwf_natmod_roundtrip(w)
    assert check_cwf(w3).ok and tr.cwf_tm_iso(w, w3, tm)


@pytest.mark.parametrize("label,a", CWAS, ids=_label(CWAS))
def test_natmod_without_chosen_reps(label, a):
    n = tr.cwf_to_natmod(tr.cwa_to_cwf(a))
    bare = NaturalModel(n.base, n.TyP, n.TmP, n.p)
    w = tr.natmod_to_cwf(bare)
    assert check_cwf(w).ok
    # representing objects are unique up to iso; in a skeletal base they agree exactly
    if all(len([y for y in n.base.objects if n.base.isomorphic(x, y)]) == 1 for x in n.base.objects):
        assert {k: v for k, v in w.cwa.ext.items()} == a.ext


# -- contextual categories ---------------------------------------------------------------

def test_cxlcat_cwa_roundtrip():
    from catsem.generators import terminal_category
    x = ContextualCategory(terminal_category("r"), "r", {}, {})
    assert check_cxlcat(x).ok
    a = tr.cxlcat_to_cwa(x)
    assert tr.cwa_to_cxlcat(a) == x


def test_cwa_to_cxlcat_rejects_non_contextual():
    with pytest.raises(NotContextual):
        tr.cwa_to_cxlcat(universe_cwa(chain(2), "1<=1"))
