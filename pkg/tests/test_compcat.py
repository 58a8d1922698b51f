import pytest

from catsem import instances as I
from catsem import translators as tr
from catsem.compcat import (CompCat, CompCatMap, CompCatTransformation, check_compcat,
                            check_map, check_transformation, classify, compcat_over_point,
                            compose_maps, contextual_slice, enumerate_maps,
                            enumerate_transformations, identity_map, identity_transformation,
                            is_contextual, strictify_contextual_map, trivial_compcat)
from catsem.errors import SliceInfinite
from catsem.fincat import FinCategory, FinFunctor, arrow_category
from catsem.generators import chain, powerset_lattice, terminal_category
from catsem.serialize import emit_document, from_document, parse_document, to_document


COMPCATS = I.generated_compcats()


# -- validation and classification ------------------------------------------------------

def test_trivial_compcat_over_lex():
    cc = trivial_compcat(powerset_lattice(2), point="11")
    assert check_compcat(cc).ok
    flags = classify(cc)
    for k in ("trivial", "full", "subcategorical", "replete", "comp_closed", "rooted"):
        assert flags[k] is True, k


def test_finset_injections_flags():
    cc = tr.dmc_to_compcat(I.finset2_injections())
    assert check_compcat(cc).ok
    flags = classify(cc)
    assert flags["full"] and flags["subcategorical"] and flags["replete"]
    assert not flags["trivial"] and not flags["discrete"]
    # the fiber over 2 has a non-identity map: the swap square between id_2 and itself
    fiber = [A for A in cc.total.objects if cc.p.obj_map[A] == "2"]
    assert any(not cc.total.is_identity(m) for m in cc.total.morphisms
               if cc.total.src[m] in fiber and cc.p.mor_map[m] == "2>2:01")


def test_cwa_compcat_discrete_and_split():
    for _, a in I.generated_cwas():
        flags = classify(tr.cwa_to_compcat(a))
        assert flags["discrete"] and flags["split"]


def test_cartesian_not_pullback():
    # identity p on the chain 0 < 1 < 2; chi(1) = 0<=1 over 1 and chi(2) = id_2,
    # so chi(1<=2) is the square 0<=1 -> 2<=2 over 1<=2, not a pullback
    C = chain(3)
    chi_obj = {"0": "0<=0", "1": "0<=1", "2": "2<=2"}
    tops = {"0<=0": "0<=0", "1<=1": "0<=0", "2<=2": "2<=2", "0<=1": "0<=0",
            "0<=2": "0<=2", "1<=2": "0<=2"}
    cc = CompCat.build(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms},
                       chi_obj, tops)
    rep = check_compcat(cc)
    assert "CartesianNotPullback" in rep.codes
    assert ("1<=2",) in [v.witness for v in rep.violations]


def test_type_at_point_without_reindexing_is_not_fibration():
    # one type over 1 and none over 0: nothing lies over 0<=1
    C = chain(2)
    T = terminal_category("A")
    cc = CompCat.build(C, T, {"A": "1"}, {"A<=A": "1<=1"}, {"A": "0<=1"}, {"A<=A": "0<=0"})
    assert "NotAFibration" in check_compcat(cc).codes


@pytest.mark.parametrize("label,cc", COMPCATS, ids=[c[0] for c in COMPCATS])
def test_generated_compcats_valid_and_classify_stable(label, cc):
    assert check_compcat(cc).ok
    flags = classify(cc)
    assert flags == classify(cc)
    back = from_document(parse_document(emit_document(to_document(cc))))
    assert classify(back) == flags
    if flags["subcategorical"]:
        assert flags["full"]
    if flags["trivial"]:
        assert flags["replete"] and flags["comp_closed"]


# -- contextual slices ------------------------------------------------------------------

def test_slice_with_no_types_is_point():
    _, cc = I.contextual_instances()[0]
    s = contextual_slice(cc, cc.point)
    assert len(s.base.objects) == 1 and len(s.total.objects) == 0


def test_slice_of_self_extending_type_is_infinite():
    cc = compcat_over_point(terminal_category("A"))
    with pytest.raises(SliceInfinite):
        contextual_slice(cc, cc.base.objects[0])


def test_contextual_instances():
    for _, cc in I.contextual_instances():
        assert is_contextual(cc) and classify(cc)["contextual"]
    for _, cc in I.pointed_targets():
        assert not classify(cc)["contextual"] or not cc.total.objects


# -- maps -------------------------------------------------------------------------------

def test_identity_and_fullify_unit_strict():
    for _, cc in COMPCATS[:10]:
        m = identity_map(cc)
        assert check_map(m, require_strict=True).ok and m.strict
        _, unit = tr.fullify(cc)
        assert check_map(unit, require_strict=True).ok


def test_phi_not_iso():
    cc = trivial_compcat(chain(2))
    arr = arrow_category(chain(2))
    # Fbar sends the type id_1 to 0<=1; its phi must be the non-invertible square 0<=1 -> 1<=1
    om = {"0<=0": "0<=0", "0<=1": "0<=1", "1<=1": "0<=1"}
    mm = {m: arr.lookup(om[arr.squares[m].src], om[arr.squares[m].dst],
                        *_fill(arr, om[arr.squares[m].src], om[arr.squares[m].dst], m))
          for m in arr.cat.morphisms}
    Fbar = FinFunctor(cc.total, cc.total, om, mm)
    phi = {"0<=0": arr.cat.identity["0<=0"], "0<=1": arr.cat.identity["0<=1"],
           "1<=1": arr.lookup("0<=1", "1<=1", "0<=1", "1<=1")}
    F = FinFunctor(cc.base, cc.base, {"0": "0", "1": "1"}, {m: m for m in cc.base.morphisms})
    rep = check_map(CompCatMap(cc, cc, F, Fbar, phi))
    assert "PhiNotIso" in rep.codes


def _fill(arr, a, b, m):
    sq = arr.squares[m]
    C = arr.base
    tops = C.hom(C.src[a], C.src[b])
    return tops[0], sq.bottom


def test_enumerate_maps_terminal():
    _, cc = I.contextual_instances()[0]
    assert len(enumerate_maps(cc, cc)) == 1


SMALL = [c for c in COMPCATS if len(c[1].total.objects) <= 5]


@pytest.mark.parametrize("label,cc", SMALL, ids=[c[0] for c in SMALL])
def test_strict_maps_subset_of_pseudo(label, cc):
    pseudo = enumerate_maps(cc, cc, budget=10**5)
    strict = enumerate_maps(cc, cc, strict_only=True, budget=10**5)
    keys = {m._key() for m in pseudo}
    assert all(m._key() in keys for m in strict)
    assert all(check_map(m).ok for m in pseudo)
    assert all(check_map(m, require_strict=True).ok for m in strict)


# -- transformations --------------------------------------------------------------------

def test_identity_transformation_valid():
    for _, cc in COMPCATS[:10]:
        assert check_transformation(identity_transformation(identity_map(cc))).ok


def _swap_map(dd):
    """The automorphism of the pointed indiscrete compcat exchanging a and b."""
    C = dd.base
    om = {"a": "b", "b": "a"}
    F = FinFunctor(C, C, om, {m: f"{om[C.src[m]]}~{om[C.dst[m]]}" for m in C.morphisms})
    Fbar = FinFunctor(dd.total, dd.total, {}, {})
    return CompCatMap(dd, dd, F, Fbar, {}, "b~a")


def test_whiskered_transformation_valid():
    _, src = I.contextual_instances()[0]
    dd = dict(I.pointed_targets())["indiscrete2"]
    maps = enumerate_maps(src, dd, pointed=True)
    M, N = maps[0], maps[1]
    cells = enumerate_transformations(M, N, pointed=True)
    assert len(cells) == 1
    t = cells[0]
    K = _swap_map(dd)
    assert check_map(K).ok
    KM, KN = compose_maps(K, M), compose_maps(K, N)
    w = CompCatTransformation(KM, KN, {o: K.F.mor_map[a] for o, a in t.alpha.items()},
                              {A: K.Fbar.mor_map[a] for A, a in t.alphabar.items()})
    assert check_transformation(w).ok


def test_coherence_failure():
    # pi: X -> G with an automorphism s of X over G; one type over G with chi = pi
    C = FinCategory(["G", "X"], {"1G": ("G", "G"), "1X": ("X", "X"), "s": ("X", "X"),
                                 "pi": ("X", "G")},
                    {"G": "1G", "X": "1X"},
                    {("1G", "1G"): "1G", ("1X", "1X"): "1X", ("s", "1X"): "s", ("1X", "s"): "s",
                     ("s", "s"): "1X", ("pi", "1X"): "pi", ("pi", "s"): "pi", ("1G", "pi"): "pi"})
    T = terminal_category("A")
    cc = CompCat.build(C, T, {"A": "G"}, {"A<=A": "1G"}, {"A": "pi"}, {"A<=A": "1X"})
    M = identity_map(cc)
    good = CompCatTransformation(M, M, {"G": "1G", "X": "1X"}, {"A": "A<=A"})
    bad = CompCatTransformation(M, M, {"G": "1G", "X": "s"}, {"A": "A<=A"})
    assert check_transformation(good).ok
    assert check_transformation(bad).codes == ["CoherenceFailure"]


# -- strictification --------------------------------------------------------------------

def test_strictify_strict_input_unchanged():
    _, src = I.contextual_instances()[0]
    for _, dd in I.pointed_targets():
        for m in enumerate_maps(src, dd, strictly_pointed=True, strict_only=True):
            s, t = strictify_contextual_map(m)
            assert s == m
            assert t.alpha == identity_transformation(m).alpha


def test_strictify_absorbs_point_iso():
    _, src = I.contextual_instances()[0]
    dd = dict(I.pointed_targets())["indiscrete2"]
    twisted = [m for m in enumerate_maps(src, dd, pointed=True) if not m.strictly_pointed]
    assert twisted
    for m in twisted:
        s, t = strictify_contextual_map(m)
        assert s.strictly_pointed and check_map(s, require_strict=True).ok
        assert check_transformation(t).ok and t.is_invertible()
        s2, _ = strictify_contextual_map(s)
        assert s2 == s


def test_at_most_one_pointed_transformation():
    for _, src in I.contextual_instances():
        for _, dd in I.pointed_targets():
            maps = enumerate_maps(src, dd, pointed=True)
            for M in maps:
                for N in maps:
                    assert len(enumerate_transformations(M, N, pointed=True)) <= 1
