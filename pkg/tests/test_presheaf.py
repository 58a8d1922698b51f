import pytest
from hypothesis import given

from catsem.errors import NotDiscrete
from catsem.fincat import arrow_category, functor_report, identity_functor
from catsem.generators import chain, discrete_category, poset_category, powerset_lattice, terminal_category
from catsem.presheaf import (FinPresheaf, PresheafMap, check_presheaf, check_presheaf_map,
                             elements_roundtrip_iso, fibration_roundtrip_iso, fibration_to_presheaf,
                             grothendieck, identity_map, is_iso_over, is_representable,
                             presheaf_pullback, terminal_presheaf, yoneda, yoneda_map)
from catsem.fibration import fibration_report

from conftest import posets, presheaves


def test_yoneda_examples():
    P = yoneda(terminal_category("*"), "*")
    assert P.size() == 1
    Q = yoneda(chain(2), "1")
    assert len(Q.at["0"]) == len(Q.at["1"]) == 1


@given(posets())
def test_yoneda_counts_and_validity(C):
    for g in C.objects:
        P = yoneda(C, g)
        assert check_presheaf(P).ok
        assert all(len(P.at[d]) == len(C.hom(d, g)) for d in C.objects)
        found = is_representable(P)
        assert found is not None and C.isomorphic(found[0], g)
        assert check_presheaf_map(found[1]).ok and found[1].is_iso()


@given(presheaves())
def test_generated_presheaves_valid(P):
    assert check_presheaf(P).ok


def test_broken_presheaf_rejected():
    C = chain(3)
    P = terminal_presheaf(C)
    act = dict(P.act)
    at = {o: list(v) for o, v in P.at.items()}
    at["0"] = ["x", "y"]
    act = {(f, e): ("x" if C.src[f] == "0" else e) for (f, e) in act}
    act[("0<=0", "x")], act[("0<=0", "y")] = "x", "y"
    act[("0<=1", "*")] = "x"
    act[("0<=2", "*")] = "y"   # not the composite of 0<=1 then 1<=2
    assert not check_presheaf(FinPresheaf(C, at, act)).ok


def test_grothendieck_of_terminal_is_base():
    C = powerset_lattice(2)
    p = grothendieck(terminal_presheaf(C))
    r = functor_report(p)
    assert r.equivalence and r.injective_on_objects
    assert len(p.dom.objects) == len(C.objects) and len(p.dom.morphisms) == len(C.morphisms)


@given(posets())
def test_grothendieck_of_yoneda_is_slice(C):
    for g in C.objects:
        p = grothendieck(yoneda(C, g))
        assert len(p.dom.objects) == sum(len(C.hom(d, g)) for d in C.objects)


@given(presheaves())
def test_grothendieck_round_trips(P):
    p = grothendieck(P)
    rep = fibration_report(p)
    assert rep["fibration"] and rep["discrete"] and rep["splittable"]
    m = elements_roundtrip_iso(P)
    assert check_presheaf_map(m).ok and m.is_iso()
    Q = fibration_to_presheaf(p)
    assert all(len(Q.at[o]) == len(P.at[o]) for o in P.base.objects)
    F = fibration_roundtrip_iso(p)
    assert is_iso_over(F, grothendieck(fibration_to_presheaf(p)), p)


def test_fibration_to_presheaf_examples():
    C = chain(3)
    P = fibration_to_presheaf(identity_functor(C))
    assert all(len(P.at[o]) == 1 for o in C.objects)
    with pytest.raises(NotDiscrete):
        fibration_to_presheaf(arrow_category(powerset_lattice(1)).cod_fn)


def test_representable_examples():
    T = terminal_category("*")
    two = FinPresheaf(T, {"*": ["a", "b"]}, {("*<=*", "a"): "a", ("*<=*", "b"): "b"})
    assert is_representable(two) is None
    # empty presheaf on the discrete category: no object has empty homs to itself
    D = discrete_category(["a", "b"])
    assert is_representable(FinPresheaf(D, {}, {})) is None


def test_representable_least_object():
    C = poset_category([], ["a"])
    assert is_representable(yoneda(C, "a"))[0] == "a"


@given(presheaves(), presheaves())
def test_pullback_cardinality(P, _):
    C = P.base
    T = terminal_presheaf(C)
    bang = PresheafMap(P, T, {o: {e: "*" for e in P.at[o]} for o in C.objects})
    Q, pa, pb = presheaf_pullback(bang, bang)
    for o in C.objects:
        assert len(Q.at[o]) == len(P.at[o]) ** 2
    assert check_presheaf(Q).ok and check_presheaf_map(pa).ok and check_presheaf_map(pb).ok
    Q1, a1, _ = presheaf_pullback(identity_map(P), identity_map(P))
    assert all(len(Q1.at[o]) == len(P.at[o]) for o in C.objects)


def test_pullback_of_disjoint_fibers_is_empty():
    T = terminal_category("*")
    A = FinPresheaf(T, {"*": ["a"]}, {("*<=*", "a"): "a"})
    B = FinPresheaf(T, {"*": ["b"]}, {("*<=*", "b"): "b"})
    Cp = FinPresheaf(T, {"*": ["x", "y"]}, {("*<=*", "x"): "x", ("*<=*", "y"): "y"})
    f = PresheafMap(A, Cp, {"*": {"a": "x"}})
    g = PresheafMap(B, Cp, {"*": {"b": "y"}})
    Q, _, _ = presheaf_pullback(f, g)
    assert Q.size() == 0


@given(posets(3))
def test_pullback_of_representables_along_representable_is_representable(C):
    # y(a) -> y(c) <- y(b) with c terminal: the pullback is y(a x b) when the meet exists
    from catsem.fincat import is_lex, pullback
    if not is_lex(C):
        return
    t = C.objects[-1]
    for a in C.objects:
        for b in C.objects:
            fa = [f for f in C.hom(a, t)]
            fb = [f for f in C.hom(b, t)]
            if not fa or not fb or pullback(C, fa[0], fb[0]) is None:
                continue
            Y = yoneda(C, t)
            f = yoneda_map(Y, a, fa[0])
            g = yoneda_map(Y, b, fb[0])
            Q, _, _ = presheaf_pullback(f, g)
            assert is_representable(Q) is not None
