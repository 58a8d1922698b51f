"""Constructions between structure kinds: embeddings, adjoints and round trips.

Every construction names its new ids deterministically from the input ids,
so round trips that hold on the nose can be tested with ``==``.
"""
from __future__ import annotations

from .compcat import (CompCat, CompCatMap, build_slice, check_map, is_contextual,
                      is_isomorphism_map, slice_counit)
from .errors import (NotContextual, NotDiscrete, NotFull, NotLex, NotRepresentable,
                     NotSubcategorical, PreconditionFailed)
from .fibration import is_discrete_fibration, lifts
from .fincat import (Cone, FinCategory, FinFunctor, arrow_category, full_subcategory,
                     functor_report, identity_functor, inclusion_functor, is_lex,
                     limiting_cones, mediating_maps, pair_id, terminal_object)
from .presheaf import (FinPresheaf, PresheafMap, category_of_elements, check_presheaf_map,
                       fibration_to_presheaf, is_representable)
from .structures import (CwA, CwF, ContextualCategory, DisplayClass, NaturalModel,
                         natmod_pullback, representation_map)


# -- display map categories and comprehension categories --------------------------------

def dmc_to_compcat(d: DisplayClass, point: str | None = None) -> CompCat:
    """Display maps as the full subcategory of ``Arr(C)`` they span; ``p = cod``."""
    C = d.base
    arr = arrow_category(C)
    T = full_subcategory(arr.cat, d.display)
    p = FinFunctor(T, C, {a: C.dst[a] for a in T.objects},
                   {m: arr.squares[m].bottom for m in T.morphisms})
    return CompCat(C, T, p, inclusion_functor(T, arr.cat), point)


def _require_subcategorical(cc: CompCat) -> None:
    r = functor_report(cc.chi)
    if not (r.full and r.faithful and r.injective_on_objects):
        raise NotSubcategorical("comprehension functor is not a full subcategory inclusion")


def compcat_to_dmc(cc: CompCat) -> DisplayClass:
    _require_subcategorical(cc)
    return DisplayClass(cc.base, frozenset(cc.chi.obj_map.values()))


def _unit(src: CompCat, dst: CompCat, Fbar: FinFunctor) -> CompCatMap:
    """The strict map that is the identity on the base."""
    pi = src.base.identity[src.point] if src.point is not None else None
    phi = {A: dst.arrows.cat.identity[src.proj(A)] for A in src.total.objects}
    return CompCatMap(src, dst, identity_functor(src.base), Fbar, phi, pi)


def fullify(cc: CompCat) -> tuple[CompCat, CompCatMap]:
    """Identity-on-objects / fully faithful factorisation of ``chi``.

    New type morphisms are ``"<A|sq|B>"`` for each square ``sq : chi A -> chi B``.
    """
    C, T = cc.base, cc.total
    arr = cc.arrows
    chi = cc.chi.obj_map
    name = lambda a, sq, b: f"<{a}|{sq}|{b}>"
    mors, under = {}, {}
    for a in T.objects:
        for b in T.objects:
            for sq in arr.cat.hom(chi[a], chi[b]):
                m = name(a, sq, b)
                mors[m], under[m] = (a, b), sq
    ident = {a: name(a, arr.cat.identity[chi[a]], a) for a in T.objects}
    comp = {}
    for g, (gs, gd) in mors.items():
        for f, (fs, fd) in mors.items():
            if fd == gs:
                comp[(g, f)] = name(fs, arr.cat.compose_table[(under[g], under[f])], gd)
    T2 = FinCategory(T.objects, mors, ident, comp)
    p2 = FinFunctor(T2, C, dict(cc.p.obj_map), {m: arr.squares[under[m]].bottom for m in mors})
    out = CompCat(C, T2, p2, FinFunctor(T2, arr.cat, dict(chi), under), cc.point)
    Fbar = FinFunctor(T, T2, {a: a for a in T.objects},
                      {m: name(T.src[m], cc.chi.mor_map[m], T.dst[m]) for m in T.morphisms})
    return out, _unit(cc, out, Fbar)


def subcategorize(cc: CompCat) -> tuple[CompCat, CompCatMap]:
    """Replace the types of a full compcat by the image of ``chi``."""
    r = functor_report(cc.chi)
    if not (r.full and r.faithful):
        raise NotFull("comprehension functor is not fully faithful")
    out = dmc_to_compcat(DisplayClass(cc.base, frozenset(cc.chi.obj_map.values())), cc.point)
    Fbar = FinFunctor(cc.total, out.total, dict(cc.chi.obj_map), dict(cc.chi.mor_map))
    return out, _unit(cc, out, Fbar)


def replete_class(C: FinCategory, display) -> frozenset[str]:
    """Every arrow isomorphic in ``Arr(C)`` to a display arrow."""
    arr = arrow_category(C)
    out = set(display)
    for sid, sq in arr.squares.items():
        if sq.src in display and arr.cat.is_iso(sid):
            out.add(sq.dst)
    return frozenset(out)


def repletion(x):
    """Close the display maps under isomorphism of arrows.

    Accepts a DisplayClass (unit: identity functor of the base) or a
    subcategorical CompCat (unit: a strict CompCatMap).
    """
    if isinstance(x, DisplayClass):
        return DisplayClass(x.base, replete_class(x.base, x.display)), identity_functor(x.base)
    _require_subcategorical(x)
    D = replete_class(x.base, set(x.chi.obj_map.values()))
    out = dmc_to_compcat(DisplayClass(x.base, D), x.point)
    Fbar = FinFunctor(x.total, out.total, dict(x.chi.obj_map), dict(x.chi.mor_map))
    return out, _unit(x, out, Fbar)


def comp_closure(d: DisplayClass) -> tuple[DisplayClass, FinFunctor]:
    """Joint fixpoint of identities, composition and repletion."""
    C = d.base
    D = set(d.display) | set(C.identity.values())
    while True:
        new = set(D)
        for e in D:
            for f in D:
                if C.src[e] == C.dst[f]:
                    new.add(C.compose_table[(e, f)])
        new = set(replete_class(C, new))
        if new == D:
            break
        D = new
    return DisplayClass(C, frozenset(D)), identity_functor(C)


def lex_to_clan(C: FinCategory) -> DisplayClass:
    if not is_lex(C):
        raise NotLex("category does not have all finite limits")
    return DisplayClass(C, frozenset(C.morphisms))


def diagonal(C: FinCategory, y: str, choice: int = 0) -> str | None:
    """``Y -> Y x Y`` into the ``choice``-th pullback of ``Y -> 1`` along itself."""
    t = terminal_object(C)
    if t is None:
        return None
    g = C.hom(y, t)[0]
    cones = limiting_cones(C, g, g)
    if not cones:
        return None
    i = C.identity[y]
    (m,) = mediating_maps(C, Cone(y, (i, i)), cones[choice])
    return m


def separated_objects(d: DisplayClass, choice: int = 0) -> list[str]:
    return [y for y in d.base.objects if diagonal(d.base, y, choice) in d.display]


def sep_core(d: DisplayClass) -> tuple[FinCategory, FinFunctor]:
    """Full subcategory on the separated objects with its inclusion."""
    core = full_subcategory(d.base, separated_objects(d))
    return core, inclusion_functor(core, d.base)


def cxl_core(cc: CompCat) -> tuple[CompCat, CompCatMap]:
    """The contextual slice at the point with its counit; raises SliceInfinite."""
    if cc.point is None:
        raise PreconditionFailed("compcat is not pointed")
    sl = build_slice(cc, cc.point)
    return sl.cc, slice_counit(sl)


def slice_at(cc: CompCat, gamma: str) -> tuple[CompCat, CompCatMap]:
    sl = build_slice(cc, gamma)
    return sl.cc, slice_counit(sl)


# -- CwA and comprehension categories ----------------------------------------------------

def cwa_to_compcat(a: CwA, point: str | None = None) -> CompCat:
    """Types are the category of elements of ``Ty``; ``chi`` reads off ``p_A`` and ``f.A``."""
    E = category_of_elements(a.Ty)
    chi_obj = {x: a.proj[ga] for x, ga in E.obj_of.items()}
    chi_top = {m: a.ext_mor[fa] for m, fa in E.mor_of.items()}
    return CompCat.build(a.base, E.cat, E.projection.obj_map, E.projection.mor_map,
                         chi_obj, chi_top, point)


def compcat_to_cwa(cc: CompCat) -> CwA:
    if not is_discrete_fibration(cc.p):
        raise NotDiscrete("comprehension category is not discrete")
    Ty = fibration_to_presheaf(cc.p)
    C = cc.base
    ext, proj, ext_mor = {}, {}, {}
    for g in C.objects:
        for A in Ty.at[g]:
            ext[(g, A)], proj[(g, A)] = cc.ext(A), cc.proj(A)
    for f in C.morphisms:
        for A in Ty.at[C.dst[f]]:
            ext_mor[(f, A)] = cc.top(lifts(cc.p, f, A)[0])
    return CwA(C, Ty, ext, proj, ext_mor)


def cwa_iso(a: CwA, b: CwA, rename: dict[str, dict[str, str]]) -> bool:
    """Is ``rename`` (per context, types of ``a`` to types of ``b``) an isomorphism of CwAs?"""
    if a.base != b.base:
        return False
    m = PresheafMap(a.Ty, b.Ty, rename)
    if not check_presheaf_map(m).ok or not m.is_iso():
        return False
    C = a.base
    for g, A in a.types():
        B = rename[g][A]
        if b.ext.get((g, B)) != a.ext[(g, A)] or b.proj.get((g, B)) != a.proj[(g, A)]:
            return False
    for f in C.morphisms:
        for A in a.Ty.at[C.dst[f]]:
            if b.ext_mor.get((f, rename[C.dst[f]][A])) != a.ext_mor[(f, A)]:
                return False
    return True


def cwa_roundtrip(a: CwA) -> tuple[CwA, dict[str, dict[str, str]]]:
    """``compcat_to_cwa(cwa_to_compcat(a))`` with the renaming ``A -> "(G,A)"``."""
    b = compcat_to_cwa(cwa_to_compcat(a))
    return b, {g: {A: pair_id(g, A) for A in a.Ty.at[g]} for g in a.base.objects}


def compcat_roundtrip(cc: CompCat) -> tuple[CompCat, CompCatMap]:
    """``cwa_to_compcat(compcat_to_cwa(cc))`` with the strict isomorphism back to ``cc``."""
    out = cwa_to_compcat(compcat_to_cwa(cc), cc.point)
    E = category_of_elements(fibration_to_presheaf(cc.p))
    Fbar = FinFunctor(out.total, cc.total, {x: A for x, (_, A) in E.obj_of.items()},
                      {m: lifts(cc.p, f, A)[0] for m, (f, A) in E.mor_of.items()})
    return out, _unit(out, cc, Fbar)


def is_strict_iso(m: CompCatMap) -> bool:
    return check_map(m, require_strict=True).ok and is_isomorphism_map(m)


# -- CwA and CwF -----------------------------------------------------------------------

def sections(C: FinCategory, p: str) -> list[str]:
    return [s for s in C.hom(C.dst[p], C.src[p])
            if C.compose_table[(p, s)] == C.identity[C.dst[p]]]


def _pullback_fill(a: CwA, f: str, A: str, leg: str) -> str:
    """The map into ``G'.f*A`` induced by ``leg`` into ``G.A`` and the identity of ``G'``."""
    C = a.base
    g2 = C.src[f]
    B = a.Ty.act[(f, A)]
    target = Cone(a.ext[(g2, B)], (a.ext_mor[(f, A)], a.proj[(g2, B)]))
    (m,) = mediating_maps(C, Cone(C.src[leg], (leg, C.identity[C.src[leg]])), target)
    return m


def cwa_to_cwf(a: CwA) -> CwF:
    """Terms are sections of the display maps; ``var`` is the diagonal section."""
    C = a.base
    E = category_of_elements(a.Ty)
    at = {pair_id(g, A): sections(C, a.proj[(g, A)]) for g, A in a.types()}
    act = {}
    for m, (f, A) in E.mor_of.items():
        for s in at[pair_id(C.dst[f], A)]:
            act[(m, s)] = _pullback_fill(a, f, A, C.compose_table[(s, f)])
    Tm = FinPresheaf(E.cat, at, act)
    var = {}
    for g, A in a.types():
        p = a.proj[(g, A)]
        var[(g, A)] = _pullback_fill(a, p, A, C.identity[a.ext[(g, A)]])
    return CwF(a, Tm, var)


def cwf_to_cwa(w: CwF) -> CwA:
    return w.cwa


def cwf_tm_iso(w1: CwF, w2: CwF, tm_map: dict[str, dict[str, str]]) -> bool:
    """Same CwA, ``tm_map`` a natural isomorphism of term presheaves carrying ``var`` to ``var``."""
    if w1.cwa != w2.cwa:
        return False
    m = PresheafMap(w1.Tm, w2.Tm, tm_map)
    if not check_presheaf_map(m).ok or not m.is_iso():
        return False
    a = w1.cwa
    for g, A in a.types():
        home = pair_id(a.ext[(g, A)], a.Ty.act[(a.proj[(g, A)], A)])
        if tm_map[home][w1.var[(g, A)]] != w2.var[(g, A)]:
            return False
    return True


def cwf_roundtrip(w: CwF) -> tuple[CwF, dict[str, dict[str, str]]]:
    """``cwa_to_cwf(cwf_to_cwa(w))`` with the term bijection from the representation property."""
    a = w.cwa
    w2 = cwa_to_cwf(a)
    C = a.base
    tm_map: dict[str, dict[str, str]] = {x: {} for x in w.Tm.at}
    for g, A in a.types():
        inv = {v: f for f, v in representation_map(w, g, A, g).items()}
        for t in w.tm(g, A):
            tm_map[pair_id(g, A)][t] = inv[(C.identity[g], t)]
    return w2, tm_map


# -- CwF and natural models --------------------------------------------------------------

def cwf_to_natmod(w: CwF) -> NaturalModel:
    a = w.cwa
    C = a.base
    at = {g: [pair_id(A, t) for A in a.Ty.at[g] for t in w.tm(g, A)] for g in C.objects}
    act = {}
    for f in C.morphisms:
        for A in a.Ty.at[C.dst[f]]:
            B = a.Ty.act[(f, A)]
            for t in w.tm(C.dst[f], A):
                act[(f, pair_id(A, t))] = pair_id(B, w.Tm.act[(pair_id(f, A), t)])
    TmP = FinPresheaf(C, at, act)
    p = PresheafMap(TmP, a.Ty, {g: {pair_id(A, t): A for A in a.Ty.at[g] for t in w.tm(g, A)}
                                for g in C.objects})
    reps = {}
    for g, A in a.types():
        pr = a.proj[(g, A)]
        reps[(g, A)] = (a.ext[(g, A)], pair_id(pr, pair_id(a.Ty.act[(pr, A)], w.var[(g, A)])))
    return NaturalModel(C, a.Ty, TmP, p, reps)


def natmod_to_cwf(n: NaturalModel) -> CwF:
    """Ty is TyP, terms of ``A`` are the fiber of ``p`` over ``A``, extensions from representations."""
    C, Ty, TmP = n.base, n.TyP, n.TmP
    ext, proj, v = {}, {}, {}
    for g in C.objects:
        for A in Ty.at[g]:
            P, pa, pb = natmod_pullback(n, g, A)
            if n.chosen_reps and (g, A) in n.chosen_reps:
                x, u = n.chosen_reps[(g, A)]
            else:
                r = is_representable(P)
                if r is None:
                    raise NotRepresentable(f"pullback along ({g}, {A}) is not representable")
                x, iso = r
                u = iso.components[x][C.identity[x]]
            ext[(g, A)], proj[(g, A)], v[(g, A)] = x, pa.components[x][u], pb.components[x][u]
    ext_mor = {}
    for f in C.morphisms:
        g2, g = C.src[f], C.dst[f]
        for A in Ty.at[g]:
            B = Ty.act[(f, A)]
            want = C.compose_table[(f, proj[(g2, B)])]
            ks = [k for k in C.hom(ext[(g2, B)], ext[(g, A)])
                  if C.compose_table[(proj[(g, A)], k)] == want
                  and TmP.act[(k, v[(g, A)])] == v[(g2, B)]]
            if len(ks) != 1:
                raise NotRepresentable(f"no unique f.A for ({f}, {A})")
            ext_mor[(f, A)] = ks[0]
    a = CwA(C, Ty, ext, proj, ext_mor)
    E = category_of_elements(Ty)
    at = {pair_id(g, A): [e for e in TmP.at[g] if n.p.components[g][e] == A]
          for g in C.objects for A in Ty.at[g]}
    act = {(m, e): TmP.act[(f, e)] for m, (f, A) in E.mor_of.items()
           for e in at[pair_id(C.dst[f], A)]}
    return CwF(a, FinPresheaf(E.cat, at, act), v)


def natmod_iso(n1: NaturalModel, n2: NaturalModel, tm_map: dict[str, dict[str, str]]) -> bool:
    """Same TyP, ``tm_map`` a natural isomorphism ``TmP1 -> TmP2`` over TyP."""
    if n1.TyP != n2.TyP:
        return False
    m = PresheafMap(n1.TmP, n2.TmP, tm_map)
    if not check_presheaf_map(m).ok or not m.is_iso():
        return False
    return all(n2.p.components[g][tm_map[g][e]] == n1.p.components[g][e]
               for g in n1.base.objects for e in n1.TmP.at[g])


def natmod_roundtrip(n: NaturalModel) -> tuple[NaturalModel, dict[str, dict[str, str]]]:
    n2 = cwf_to_natmod(natmod_to_cwf(n))
    return n2, {g: {e: pair_id(n.p.components[g][e], e) for e in n.TmP.at[g]}
                for g in n.base.objects}


def cwf_natmod_roundtrip(w: CwF) -> tuple[CwF, dict[str, dict[str, str]]]:
    w2 = natmod_to_cwf(cwf_to_natmod(w))
    E = category_of_elements(w.cwa.Ty)
    return w2, {x: {t: pair_id(E.obj_of[x][1], t) for t in ts} for x, ts in w.Tm.at.items()}


# -- contextual categories ---------------------------------------------------------------

def cxlcat_to_cwa(x: ContextualCategory) -> CwA:
    """Types over ``G`` are the children of ``G``; reindexing is the chosen pullback."""
    C = x.base
    at = {g: x.children(g) for g in C.objects}
    act, ext_mor = {}, {}
    for f in C.morphisms:
        for X in at[C.dst[f]]:
            act[(f, X)], ext_mor[(f, X)] = x.chosen_pb[(f, X)]
    ext = {(g, X): X for g in C.objects for X in at[g]}
    proj = {(g, X): x.proj[X] for g in C.objects for X in at[g]}
    return CwA(C, FinPresheaf(C, at, act), ext, proj, ext_mor)


def cwa_to_cxlcat(a: CwA) -> ContextualCategory:
    C = a.base
    root = terminal_object(C)
    if root is None or not is_contextual(cwa_to_compcat(a, root)):
        raise NotContextual("CwA is not contextual over a terminal root")
    parent, proj, chosen = {}, {}, {}
    for g, A in a.types():
        X = a.ext[(g, A)]
        parent[X], proj[X] = g, a.proj[(g, A)]
    for f in C.morphisms:
        g2 = C.src[f]
        for A in a.Ty.at[C.dst[f]]:
            B = a.Ty.act[(f, A)]
            chosen[(f, a.ext[(C.dst[f], A)])] = (a.ext[(g2, B)], a.ext_mor[(f, A)])
    return ContextualCategory(C, root, parent, proj, chosen)
