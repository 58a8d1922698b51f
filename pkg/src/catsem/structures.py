"""Display map categories, clans, CwAs, CwFs, natural models and contextual categories."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .compcat import comp_closed_violation, replete_violation
from .errors import PreconditionFailed, ValidationReport
from .fincat import (Cone, FinCategory, FinFunctor, check_functor, is_limiting,
                     is_pullback_square, is_terminal, limiting_cones, mediating_maps, pair_id, pullback,
                     terminal_object)
from .presheaf import (FinPresheaf, PresheafMap, category_of_elements, check_presheaf,
                       check_presheaf_map, is_representable, presheaf_pullback, yoneda_map)


# -- display map categories ----------------------------------------------------------

@dataclass(eq=False)
class DisplayClass:
    base: FinCategory
    display: frozenset[str]
    chosen_pullbacks: dict[tuple[str, str], Cone] | None = None

    def __post_init__(self):
        self.display = frozenset(self.display)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DisplayClass):
            return NotImplemented
        return (self.display == other.display and self.base == other.base
                and (self.chosen_pullbacks or {}) == (other.chosen_pullbacks or {}))

    def __hash__(self) -> int:
        return hash(self.display)

    def __repr__(self) -> str:
        return f"DisplayClass({len(self.display)} of {len(self.base.morphisms)} maps)"


def display_pullbacks(C: FinCategory, display: frozenset[str], d: str, f: str) -> list[Cone]:
    """Limiting cones over ``(f, d)`` whose leg ``f*d`` (over ``f``) is display."""
    return [c for c in limiting_cones(C, f, d) if c.legs[0] in display]


def check_dmc(d: DisplayClass, require_replete: bool = True) -> ValidationReport:
    rep = ValidationReport("dmc" if require_replete else "sdmc")
    C = d.base
    unknown = sorted(x for x in d.display if x not in C.mor_index)
    for x in unknown:
        rep.add("DanglingReference", f"display map {x!r} is not a morphism", x)
    if unknown:
        return rep
    for disp in sorted(d.display):
        for f in C.into(C.dst[disp]):
            if not display_pullbacks(C, d.display, disp, f):
                rep.add("PullbackMissing", f"no display pullback of {disp!r} along {f!r}", disp, f)
    if d.chosen_pullbacks:
        for (disp, f), cone in sorted(d.chosen_pullbacks.items()):
            if (disp not in d.display or C.dst[f] != C.dst[disp]
                    or not is_limiting(C, f, disp, cone) or cone.legs[0] not in d.display):
                rep.add("PullbackMissing", f"chosen pullback of {disp!r} along {f!r} is invalid", disp, f)
    if require_replete:
        bad = replete_violation(C, set(d.display))
        if bad is not None:
            rep.add("NotReplete", f"{bad[1]!r} is isomorphic to display map {bad[0]!r} but not display",
                    bad[1], bad[0])
    return rep


def validate_dmc(base: FinCategory, display: Iterable[str], require_replete: bool = True,
                 chosen_pullbacks=None) -> DisplayClass:
    d = DisplayClass(base, frozenset(display), chosen_pullbacks)
    check_dmc(d, require_replete).raise_if_failed()
    return d


def check_clan(d: DisplayClass) -> ValidationReport:
    rep = check_dmc(d, require_replete=True)
    rep.kind = "clan"
    if not rep.ok and "DanglingReference" in rep.codes:
        return rep
    C = d.base
    bad = comp_closed_violation(C, set(d.display))
    if bad is not None:
        rep.add("NotCompClosed", f"display maps not closed under identities/composition: {bad}", *bad[1:])
    t = terminal_object(C)
    if t is None:
        rep.add("NoTerminal", "base has no terminal object")
    else:
        for x in C.objects:
            g = C.hom(x, t)[0]
            if g not in d.display:
                rep.add("NonDisplayGlobalMap", f"the map {x} -> 1 is not display", x)
    return rep


def validate_clan(base: FinCategory, display: Iterable[str]) -> DisplayClass:
    d = DisplayClass(base, frozenset(display))
    check_clan(d).raise_if_failed()
    return d


def close_under_pullbacks(base: FinCategory, seed_maps: Iterable[str]) -> DisplayClass:
    """Least class containing the seeds and every pullback of its members."""
    D = set(seed_maps)
    changed = True
    while changed:
        changed = False
        for d in sorted(D):
            for f in base.into(base.dst[d]):
                cones = limiting_cones(base, f, d)
                if not cones:
                    raise PreconditionFailed(f"{d!r} has no pullback along {f!r} (not carrable)")
                for c in cones:
                    if c.legs[0] not in D:
                        D.add(c.legs[0])
                        changed = True
    return DisplayClass(base, frozenset(D))


def preserves_display(F: FinFunctor, d1: DisplayClass, d2: DisplayClass) -> bool:
    """Is ``F`` a map of display map categories: display maps and their pullbacks preserved?"""
    C, C2 = d1.base, d2.base
    if any(F.mor_map[x] not in d2.display for x in d1.display):
        return False
    for disp in d1.display:
        for f in C.into(C.dst[disp]):
            c = pullback(C, f, disp)
            img = Cone(F.obj_map[c.apex], tuple(F.mor_map[l] for l in c.legs))
            if not is_limiting(C2, F.mor_map[f], F.mor_map[disp], img):
                return False
    return True


def is_clan_map(F: FinFunctor, d1: DisplayClass, d2: DisplayClass) -> bool:
    t = terminal_object(d1.base)
    return (t is not None and is_terminal(d2.base, F.obj_map[t])
            and preserves_display(F, d1, d2))


def is_lex_functor(F: FinFunctor) -> bool:
    """Preserves the terminal object and all pullbacks (hence all finite limits)."""
    C = F.dom
    t = terminal_object(C)
    if t is None or not is_terminal(F.cod, F.obj_map[t]):
        return False
    for x in C.objects:
        for f in C.into(x):
            for g in C.into(x):
                c = pullback(C, f, g)
                if c is None:
                    continue
                img = Cone(F.obj_map[c.apex], tuple(F.mor_map[l] for l in c.legs))
                if not is_limiting(F.cod, F.mor_map[f], F.mor_map[g], img):
                    return False
    return True


# -- categories with attributes ---------------------------------------------------------

@dataclass(eq=False)
class CwA:
    """Base, type presheaf, and context extension with its pullback squares.

    Keys are ``(G, A)`` for ``ext``/``proj`` and ``(f, A)`` for ``ext_mor``
    with ``A`` in ``Ty(cod f)``; ``ext_mor[(f, A)] : G'.f*A -> G.A``.
    """

    base: FinCategory
    Ty: FinPresheaf
    ext: dict[tuple[str, str], str]
    proj: dict[tuple[str, str], str]
    ext_mor: dict[tuple[str, str], str]

    def types(self) -> list[tuple[str, str]]:
        return [(g, A) for g in self.base.objects for A in self.Ty.at[g]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CwA):
            return NotImplemented
        return (self.Ty == other.Ty and self.ext == other.ext and self.proj == other.proj
                and self.ext_mor == other.ext_mor)

    def __hash__(self) -> int:
        return hash(self.Ty)


def check_cwa(a: CwA) -> ValidationReport:
    rep = ValidationReport("cwa")
    C = a.base
    rep.extend(check_presheaf(a.Ty))
    if not rep.ok:
        return rep
    for g, A in a.types():
        x, p = a.ext.get((g, A)), a.proj.get((g, A))
        if x not in C.obj_index or p not in C.hom(x, g):
            rep.add("DanglingReference", f"extension of {A!r} at {g!r} is not a map G.A -> G", g, A)
    if not rep.ok:
        return rep
    for f in C.morphisms:
        g2, g = C.src[f], C.dst[f]
        for A in a.Ty.at[g]:
            B = a.Ty.act[(f, A)]
            q = a.ext_mor.get((f, A))
            if q not in C.hom(a.ext[(g2, B)], a.ext[(g, A)]):
                rep.add("DanglingReference", f"f.A missing or mistyped for ({f}, {A})", f, A)
                continue
            if not is_pullback_square(C, q, a.proj[(g2, B)], a.proj[(g, A)], f):
                rep.add("SquareNotPullback", f"square of ({f}, {A}) is not a pullback", f, A)
    if not rep.ok:
        return rep
    for g, A in a.types():
        i = C.identity[g]
        if a.ext_mor[(i, A)] != C.identity[a.ext[(g, A)]]:
            rep.add("NotFunctorial", f"id.A is not the identity at ({g}, {A})", g, A)
    for (f, h), fh in C.compose_table.items():
        # (f . h).A == f.A . h.(f*A)
        for A in a.Ty.at[C.dst[f]]:
            fA = a.Ty.act[(f, A)]
            if a.ext_mor[(fh, A)] != C.compose_table[(a.ext_mor[(f, A)], a.ext_mor[(h, fA)])]:
                rep.add("NotFunctorial", f"extension not functorial at ({f}, {h}) on {A!r}", f, h, A)
    return rep


def validate_cwa(a: CwA) -> CwA:
    check_cwa(a).raise_if_failed()
    return a


def universe_cwa(C: FinCategory, u: str) -> CwA:
    """The CwA with ``Ty(G) = hom(G, U)`` extended by canonical pullbacks of ``u : E -> U``.

    ``C`` must have all pullbacks of ``u``.
    """
    U = C.dst[u]
    at = {g: C.hom(g, U) for g in C.objects}
    act = {(f, A): C.compose_table[(A, f)] for f in C.morphisms for A in at[C.dst[f]]}
    Ty = FinPresheaf(C, at, act)
    ext, proj, top = {}, {}, {}
    for g in C.objects:
        for A in at[g]:
            c = pullback(C, A, u)
            if c is None:
                raise PreconditionFailed(f"{u!r} has no pullback along {A!r}")
            ext[(g, A)], proj[(g, A)], top[(g, A)] = c.apex, c.legs[0], c.legs[1]
    ext_mor = {}
    for f in C.morphisms:
        g2, g = C.src[f], C.dst[f]
        for A in at[g]:
            B = act[(f, A)]
            # mediating map into the pullback at (g, A) from the cone at (g2, B)
            src_cone = Cone(ext[(g2, B)], (C.compose_table[(f, proj[(g2, B)])], top[(g2, B)]))
            tgt = Cone(ext[(g, A)], (proj[(g, A)], top[(g, A)]))
            ext_mor[(f, A)] = mediating_maps(C, src_cone, tgt)[0]
    return CwA(C, Ty, ext, proj, ext_mor)


def empty_cwa(C: FinCategory) -> CwA:
    return CwA(C, FinPresheaf(C, {}, {}), {}, {}, {})


# -- categories with families -----------------------------------------------------------

@dataclass(eq=False)
class CwF:
    """A CwA with a term presheaf on its category of elements.

    ``Tm`` is a presheaf on ``category_of_elements(cwa.Ty).cat`` and
    ``var[(G, A)]`` lies in ``Tm`` at ``(G.A, p_A* A)``.
    """

    cwa: CwA
    Tm: FinPresheaf
    var: dict[tuple[str, str], str]

    def tm(self, g: str, A: str) -> tuple[str, ...]:
        return self.Tm.at[pair_id(g, A)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CwF):
            return NotImplemented
        return self.cwa == other.cwa and self.Tm == other.Tm and self.var == other.var

    def __hash__(self) -> int:
        return hash(self.Tm)


def representation_map(w: CwF, g: str, A: str, d: str) -> dict[str, tuple[str, str]]:
    """``f -> (p_A . f, f*var)`` on ``hom(D, G.A)``."""
    a = w.cwa
    C = a.base
    x, p = a.ext[(g, A)], a.proj[(g, A)]
    pA = a.Ty.act[(p, A)]
    v = w.var[(g, A)]
    out = {}
    for f in C.hom(d, x):
        out[f] = (C.compose_table[(p, f)], w.Tm.act[(pair_id(f, pA), v)])
    return out


def check_cwf(w: CwF) -> ValidationReport:
    rep = check_cwa(w.cwa)
    rep.kind = "cwf"
    if not rep.ok:
        return rep
    a = w.cwa
    C = a.base
    E = category_of_elements(a.Ty)
    if w.Tm.base != E.cat:
        rep.add("LawViolation", "Tm is not a presheaf on the category of elements of Ty")
        return rep
    rep.extend(check_presheaf(w.Tm))
    if not rep.ok:
        return rep
    for g, A in a.types():
        x, p = a.ext[(g, A)], a.proj[(g, A)]
        home = pair_id(x, a.Ty.act[(p, A)])
        if w.var.get((g, A)) not in w.Tm.at[home]:
            rep.add("DanglingReference", f"var at ({g}, {A}) is not a term of p_A* A", g, A)
            continue
        for d in C.objects:
            image = representation_map(w, g, A, d)
            target = {(h, t) for h in C.hom(d, g) for t in w.Tm.at[pair_id(d, a.Ty.act[(h, A)])]}
            if len(set(image.values())) != len(image) or set(image.values()) != target:
                rep.add("NotBijective", f"representation fails at ({g}, {A}) from {d!r}", g, A, d)
    if not rep.ok:
        return rep
    # f.A must be the map the representation assigns to (f . p_B, var_B)
    for f in C.morphisms:
        g2, g = C.src[f], C.dst[f]
        for A in a.Ty.at[g]:
            B = a.Ty.act[(f, A)]
            pA = a.Ty.act[(a.proj[(g, A)], A)]
            moved = w.Tm.act[(pair_id(a.ext_mor[(f, A)], pA), w.var[(g, A)])]
            if moved != w.var[(g2, B)]:
                rep.add("VarNotNatural", f"f.A does not carry var_A to var_(f*A) at ({f}, {A})", f, A)
    return rep


def validate_cwf(w: CwF) -> CwF:
    check_cwf(w).raise_if_failed()
    return w


# -- natural models ------------------------------------------------------------------

@dataclass(eq=False)
class NaturalModel:
    """``p : TmP -> TyP`` with optional chosen representations.

    ``chosen_reps[(G, A)] = (X, u)``: ``X`` represents the pullback of ``p``
    along ``A : y(G) -> TyP`` with universal element ``u``.
    """

    base: FinCategory
    TyP: FinPresheaf
    TmP: FinPresheaf
    p: PresheafMap
    chosen_reps: dict[tuple[str, str], tuple[str, str]] | None = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, NaturalModel):
            return NotImplemented
        return (self.TyP == other.TyP and self.TmP == other.TmP
                and self.p.components == other.p.components
                and (self.chosen_reps or {}) == (other.chosen_reps or {}))

    def __hash__(self) -> int:
        return hash((self.TyP, self.TmP))


def natmod_pullback(n: NaturalModel, g: str, A: str):
    """Pullback of ``p`` along the map ``y(G) -> TyP`` classifying ``A``."""
    return presheaf_pullback(yoneda_map(n.TyP, g, A), n.p)


def check_natmod(n: NaturalModel) -> ValidationReport:
    rep = ValidationReport("natmod")
    rep.extend(check_presheaf(n.TyP))
    rep.extend(check_presheaf(n.TmP))
    if not rep.ok:
        return rep
    rep.extend(check_presheaf_map(n.p))
    if not rep.ok:
        return rep
    for g in n.base.objects:
        for A in n.TyP.at[g]:
            P, _, _ = natmod_pullback(n, g, A)
            if n.chosen_reps and (g, A) in n.chosen_reps:
                x, u = n.chosen_reps[(g, A)]
                ok = x in n.base.obj_index and u in P.at[x]
                if ok:
                    m = yoneda_map(P, x, u)
                    ok = check_presheaf_map(m).ok and m.is_iso()
                if not ok:
                    rep.add("NotRepresentable", f"chosen representation at ({g}, {A}) is invalid", g, A)
            elif is_representable(P) is None:
                rep.add("NotRepresentable", f"pullback along ({g}, {A}) is not representable", g, A)
    return rep


def validate_natmod(n: NaturalModel) -> NaturalModel:
    check_natmod(n).raise_if_failed()
    return n


# -- contextual categories --------------------------------------------------------------

@dataclass(eq=False)
class ContextualCategory:
    """A rooted tree of objects with strictly functorial chosen pullbacks.

    ``chosen_pb[(f, X)] = (f*X, q)`` with ``q : f*X -> X`` over ``f``.
    """

    base: FinCategory
    root: str
    parent: dict[str, str]
    proj: dict[str, str]
    chosen_pb: dict[tuple[str, str], tuple[str, str]] = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ContextualCategory):
            return NotImplemented
        return (self.base == other.base and self.root == other.root and self.parent == other.parent
                and self.proj == other.proj and self.chosen_pb == other.chosen_pb)

    def __hash__(self) -> int:
        return hash(self.root)

    def children(self, g: str) -> list[str]:
        return sorted(x for x, y in self.parent.items() if y == g)


def check_cxlcat(x: ContextualCategory) -> ValidationReport:
    rep = ValidationReport("cxlcat")
    C = x.base
    if x.root not in C.obj_index:
        rep.add("DanglingReference", f"root {x.root!r} is not an object", x.root)
        return rep
    if not is_terminal(C, x.root):
        rep.add("RootNotTerminal", f"root {x.root!r} is not terminal", x.root)
    for o in C.objects:
        if o == x.root:
            if o in x.parent:
                rep.add("NotATree", "the root has a parent", o)
            continue
        seen, cur = {o}, o
        while cur != x.root:
            cur = x.parent.get(cur)
            if cur is None or cur in seen:
                rep.add("NotATree", f"{o!r} does not descend to the root", o)
                break
            seen.add(cur)
    if not rep.ok:
        return rep
    for o, par in x.parent.items():
        if x.proj.get(o) not in C.hom(o, par):
            rep.add("DanglingReference", f"projection of {o!r} is not a map to its parent", o)
    if not rep.ok:
        return rep
    for X, par in sorted(x.parent.items()):
        for f in C.into(par):
            entry = x.chosen_pb.get((f, X))
            if entry is None:
                rep.add("PullbackMissing", f"no chosen pullback of {X!r} along {f!r}", f, X)
                continue
            fX, q = entry
            if (x.parent.get(fX) != C.src[f] or q not in C.hom(fX, X)
                    or not is_pullback_square(C, q, x.proj[fX], x.proj[X], f)):
                rep.add("PullbackMissing", f"chosen pullback of {X!r} along {f!r} is not a pullback square",
                        f, X)
    # strictness is checked wherever the chosen squares involved are present,
    # so a partial tree still reports it next to its missing pullbacks
    bad = {(v.witness[0], v.witness[1]) for v in rep.violations if v.code == "PullbackMissing"}
    pb = {k: v for k, v in x.chosen_pb.items() if k not in bad and k[1] in x.parent}
    for X, par in sorted(x.parent.items()):
        ident = pb.get((C.identity[par], X))
        if ident is not None and ident != (X, C.identity[X]):
            rep.add("StrictFunctorialityFailure", f"1*{X} != {X}", C.identity[par], X)
        for f in C.into(par):
            if (f, X) not in pb:
                continue
            fX, q1 = pb[(f, X)]
            for g in C.into(C.src[f]):
                if (g, fX) not in pb or (C.compose_table[(f, g)], X) not in pb:
                    continue
                gfX, q2 = pb[(g, fX)]
                direct = pb[(C.compose_table[(f, g)], X)]
                if direct != (gfX, C.compose_table[(q1, q2)]):
                    rep.add("StrictFunctorialityFailure", f"(f g)*{X} != g*f*{X} for ({f}, {g})", f, g, X)
    return rep


def validate_cxlcat(x: ContextualCategory) -> ContextualCategory:
    check_cxlcat(x).raise_if_failed()
    return x
