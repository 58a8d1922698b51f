"""Finite presheaves, the Yoneda embedding and the category of elements."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BudgetExceeded, NotDiscrete, ValidationReport
from .fibration import fiber, is_discrete_fibration, lifts
from .fincat import FinCategory, FinFunctor, is_isomorphism, pair_id

REPRESENTABLE_BUDGET = 10**6


class FinPresheaf:
    """A contravariant functor ``base^op -> FinSet``.

    ``act[(f, e)]`` is the restriction of ``e`` in ``at[dst f]`` along
    ``f``, landing in ``at[src f]``.
    """

    def __init__(self, base: FinCategory, at: Mapping[str, Iterable[str]],
                 act: Mapping[tuple[str, str], str]):
        self.base = base
        self.at = {o: tuple(sorted(at.get(o, ()))) for o in base.objects}
        self.act = dict(act)

    def restrict(self, f: str, e: str) -> str:
        return self.act[(f, e)]

    def size(self) -> int:
        return sum(len(v) for v in self.at.values())

    @property
    def _key(self):
        return (tuple(sorted(self.at.items())), tuple(sorted(self.act.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinPresheaf):
            return NotImplemented
        return self._key == other._key and self.base == other.base

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FinPresheaf({ {o: len(v) for o, v in self.at.items()} })"

    def to_data(self) -> dict:
        return {"at": {o: list(v) for o, v in self.at.items()},
                "act": sorted([f, e, x] for (f, e), x in self.act.items())}


def check_presheaf(P: FinPresheaf) -> ValidationReport:
    rep = ValidationReport("presheaf")
    C = P.base
    for f in C.morphisms:
        src_elems = set(P.at[C.src[f]])
        for e in P.at[C.dst[f]]:
            x = P.act.get((f, e))
            if x is None:
                rep.add("DanglingReference", f"restriction of {e!r} along {f!r} missing", f, e)
            elif x not in src_elems:
                rep.add("LawViolation", f"restriction of {e!r} along {f!r} lands outside P({C.src[f]})", f, e)
    if not rep.ok:
        return rep
    for o in C.objects:
        for e in P.at[o]:
            if P.act[(C.identity[o], e)] != e:
                rep.add("LawViolation", f"identity of {o!r} acts nontrivially on {e!r}", o, e)
    for (g, f), h in C.compose_table.items():
        for e in P.at[C.dst[g]]:
            if P.act[(h, e)] != P.act[(f, P.act[(g, e)])]:
                rep.add("LawViolation", f"action not functorial at ({g}, {f}) on {e!r}", g, f, e)
    return rep


class PresheafMap:
    def __init__(self, src: FinPresheaf, dst: FinPresheaf,
                 components: Mapping[str, Mapping[str, str]]):
        self.src = src
        self.dst = dst
        self.components = {o: dict(components.get(o, {})) for o in src.base.objects}

    def __call__(self, o: str, e: str) -> str:
        return self.components[o][e]

    def is_iso(self) -> bool:
        return all(sorted(c.values()) == list(self.dst.at[o]) and len(c) == len(self.src.at[o])
                   for o, c in self.components.items())

    def inverse(self) -> "PresheafMap":
        return PresheafMap(self.dst, self.src,
                           {o: {v: k for k, v in c.items()} for o, c in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PresheafMap):
            return NotImplemented
        return self.components == other.components and self.src == other.src and self.dst == other.dst


def check_presheaf_map(a: PresheafMap) -> ValidationReport:
    rep = ValidationReport("presheaf map")
    P, Q = a.src, a.dst
    C = P.base
    for o in C.objects:
        c = a.components[o]
        for e in P.at[o]:
            if c.get(e) not in Q.at[o]:
                rep.add("DanglingReference", f"component at {o!r} undefined or invalid on {e!r}", o, e)
    if not rep.ok:
        return rep
    for f in C.morphisms:
        s, d = C.src[f], C.dst[f]
        for e in P.at[d]:
            if a.components[s][P.act[(f, e)]] != Q.act[(f, a.components[d][e])]:
                rep.add("LawViolation", f"naturality fails at {f!r} on {e!r}", f, e)
    return rep


def identity_map(P: FinPresheaf) -> PresheafMap:
    return PresheafMap(P, P, {o: {e: e for e in es} for o, es in P.at.items()})


def compose_maps(b: PresheafMap, a: PresheafMap) -> PresheafMap:
    return PresheafMap(a.src, b.dst, {o: {e: b.components[o][x] for e, x in c.items()}
                                      for o, c in a.components.items()})


def yoneda(C: FinCategory, gamma: str) -> FinPresheaf:
    at = {d: C.hom(d, gamma) for d in C.objects}
    act = {(f, e): C.compose_table[(e, f)] for f in C.morphisms for e in at[C.dst[f]]}
    return FinPresheaf(C, at, act)


def yoneda_map(P: FinPresheaf, gamma: str, x: str) -> PresheafMap:
    """The natural map ``y(gamma) -> P`` classifying ``x`` in ``P(gamma)``."""
    y = yoneda(P.base, gamma)
    return PresheafMap(y, P, {d: {f: P.act[(f, x)] for f in y.at[d]} for d in P.base.objects})


def terminal_presheaf(C: FinCategory, elem: str = "*") -> FinPresheaf:
    return FinPresheaf(C, {o: [elem] for o in C.objects},
                       {(f, elem): elem for f in C.morphisms})


# -- category of elements --------------------------------------------------------

@dataclass(eq=False)
class Elements:
    """The category of elements of a presheaf with its projection.

    Objects are ``"(G,e)"`` for ``e`` in ``P(G)``; the morphism over ``f``
    into ``"(G,e)"`` is ``"(f,e)"``.
    """

    presheaf: FinPresheaf
    cat: FinCategory
    projection: FinFunctor
    obj_of: dict[str, tuple[str, str]]
    mor_of: dict[str, tuple[str, str]]

    def obj(self, gamma: str, e: str) -> str:
        return pair_id(gamma, e)

    def mor(self, f: str, e: str) -> str:
        return pair_id(f, e)


def category_of_elements(P: FinPresheaf) -> Elements:
    C = P.base
    obj_of = {pair_id(o, e): (o, e) for o in C.objects for e in P.at[o]}
    mor_of, mors = {}, {}
    for f in C.morphisms:
        for e in P.at[C.dst[f]]:
            m = pair_id(f, e)
            mor_of[m] = (f, e)
            mors[m] = (pair_id(C.src[f], P.act[(f, e)]), pair_id(C.dst[f], e))
    ident = {x: pair_id(C.identity[o], e) for x, (o, e) in obj_of.items()}
    comp = {}
    for g, (gf, ge) in mor_of.items():
        for f in C.into(C.src[gf]):
            fe = P.act[(gf, ge)]
            comp[(g, pair_id(f, fe))] = pair_id(C.compose_table[(gf, f)], ge)
    cat = FinCategory(obj_of, mors, ident, comp)
    proj = FinFunctor(cat, C, {x: o for x, (o, _) in obj_of.items()},
                      {m: f for m, (f, _) in mor_of.items()})
    return Elements(P, cat, proj, obj_of, mor_of)


def grothendieck(P: FinPresheaf) -> FinFunctor:
    return category_of_elements(P).projection


def fibration_to_presheaf(p: FinFunctor) -> FinPresheaf:
    """Fibers as sets, restriction via the unique lifts of a discrete fibration."""
    if not is_discrete_fibration(p):
        raise NotDiscrete("functor is not a discrete fibration")
    C, T = p.cod, p.dom
    at = {o: fiber(p, o) for o in C.objects}
    act = {}
    for f in C.morphisms:
        for Y in at[C.dst[f]]:
            act[(f, Y)] = T.src[lifts(p, f, Y)[0]]
    return FinPresheaf(C, at, act)


def elements_roundtrip_iso(P: FinPresheaf) -> PresheafMap:
    """``P -> fibration_to_presheaf(grothendieck(P))``, ``e -> "(G,e)"``."""
    Q = fibration_to_presheaf(grothendieck(P))
    return PresheafMap(P, Q, {o: {e: pair_id(o, e) for e in es} for o, es in P.at.items()})


def fibration_roundtrip_iso(p: FinFunctor) -> FinFunctor:
    """Isomorphism ``grothendieck(fibration_to_presheaf(p)) -> p.dom`` over the base."""
    P = fibration_to_presheaf(p)
    E = category_of_elements(P)
    T = p.dom
    obj_map = {x: Y for x, (_, Y) in E.obj_of.items()}
    mor_map = {m: lifts(p, f, Y)[0] for m, (f, Y) in E.mor_of.items()}
    return FinFunctor(E.cat, T, obj_map, mor_map)


def is_iso_over(F: FinFunctor, p: FinFunctor, q: FinFunctor) -> bool:
    """Is ``F : dom p -> dom q`` an isomorphism of categories with ``q F == p``?"""
    from .fincat import check_functor
    if not check_functor(F).ok or not is_isomorphism(F):
        return False
    return (all(q.obj_map[F.obj_map[x]] == p.obj_map[x] for x in p.dom.objects)
            and all(q.mor_map[F.mor_map[m]] == p.mor_map[m] for m in p.dom.morphisms))


# -- representability -------------------------------------------------------------

def is_representable(P: FinPresheaf, budget: int = REPRESENTABLE_BUDGET):
    """Least ``G`` with a natural isomorphism ``y(G) -> P``, with that isomorphism.

    Searches objectwise bijections, propagating naturality after each
    assignment. Returns None when no object represents ``P``.
    """
    C = P.base
    counter = [0]
    for gamma in C.objects:
        if any(len(C.hom(d, gamma)) != len(P.at[d]) for d in C.objects):
            continue
        iso = _search_iso(P, gamma, counter, budget)
        if iso is not None:
            return gamma, iso
    return None


def _search_iso(P: FinPresheaf, gamma: str, counter: list, budget: int):
    C = P.base
    y = yoneda(C, gamma)
    slots = [(d, f) for d in ([gamma] + [x for x in C.objects if x != gamma]) for f in y.at[d]]
    if gamma in C.identity:
        first = C.identity[gamma]
        slots.sort(key=lambda s: (s[1] != first,))
    comp: dict[str, dict[str, str]] = {d: {} for d in C.objects}
    used: dict[str, set[str]] = {d: set() for d in C.objects}

    def assign(d: str, f: str, v: str, trail: list) -> bool:
        stack = [(d, f, v)]
        while stack:
            d, f, v = stack.pop()
            cur = comp[d].get(f)
            if cur is not None:
                if cur != v:
                    return False
                continue
            if v in used[d]:
                return False
            comp[d][f] = v
            used[d].add(v)
            trail.append((d, f))
            for u in C.into(d):
                stack.append((C.src[u], C.compose_table[(f, u)], P.act[(u, v)]))
        return True

    def undo(trail: list) -> None:
        for d, f in trail:
            used[d].discard(comp[d].pop(f))

    def search(i: int) -> bool:
        while i < len(slots) and slots[i][1] in comp[slots[i][0]]:
            i += 1
        if i == len(slots):
            return True
        d, f = slots[i]
        for v in P.at[d]:
            if v in used[d]:
                continue
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded(counter[0], budget, "component assignments")
            trail: list = []
            if assign(d, f, v, trail) and search(i + 1):
                return True
            undo(trail)
        return False

    if not search(0):
        return None
    m = PresheafMap(y, P, comp)
    return m if check_presheaf_map(m).ok else None


# -- limits of presheaves ------------------------------------------------------------

def presheaf_pullback(f: PresheafMap, g: PresheafMap):
    """Pointwise pullback of ``f : A -> C`` and ``g : B -> C``; elements are ``"(a,b)"``."""
    A, B = f.src, g.src
    base = A.base
    at, pa, pb = {}, {}, {}
    for o in base.objects:
        at[o] = []
        pa[o], pb[o] = {}, {}
        for a in A.at[o]:
            for b in B.at[o]:
                if f.components[o][a] == g.components[o][b]:
                    x = pair_id(a, b)
                    at[o].append(x)
                    pa[o][x], pb[o][x] = a, b
    act = {}
    for u in base.morphisms:
        s, d = base.src[u], base.dst[u]
        for x in at[d]:
            act[(u, x)] = pair_id(A.act[(u, pa[d][x])], B.act[(u, pb[d][x])])
    P = FinPresheaf(base, at, act)
    return P, PresheafMap(P, A, pa), PresheafMap(P, B, pb)


def presheaf_sum(parts: list[FinPresheaf]) -> FinPresheaf:
    """Coproduct; the k-th summand's elements are prefixed ``"k:"``."""
    base = parts[0].base
    at = {o: [f"{k}:{e}" for k, P in enumerate(parts) for e in P.at[o]] for o in base.objects}
    act = {(f, f"{k}:{e}"): f"{k}:{x}"
           for k, P in enumerate(parts) for (f, e), x in P.act.items()}
    return FinPresheaf(base, at, act)
