"""Finite categories, functors, natural transformations and finite limits.

Everything here works on explicit tables. Objects and morphisms are opaque
string ids, kept in lexicographic order; that order breaks every tie
(which pullback cone is canonical, which witness is reported first).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np

from . import kernel
from .errors import BudgetExceeded, NonCospan, ValidationError, ValidationReport

DEFAULT_BUDGET = int(os.environ.get("CATSEM_BUDGET", 10**6))


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


class FinCategory:
    """A finite category given by explicit tables.

    ``compose[(g, f)]`` is ``g . f`` and is defined exactly on pairs with
    ``dst(f) == src(g)``. The constructor does not check the category laws;
    use :func:`validate_category` for untrusted input.
    """

    def __init__(self, objects: Iterable[str], morphisms: Mapping[str, tuple[str, str]],
                 identity: Mapping[str, str], compose: Mapping[tuple[str, str], str]):
        self.objects = tuple(sorted(objects))
        self.morphisms = tuple(sorted(morphisms))
        self.src = {m: morphisms[m][0] for m in self.morphisms}
        self.dst = {m: morphisms[m][1] for m in self.morphisms}
        self.identity = {o: identity[o] for o in self.objects}
        self.compose_table = dict(compose)
        self._memo: dict = {}

    # -- basic access -------------------------------------------------------

    def __repr__(self) -> str:
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def comp(self, *ms: str) -> str:
        """Composite ``ms[0] . ms[1] . ... . ms[-1]``."""
        out = ms[-1]
        for g in reversed(ms[:-1]):
            try:
                out = self.compose_table[(g, out)]
            except KeyError:
                raise ValueError(f"morphisms {g!r} and {out!r} are not composable") from None
        return out

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._homs.get((a, b), ())

    @cached_property
    def _homs(self) -> dict[tuple[str, str], tuple[str, ...]]:
        homs: dict[tuple[str, str], list[str]] = {}
        for m in self.morphisms:
            homs.setdefault((self.src[m], self.dst[m]), []).append(m)
        return {k: tuple(v) for k, v in homs.items()}

    def out_of(self, a: str) -> tuple[str, ...]:
        return self._out.get(a, ())

    def into(self, b: str) -> tuple[str, ...]:
        return self._in.get(b, ())

    @cached_property
    def _out(self) -> dict[str, tuple[str, ...]]:
        d: dict[str, list[str]] = {}
        for m in self.morphisms:
            d.setdefault(self.src[m], []).append(m)
        return {k: tuple(v) for k, v in d.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[str, ...]]:
        d: dict[str, list[str]] = {}
        for m in self.morphisms:
            d.setdefault(self.dst[m], []).append(m)
        return {k: tuple(v) for k, v in d.items()}

    def is_identity(self, m: str) -> bool:
        return self.identity.get(self.src[m]) == m

    @cached_property
    def _inverses(self) -> dict[str, str]:
        inv = {}
        for m in self.morphisms:
            a, b = self.src[m], self.dst[m]
            for g in self.hom(b, a):
                if (self.compose_table[(g, m)] == self.identity[a]
                        and self.compose_table[(m, g)] == self.identity[b]):
                    inv[m] = g
                    break
        return inv

    def inverse(self, m: str) -> str | None:
        return self._inverses.get(m)

    def is_iso(self, m: str) -> bool:
        return m in self._inverses

    def isos(self, a: str, b: str) -> list[str]:
        return [m for m in self.hom(a, b) if m in self._inverses]

    def isomorphic(self, a: str, b: str) -> bool:
        return bool(self.isos(a, b))

    # -- equality & integer tables -------------------------------------------

    @cached_property
    def _key(self):
        return (self.objects,
                tuple((m, self.src[m], self.dst[m]) for m in self.morphisms),
                tuple(sorted(self.identity.items())),
                tuple(sorted(self.compose_table.items())))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @cached_property
    def obj_index(self) -> dict[str, int]:
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def mor_index(self) -> dict[str, int]:
        return {m: i for i, m in enumerate(self.morphisms)}

    @cached_property
    def tables(self) -> "_Tables":
        oi, mi = self.obj_index, self.mor_index
        n, m = len(self.objects), len(self.morphisms)
        src = np.array([oi[self.src[x]] for x in self.morphisms], dtype=np.int32)
        dst = np.array([oi[self.dst[x]] for x in self.morphisms], dtype=np.int32)
        ident = np.array([mi[self.identity[o]] for o in self.objects], dtype=np.int32)
        idof = np.full(m, -1, dtype=np.int32)
        for o in self.objects:
            idof[mi[self.identity[o]]] = oi[o]
        comp = np.full(m * m, -1, dtype=np.int32)
        for (g, f), h in self.compose_table.items():
            if g in mi and f in mi and h in mi:
                comp[mi[g] * m + mi[f]] = mi[h]
        hom_flat, hom_off = [], [0]
        for a in self.objects:
            for b in self.objects:
                hom_flat.extend(mi[x] for x in self.hom(a, b))
                hom_off.append(len(hom_flat))
        by_src_flat, by_src_off = [], [0]
        for a in self.objects:
            by_src_flat.extend(mi[x] for x in self.out_of(a))
            by_src_off.append(len(by_src_flat))
        return _Tables(src, dst, ident, idof, comp,
                       np.array(hom_flat, dtype=np.int32), np.array(hom_off, dtype=np.int32),
                       np.array(by_src_flat, dtype=np.int32), np.array(by_src_off, dtype=np.int32))

    def to_data(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": {m: [self.src[m], self.dst[m]] for m in self.morphisms},
            "identities": dict(self.identity),
            "compose": sorted([g, f, h] for (g, f), h in self.compose_table.items()),
        }


class _Tables(NamedTuple):
    src: np.ndarray
    dst: np.ndarray
    ident: np.ndarray
    idof: np.ndarray
    comp: np.ndarray
    hom_flat: np.ndarray
    hom_off: np.ndarray
    by_src_flat: np.ndarray
    by_src_off: np.ndarray


# -- validation -------------------------------------------------------------

def _raw_tables(data) -> tuple[list, list, dict, list]:
    """Normalise raw category data into (objects, [(id, src, dst)], identities, [(g, f, h)])."""
    if isinstance(data, FinCategory):
        return (list(data.objects), [(m, data.src[m], data.dst[m]) for m in data.morphisms],
                dict(data.identity), [(g, f, h) for (g, f), h in data.compose_table.items()])
    objects = list(data["objects"])
    morphs = data["morphisms"]
    if isinstance(morphs, Mapping):
        mors = [(m, sd[0], sd[1]) for m, sd in morphs.items()]
    else:
        mors = [tuple(x) for x in morphs]
    identity = dict(data.get("identities", data.get("identity", {})))
    comp = data.get("compose", [])
    if isinstance(comp, Mapping):
        triples = [(g, f, h) for (g, f), h in comp.items()]
    else:
        triples = [tuple(x) for x in comp]
    return objects, mors, identity, triples


def check_category(data) -> ValidationReport:
    """Every violated category law, with witnesses."""
    rep = ValidationReport("category")
    objects, mors, identity, triples = _raw_tables(data)

    seen = set()
    for o in objects:
        if o in seen:
            rep.add("DuplicateId", f"object {o!r} listed twice", o)
        seen.add(o)
    objset = set(objects)
    src, dst = {}, {}
    for m, s, d in mors:
        if m in src:
            rep.add("DuplicateId", f"morphism {m!r} listed twice", m)
        for end in (s, d):
            if end not in objset:
                rep.add("DanglingReference", f"morphism {m!r} refers to unknown object {end!r}", m, end)
        src[m], dst[m] = s, d
    if not rep.ok:
        return rep

    for o in objects:
        i = identity.get(o)
        if i is None:
            rep.add("DanglingReference", f"object {o!r} has no identity", o)
        elif i not in src:
            rep.add("DanglingReference", f"identity of {o!r} is unknown morphism {i!r}", o, i)
        elif src[i] != o or dst[i] != o:
            rep.add("LawViolation", f"identity {i!r} of {o!r} is not an endomorphism of it", o, i)
    for o in identity:
        if o not in objset:
            rep.add("DanglingReference", f"identity given for unknown object {o!r}", o)

    comp: dict[tuple[str, str], str] = {}
    for g, f, h in triples:
        bad = [x for x in (g, f, h) if x not in src]
        if bad:
            rep.add("DanglingReference", f"composition entry refers to unknown morphism {bad[0]!r}", g, f, h)
            continue
        if (g, f) in comp and comp[(g, f)] != h:
            rep.add("DuplicateId", f"composite {g} . {f} given twice", g, f)
        comp[(g, f)] = h
        if dst[f] != src[g]:
            rep.add("LawViolation", f"composite given for non-composable pair ({g}, {f})", g, f, h)
        elif src[h] != src[f] or dst[h] != dst[g]:
            rep.add("LawViolation", f"composite {g} . {f} = {h} has wrong source/target", g, f, h)
    if not rep.ok:
        return rep

    for f in src:
        for g in src:
            if dst[f] == src[g] and (g, f) not in comp:
                rep.add("LawViolation", f"composite {g} . {f} missing (totality)", g, f)
    if not rep.ok:
        return rep

    for m in src:
        if comp[(identity[dst[m]], m)] != m:
            rep.add("LawViolation", f"left identity law fails at {m!r}", identity[dst[m]], m)
        if comp[(m, identity[src[m]])] != m:
            rep.add("LawViolation", f"right identity law fails at {m!r}", m, identity[src[m]])
    if not rep.ok:
        return rep

    cat = FinCategory(objects, {m: (src[m], dst[m]) for m in src}, identity, comp)
    t = cat.tables
    bad = kernel.find_assoc_violation(len(cat.morphisms), t.dst, t.comp, t.by_src_flat, t.by_src_off)
    if bad is not None:
        f, g, h = (cat.morphisms[i] for i in bad)
        rep.add("LawViolation", f"associativity fails for ({h}, {g}, {f})", h, g, f)
    return rep


def validate_category(data) -> FinCategory:
    rep = check_category(data)
    rep.raise_if_failed()
    if isinstance(data, FinCategory):
        return data
    objects, mors, identity, triples = _raw_tables(data)
    return FinCategory(objects, {m: (s, d) for m, s, d in mors}, identity,
                       {(g, f): h for g, f, h in triples})


def full_subcategory(C: FinCategory, objects: Iterable[str]) -> FinCategory:
    keep = set(objects)
    mors = {m: (C.src[m], C.dst[m]) for m in C.morphisms if C.src[m] in keep and C.dst[m] in keep}
    comp = {(g, f): h for (g, f), h in C.compose_table.items() if g in mors and f in mors}
    return FinCategory(keep, mors, {o: C.identity[o] for o in keep}, comp)


# -- functors & natural transformations ----------------------------------------

class FinFunctor:
    def __init__(self, dom: FinCategory, cod: FinCategory,
                 obj_map: Mapping[str, str], mor_map: Mapping[str, str]):
        self.dom = dom
        self.cod = cod
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self._memo: dict = {}

    def ob(self, x: str) -> str:
        return self.obj_map[x]

    def mor(self, m: str) -> str:
        return self.mor_map[m]

    @cached_property
    def _key(self):
        return (tuple(sorted(self.obj_map.items())), tuple(sorted(self.mor_map.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return self._key == other._key and self.dom == other.dom and self.cod == other.cod

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FinFunctor({self.obj_map})"

    def to_data(self) -> dict:
        return {"objects": dict(self.obj_map), "morphisms": dict(self.mor_map)}


def check_functor(F: FinFunctor) -> ValidationReport:
    rep = ValidationReport("functor")
    C, D = F.dom, F.cod
    for o in C.objects:
        if F.obj_map.get(o) not in D.obj_index:
            rep.add("DanglingReference", f"object {o!r} has no valid image", o)
    for m in C.morphisms:
        if F.mor_map.get(m) not in D.mor_index:
            rep.add("DanglingReference", f"morphism {m!r} has no valid image", m)
    if not rep.ok:
        return rep
    for m in C.morphisms:
        fm = F.mor_map[m]
        if D.src[fm] != F.obj_map[C.src[m]] or D.dst[fm] != F.obj_map[C.dst[m]]:
            rep.add("LawViolation", f"image of {m!r} has wrong source/target", m)
    for o in C.objects:
        if F.mor_map[C.identity[o]] != D.identity[F.obj_map[o]]:
            rep.add("LawViolation", f"identity of {o!r} not preserved", o)
    if not rep.ok:
        return rep
    for (g, f), h in C.compose_table.items():
        if D.compose_table[(F.mor_map[g], F.mor_map[f])] != F.mor_map[h]:
            rep.add("LawViolation", f"composite {g} . {f} not preserved", g, f)
    return rep


def validate_functor(F: FinFunctor) -> FinFunctor:
    check_functor(F).raise_if_failed()
    return F


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms})


def inclusion_functor(sub: FinCategory, C: FinCategory) -> FinFunctor:
    return FinFunctor(sub, C, {o: o for o in sub.objects}, {m: m for m in sub.morphisms})


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """``G . F``."""
    return FinFunctor(F.dom, G.cod,
                      {o: G.obj_map[x] for o, x in F.obj_map.items()},
                      {m: G.mor_map[x] for m, x in F.mor_map.items()})


class FinNatTrans:
    def __init__(self, src: FinFunctor, dst: FinFunctor, components: Mapping[str, str]):
        self.src = src
        self.dst = dst
        self.components = dict(components)

    def __getitem__(self, o: str) -> str:
        return self.components[o]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinNatTrans):
            return NotImplemented
        return (self.components == other.components and self.src == other.src
                and self.dst == other.dst)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.components.items())))


def check_nat_trans(a: FinNatTrans) -> ValidationReport:
    rep = ValidationReport("natural transformation")
    F, G = a.src, a.dst
    C, D = F.dom, F.cod
    for o in C.objects:
        c = a.components.get(o)
        if c not in D.mor_index or D.src[c] != F.obj_map[o] or D.dst[c] != G.obj_map[o]:
            rep.add("LawViolation", f"component at {o!r} does not run F({o}) -> G({o})", o)
    if not rep.ok:
        return rep
    for m in C.morphisms:
        x, y = C.src[m], C.dst[m]
        if D.comp(G.mor_map[m], a.components[x]) != D.comp(a.components[y], F.mor_map[m]):
            rep.add("LawViolation", f"naturality square at {m!r} does not commute", m)
    return rep


def is_natural_iso(a: FinNatTrans) -> bool:
    return check_nat_trans(a).ok and all(a.dst.cod.is_iso(c) for c in a.components.values())


# -- arrow category -------------------------------------------------------------

class Square(NamedTuple):
    src: str      # arrow a : A' -> G'
    dst: str      # arrow b : A -> G
    top: str      # A' -> A
    bottom: str   # G' -> G


def square_id(sq: Square) -> str:
    return f"[{sq.src}|{sq.top}|{sq.bottom}|{sq.dst}]"


@dataclass(eq=False)
class ArrowCategory:
    """``Arr(C)`` with its domain and codomain projections.

    Objects of ``cat`` are the morphism ids of ``base``; morphisms are the
    commuting squares, named by :func:`square_id`.
    """

    base: FinCategory
    cat: FinCategory
    dom_fn: FinFunctor
    cod_fn: FinFunctor
    squares: dict[str, Square]
    _lookup: dict[Square, str]

    def __iter__(self) -> Iterator:
        return iter((self.cat, self.dom_fn, self.cod_fn))

    def square(self, m: str) -> Square:
        return self.squares[m]

    def lookup(self, src: str, dst: str, top: str, bottom: str) -> str:
        return self._lookup[Square(src, dst, top, bottom)]

    def find(self, src: str, dst: str, top: str, bottom: str) -> str | None:
        return self._lookup.get(Square(src, dst, top, bottom))


def arrow_category(C: FinCategory) -> ArrowCategory:
    if "arrows" in C._memo:
        return C._memo["arrows"]
    squares: dict[str, Square] = {}
    mors: dict[str, tuple[str, str]] = {}
    for a in C.morphisms:
        a0, a1 = C.src[a], C.dst[a]
        for b in C.morphisms:
            b0, b1 = C.src[b], C.dst[b]
            for bottom in C.hom(a1, b1):
                ba = C.compose_table[(bottom, a)]
                for top in C.hom(a0, b0):
                    if C.compose_table[(b, top)] == ba:
                        sq = Square(a, b, top, bottom)
                        sid = square_id(sq)
                        squares[sid] = sq
                        mors[sid] = (a, b)
    lookup = {sq: sid for sid, sq in squares.items()}
    identity = {a: lookup[Square(a, a, C.identity[C.src[a]], C.identity[C.dst[a]])]
                for a in C.morphisms}
    by_src: dict[str, list[str]] = {}
    for sid, sq in squares.items():
        by_src.setdefault(sq.src, []).append(sid)
    comp = {}
    for fid, f in squares.items():
        for gid in by_src.get(f.dst, ()):
            g = squares[gid]
            h = Square(f.src, g.dst, C.compose_table[(g.top, f.top)],
                       C.compose_table[(g.bottom, f.bottom)])
            comp[(gid, fid)] = lookup[h]
    cat = FinCategory(C.morphisms, mors, identity, comp)
    dom_fn = FinFunctor(cat, C, {a: C.src[a] for a in C.morphisms},
                        {sid: sq.top for sid, sq in squares.items()})
    cod_fn = FinFunctor(cat, C, {a: C.dst[a] for a in C.morphisms},
                        {sid: sq.bottom for sid, sq in squares.items()})
    arr = ArrowCategory(C, cat, dom_fn, cod_fn, squares, lookup)
    C._memo["arrows"] = arr
    return arr


def arrow_functor(F: FinFunctor) -> FinFunctor:
    """``Arr(F) : Arr(C) -> Arr(D)``."""
    A, B = arrow_category(F.dom), arrow_category(F.cod)
    mm = F.mor_map
    mor_map = {sid: B.lookup(mm[sq.src], mm[sq.dst], mm[sq.top], mm[sq.bottom])
               for sid, sq in A.squares.items()}
    return FinFunctor(A.cat, B.cat, {a: mm[a] for a in F.dom.morphisms}, mor_map)


# -- limits ------------------------------------------------------------------

class Cone(NamedTuple):
    apex: str
    legs: tuple[str, ...]


def commuting_cones(C: FinCategory, f: str, g: str) -> list[Cone]:
    """All cones ``(P, u, v)`` with ``f . u == g . v``, in canonical order."""
    if C.dst[f] != C.dst[g]:
        raise NonCospan(f"{f!r} and {g!r} do not share a target")
    key = ("cones", f, g)
    if key in C._memo:
        return C._memo[key]
    a, b = C.src[f], C.src[g]
    cones = []
    for p in C.objects:
        for u in C.hom(p, a):
            fu = C.compose_table[(f, u)]
            for v in C.hom(p, b):
                if C.compose_table[(g, v)] == fu:
                    cones.append(Cone(p, (u, v)))
    C._memo[key] = cones
    return cones


def mediating_maps(C: FinCategory, source: Cone, target: Cone) -> list[str]:
    """Morphisms ``m : source.apex -> target.apex`` with ``target.legs[i] . m == source.legs[i]``."""
    return [m for m in C.hom(source.apex, target.apex)
            if all(C.compose_table[(t, m)] == s for t, s in zip(target.legs, source.legs))]


def is_limiting(C: FinCategory, f: str, g: str, cone: Cone) -> bool:
    """Universal property of a pullback cone, checked against every commuting cone."""
    u, v = cone.legs
    if C.compose_table.get((f, u)) != C.compose_table.get((g, v)):
        return False
    return all(len(mediating_maps(C, other, cone)) == 1 for other in commuting_cones(C, f, g))


def limiting_cones(C: FinCategory, f: str, g: str) -> list[Cone]:
    """Every pullback cone of the cospan ``f, g`` in canonical order."""
    key = ("limits", f, g)
    if key in C._memo:
        return C._memo[key]
    first = next((c for c in commuting_cones(C, f, g) if is_limiting(C, f, g, c)), None)
    out = []
    if first is not None:
        # limiting cones are exactly the canonical one precomposed with isos
        u, v = first.legs
        for q in C.objects:
            for i in C.isos(q, first.apex):
                out.append(Cone(q, (C.compose_table[(u, i)], C.compose_table[(v, i)])))
        out.sort()
    C._memo[key] = out
    return out


def pullback(C: FinCategory, f: str, g: str) -> Cone | None:
    """Canonical pullback of the cospan ``f, g``: least apex, then least legs."""
    cones = limiting_cones(C, f, g)
    return cones[0] if cones else None


def is_pullback_square(C: FinCategory, top: str, left: str, right: str, bottom: str) -> bool:
    """Is ``right . top == bottom . left`` a pullback square?"""
    return is_limiting(C, right, bottom, Cone(C.src[top], (top, left)))


def square_is_pullback(C: FinCategory, sq: Square) -> bool:
    return is_pullback_square(C, sq.top, sq.src, sq.dst, sq.bottom)


def terminal_object(C: FinCategory) -> str | None:
    for t in C.objects:
        if all(len(C.hom(x, t)) == 1 for x in C.objects):
            return t
    return None


def is_terminal(C: FinCategory, t: str) -> bool:
    return all(len(C.hom(x, t)) == 1 for x in C.objects)


def to_terminal(C: FinCategory, x: str, t: str) -> str:
    return C.hom(x, t)[0]


def is_lex(C: FinCategory) -> bool:
    if terminal_object(C) is None:
        return False
    for x in C.objects:
        for f in C.into(x):
            for g in C.into(x):
                if pullback(C, f, g) is None:
                    return False
    return True


# -- functor properties --------------------------------------------------------

@dataclass(frozen=True)
class FunctorReport:
    full: bool
    faithful: bool
    ess_surjective: bool
    equivalence: bool
    injective_on_objects: bool

    def to_dict(self) -> dict[str, bool]:
        return dict(self.__dict__)


def functor_report(F: FinFunctor) -> FunctorReport:
    C, D = F.dom, F.cod
    full = faithful = True
    for a in C.objects:
        for b in C.objects:
            images = [F.mor_map[m] for m in C.hom(a, b)]
            if len(set(images)) != len(images):
                faithful = False
            if len(set(images)) != len(D.hom(F.obj_map[a], F.obj_map[b])):
                full = False
    image = set(F.obj_map.values())
    ess = all(any(D.isomorphic(x, y) for y in image) for x in D.objects)
    inj = len(image) == len(C.objects)
    return FunctorReport(full, faithful, ess, full and faithful and ess, inj)


def is_isomorphism(F: FinFunctor) -> bool:
    return (len(set(F.obj_map.values())) == len(F.dom.objects) == len(F.cod.objects)
            and len(set(F.mor_map.values())) == len(F.dom.morphisms) == len(F.cod.morphisms))


def inverse_functor(F: FinFunctor) -> FinFunctor:
    if not is_isomorphism(F):
        raise ValueError("functor is not an isomorphism of categories")
    return FinFunctor(F.cod, F.dom, {v: k for k, v in F.obj_map.items()},
                      {v: k for k, v in F.mor_map.items()})


# -- functor enumeration ---------------------------------------------------------

def search_functors(C: FinCategory, D: FinCategory, *,
                    obj_allowed=None, mor_allowed=None,
                    budget: int = DEFAULT_BUDGET, limit: int = -1,
                    counter: list[int] | None = None) -> list[tuple[dict, dict]]:
    """Functors ``C -> D`` as ``(obj_map, mor_map)`` pairs, in canonical order.

    ``obj_allowed(x)`` / ``mor_allowed(m)`` optionally restrict images to a
    set of ids of ``D``. ``budget`` caps the number of complete object maps
    examined; when ``counter`` is given, ``counter[0]`` is incremented by
    the number examined and the budget applies to the running total.
    """
    tc, td = C.tables, D.tables
    nco, ncm = len(C.objects), len(C.morphisms)
    ndo, ndm = len(D.objects), len(D.morphisms)
    oa = np.ones(max(nco * ndo, 1), dtype=np.uint8)
    if obj_allowed is not None:
        oa[:] = 0
        for i, x in enumerate(C.objects):
            for y in obj_allowed(x):
                oa[i * ndo + D.obj_index[y]] = 1
    ma = np.ones(max(ncm * ndm, 1), dtype=np.uint8)
    if mor_allowed is not None:
        ma[:] = 0
        for i, m in enumerate(C.morphisms):
            for y in mor_allowed(m):
                ma[i * ndm + D.mor_index[y]] = 1
    order, trip_flat, trip_off = _constraint_order(C)
    sols, count, exceeded = kernel.search_functors(
        nco, tc.src, tc.dst, tc.idof, tc.comp, ncm,
        ndo, td.ident, td.comp, ndm, td.hom_flat, td.hom_off,
        oa, ma, order, trip_flat, trip_off,
        budget - (counter[0] if counter else 0), limit)
    if counter is not None:
        counter[0] += count
        count = counter[0]
    if exceeded:
        raise BudgetExceeded(count, budget, "object maps")
    out = []
    for oimg, mimg in sols:
        out.append(({C.objects[i]: D.objects[x] for i, x in enumerate(oimg[:nco])},
                    {C.morphisms[i]: D.morphisms[x] for i, x in enumerate(mimg[:ncm])}))
    return out


def _constraint_order(C: FinCategory):
    if "order" in C._memo:
        return C._memo["order"]
    mi = C.mor_index
    ids = [m for m in C.morphisms if C.is_identity(m)]
    rest = [m for m in C.morphisms if not C.is_identity(m)]
    order = [mi[m] for m in ids + rest]
    pos = {m: k for k, m in enumerate(order)}
    buckets: list[list[int]] = [[] for _ in order]
    for (g, f), h in C.compose_table.items():
        gi, fi, hi = mi[g], mi[f], mi[h]
        last = max(pos[gi], pos[fi], pos[hi])
        buckets[last].extend((gi, fi, hi))
    flat, off = [], [0]
    for b in buckets:
        flat.extend(b)
        off.append(len(flat) // 3)
    res = (np.array(order, dtype=np.int32), np.array(flat or [0], dtype=np.int32),
           np.array(off, dtype=np.int32))
    C._memo["order"] = res
    return res


def enumerate_functors(C: FinCategory, D: FinCategory, budget: int = DEFAULT_BUDGET) -> list[FinFunctor]:
    return [FinFunctor(C, D, o, m) for o, m in search_functors(C, D, budget=budget)]
