"""Comprehension categories, their pseudo and strict maps, and transformations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import (BudgetExceeded, NotAFibration, PreconditionFailed, SliceInfinite,
                     ValidationError, ValidationReport)
from .fibration import (cartesian_lifts, cartesian_morphisms, compute_cleaving, fiber,
                        find_split_cleaving, is_discrete_fibration, is_fibration,
                        strict_pullback, _lift_problems)
from .fincat import (DEFAULT_BUDGET, ArrowCategory, FinCategory, FinFunctor, arrow_category,
                     check_functor, functor_report, is_terminal, search_functors,
                     square_is_pullback)


# -- the structure ---------------------------------------------------------------

class CompCat:
    """``(C, T, p, chi)`` with an optional distinguished context ``point``.

    ``chi`` is a functor into ``arrow_category(base).cat``: it sends a type to
    a morphism id of ``base`` (its comprehension ``G.A -> G``) and a type
    morphism to a commuting square.
    """

    def __init__(self, base: FinCategory, total: FinCategory, p: FinFunctor, chi: FinFunctor,
                 point: str | None = None):
        self.base = base
        self.total = total
        self.p = p
        self.chi = chi
        self.point = point

    @classmethod
    def build(cls, base: FinCategory, total: FinCategory, p_obj: Mapping, p_mor: Mapping,
              chi_obj: Mapping, chi_top: Mapping, point: str | None = None) -> "CompCat":
        """Assemble from tables; ``chi_top[m]`` is the top edge of the square ``chi(m)``.

        Raises ValidationError when a square does not commute.
        """
        arr = arrow_category(base)
        rep = ValidationReport("compcat")
        chi_mor = {}
        for m in total.morphisms:
            a, b = chi_obj.get(total.src[m]), chi_obj.get(total.dst[m])
            sq = arr.find(a, b, chi_top.get(m), p_mor.get(m))
            if sq is None:
                rep.add("LawViolation", f"chi({m}) is not a commuting square over p({m})", m)
            chi_mor[m] = sq
        rep.raise_if_failed()
        p = FinFunctor(total, base, p_obj, p_mor)
        chi = FinFunctor(total, arr.cat, chi_obj, chi_mor)
        return cls(base, total, p, chi, point)

    # context extension
    def proj(self, A: str) -> str:
        """The comprehension ``chi_A : G.A -> G`` as a morphism of the base."""
        return self.chi.obj_map[A]

    def ext(self, A: str) -> str:
        return self.base.src[self.chi.obj_map[A]]

    def ctx(self, A: str) -> str:
        return self.p.obj_map[A]

    def types_over(self, gamma: str) -> list[str]:
        return fiber(self.p, gamma)

    def top(self, m: str) -> str:
        """Top edge ``G'.A' -> G.A`` of the square ``chi(m)``."""
        return self.arrows.squares[self.chi.mor_map[m]].top

    @property
    def arrows(self) -> ArrowCategory:
        return arrow_category(self.base)

    def with_point(self, point: str | None) -> "CompCat":
        return CompCat(self.base, self.total, self.p, self.chi, point)

    def _key(self):
        return (self.point, self.p._key, self.chi._key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompCat):
            return NotImplemented
        return (self._key() == other._key() and self.base == other.base
                and self.total == other.total)

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (f"CompCat(|C|={len(self.base.objects)}, |T|={len(self.total.objects)}, "
                f"point={self.point!r})")


def check_compcat(cc: CompCat) -> ValidationReport:
    rep = ValidationReport("compcat")
    C, T = cc.base, cc.total
    arr = cc.arrows
    for F, what in ((cc.p, "p"), (cc.chi, "chi")):
        r = check_functor(F)
        for v in r.violations:
            rep.add(v.code, f"{what}: {v.message}", *v.witness)
    if cc.point is not None and cc.point not in C.obj_index:
        rep.add("DanglingReference", f"point {cc.point!r} is not an object of the base", cc.point)
    if not rep.ok:
        return rep
    for A in T.objects:
        if C.dst[cc.chi.obj_map[A]] != cc.p.obj_map[A]:
            rep.add("NotOverBase", f"cod(chi({A})) != p({A})", A)
    for m in T.morphisms:
        if arr.squares[cc.chi.mor_map[m]].bottom != cc.p.mor_map[m]:
            rep.add("NotOverBase", f"cod(chi({m})) != p({m})", m)
    for f, Y in _lift_problems(cc.p):
        if not cartesian_lifts(cc.p, f, Y):
            rep.add("NotAFibration", f"no cartesian lift of {f!r} at {Y!r}", f, Y)
    for m in sorted(cartesian_morphisms(cc.p)):
        if not square_is_pullback(C, arr.squares[cc.chi.mor_map[m]]):
            rep.add("CartesianNotPullback", f"chi sends cartesian {m!r} to a non-pullback square", m)
    return rep


def validate_compcat(cc: CompCat) -> CompCat:
    check_compcat(cc).raise_if_failed()
    return cc


def trivial_compcat(C: FinCategory, point: str | None = None) -> CompCat:
    """``T = Arr(C)``, ``p = cod``, ``chi = id``."""
    arr = arrow_category(C)
    chi = FinFunctor(arr.cat, arr.cat, {a: a for a in arr.cat.objects},
                     {m: m for m in arr.cat.morphisms})
    return CompCat(C, arr.cat, arr.cod_fn, chi, point)


def compcat_over_point(T: FinCategory, base: FinCategory | None = None) -> CompCat:
    """Any category ``T`` as the types of a comprehension category over a one-object base.

    The base must have a single object and only its identity; every type
    extends the point by the identity.
    """
    from .generators import terminal_category
    base = base or terminal_category()
    (o,) = base.objects
    i = base.identity[o]
    return CompCat.build(base, T, {A: o for A in T.objects}, {m: i for m in T.morphisms},
                         {A: i for A in T.objects}, {m: i for m in T.morphisms})


# -- classification -----------------------------------------------------------------

FLAGS = ("full", "subcategorical", "replete", "comp_closed", "trivial", "discrete", "split",
         "pointed", "rooted", "contextual")


def _display_set(cc: CompCat) -> set[str]:
    return set(cc.chi.obj_map.values())


def replete_violation(C: FinCategory, display: set[str]) -> tuple[str, str] | None:
    """An arrow isomorphic in ``Arr(C)`` to a display map but not display itself."""
    arr = arrow_category(C)
    for sid, sq in arr.squares.items():
        if sq.src in display and sq.dst not in display and arr.cat.is_iso(sid):
            return sq.src, sq.dst
    return None


def comp_closed_violation(C: FinCategory, display: set[str]) -> tuple | None:
    for o in C.objects:
        if C.identity[o] not in display:
            return ("identity", C.identity[o])
    for d in sorted(display):
        for e in C.out_of(C.dst[d]):
            if e in display and C.compose_table[(e, d)] not in display:
                return ("composite", e, d)
    return None


def extension_edges(cc: CompCat) -> dict[str, list[tuple[str, str]]]:
    """Context ``G`` to its ``(A, G.A)`` for every type ``A`` over ``G``."""
    edges: dict[str, list[tuple[str, str]]] = {o: [] for o in cc.base.objects}
    for A in cc.total.objects:
        edges[cc.ctx(A)].append((A, cc.ext(A)))
    return edges


def reachable_contexts(cc: CompCat, gamma: str) -> set[str]:
    edges = extension_edges(cc)
    seen, stack = {gamma}, [gamma]
    while stack:
        x = stack.pop()
        for _, y in edges[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _has_reachable_cycle(cc: CompCat, gamma: str) -> bool:
    edges = extension_edges(cc)
    state: dict[str, int] = {}
    stack = [(gamma, iter(edges[gamma]))]
    state[gamma] = 1
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            state[node] = 2
            stack.pop()
            continue
        y = nxt[1]
        if state.get(y) == 1:
            return True
        if y not in state:
            state[y] = 1
            stack.append((y, iter(edges[y])))
    return False


def is_rooted(cc: CompCat) -> bool:
    if cc.point is None or not is_terminal(cc.base, cc.point):
        return False
    reach = reachable_contexts(cc, cc.point)
    C = cc.base
    return all(any(C.isomorphic(x, r) for r in reach) for x in C.objects)


def is_contextual(cc: CompCat) -> bool:
    """Each context is the extension of exactly one finite sequence from the point.

    A reachable cycle in the extension graph yields infinitely many
    sequences, which cannot biject with finitely many contexts.
    """
    if not is_rooted(cc):
        return False
    if _has_reachable_cycle(cc, cc.point):
        return False
    counts = {o: 0 for o in cc.base.objects}
    edges = extension_edges(cc)
    stack = [cc.point]
    while stack:
        x = stack.pop()
        counts[x] += 1
        if counts[x] > 1:
            return False
        stack.extend(y for _, y in edges[x])
    # over a terminal point every base map is a map of the slice, so
    # bijectivity on objects already makes the slice functor an isomorphism
    return all(v == 1 for v in counts.values())


def classify(cc: CompCat) -> dict[str, bool | None]:
    r = functor_report(cc.chi)
    full = r.full and r.faithful
    subcat = full and r.injective_on_objects
    display = _display_set(cc)
    arr = cc.arrows
    trivial = (cc.total == arr.cat and all(k == v for k, v in cc.chi.obj_map.items())
               and all(k == v for k, v in cc.chi.mor_map.items()))
    fib = is_fibration(cc.p)
    pointed = cc.point is not None
    return {
        "full": full,
        "subcategorical": subcat,
        "replete": (replete_violation(cc.base, display) is None) if subcat else None,
        "comp_closed": (comp_closed_violation(cc.base, display) is None) if subcat else None,
        "trivial": trivial,
        "discrete": fib and is_discrete_fibration(cc.p),
        "split": fib and find_split_cleaving(cc.p) is not None,
        "pointed": pointed,
        "rooted": is_rooted(cc) if pointed else None,
        "contextual": is_contextual(cc) if pointed else None,
    }


# -- contextual slice -----------------------------------------------------------------

def seq_id(seq: tuple[str, ...]) -> str:
    return "[" + ".".join(seq) + "]"


@dataclass(eq=False)
class Slice:
    """A contextual slice with the data of its evident map back to the input."""

    cc: CompCat
    source: CompCat
    gamma: str
    sequences: dict[str, tuple[str, ...]]
    ext_fn: FinFunctor      # slice base -> source base
    type_fn: FinFunctor     # slice types -> source types


def contextual_slice(cc: CompCat, gamma: str, depth_budget: int | None = None) -> CompCat:
    return build_slice(cc, gamma, depth_budget).cc


def build_slice(cc: CompCat, gamma: str, depth_budget: int | None = None) -> Slice:
    C = cc.base
    if depth_budget is None:
        depth_budget = len(C.objects) * len(cc.total.objects) + 1
    if _has_reachable_cycle(cc, gamma):
        raise SliceInfinite(depth_budget, f"extension graph from {gamma!r} has a cycle: "
                                          "sequences of every length exist")
    # enumerate sequences with their contexts and projections to gamma
    seqs: dict[tuple[str, ...], tuple[str, str]] = {(): (gamma, C.identity[gamma])}
    frontier = [()]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for s in frontier:
            ctx, pi = seqs[s]
            for A in cc.types_over(ctx):
                if depth > depth_budget:
                    raise SliceInfinite(depth, f"sequence enumeration exceeded depth {depth_budget}")
                t = s + (A,)
                seqs[t] = (cc.ext(A), C.compose_table[(pi, cc.proj(A))])
                nxt.append(t)
        frontier = nxt

    names = {s: seq_id(s) for s in seqs}
    mors, under = {}, {}
    for s1, (e1, pi1) in seqs.items():
        for s2, (e2, pi2) in seqs.items():
            for h in C.hom(e1, e2):
                if C.compose_table[(pi2, h)] == pi1:
                    m = f"<{names[s1]}|{h}|{names[s2]}>"
                    mors[m] = (names[s1], names[s2])
                    under[m] = h
    by_triple = {(mors[m][0], under[m], mors[m][1]): m for m in mors}
    ident = {names[s]: by_triple[(names[s], C.identity[e], names[s])] for s, (e, _) in seqs.items()}
    comp = {}
    for g, (gs, gd) in mors.items():
        for f, (fs, fd) in mors.items():
            if fd == gs:
                comp[(g, f)] = by_triple[(fs, C.compose_table[(under[g], under[f])], gd)]
    S = FinCategory(names.values(), mors, ident, comp)
    ctx_of = {names[s]: e for s, (e, _) in seqs.items()}
    ext_fn = FinFunctor(S, C, ctx_of, under)

    q, second = strict_pullback(cc.p, ext_fn)
    Q = q.dom
    seq_of = {names[s]: s for s in seqs}
    chi_obj, chi_top = {}, {}
    for X in Q.objects:
        s, A = q.obj_map[X], second.obj_map[X]
        child = seq_of[s] + (A,)
        chi_obj[X] = by_triple[(names[child], cc.proj(A), s)]
    for m in Q.morphisms:
        u, v = q.mor_map[m], second.mor_map[m]
        a, b = Q.src[m], Q.dst[m]
        sa, sb = seq_of[q.obj_map[a]] + (second.obj_map[a],), seq_of[q.obj_map[b]] + (second.obj_map[b],)
        chi_top[m] = by_triple[(names[sa], cc.top(v), names[sb])]
    out = CompCat.build(S, Q, q.obj_map, q.mor_map, chi_obj, chi_top, point=names[()])
    return Slice(out, cc, gamma, {names[s]: s for s in seqs}, ext_fn, second)


def slice_counit(sl: Slice) -> "CompCatMap":
    """The evident strict map from the slice at the point back to the input."""
    cc = sl.source
    arr = cc.arrows
    phi = {}
    for X in sl.cc.total.objects:
        a = cc.proj(sl.type_fn.obj_map[X])
        phi[X] = arr.lookup(a, a, cc.base.identity[cc.base.src[a]], cc.base.identity[cc.base.dst[a]])
    point_iso = cc.base.identity[cc.point] if sl.gamma == cc.point else None
    return CompCatMap(sl.cc, cc, sl.ext_fn, sl.type_fn, phi, point_iso)


# -- maps ------------------------------------------------------------------------

class CompCatMap:
    """A pseudo map ``(F, Fbar, phi)``.

    ``phi[A]`` is a morphism of ``Arr(C')`` from ``chi'(Fbar A)`` to
    ``F(chi A)``. ``point_iso``, when present, is an isomorphism
    ``F(point) -> point'`` of the target base.
    """

    def __init__(self, src: CompCat, dst: CompCat, F: FinFunctor, Fbar: FinFunctor,
                 phi: Mapping[str, str], point_iso: str | None = None):
        self.src = src
        self.dst = dst
        self.F = F
        self.Fbar = Fbar
        self.phi = dict(phi)
        self.point_iso = point_iso

    @property
    def strict(self) -> bool:
        arr = self.dst.arrows
        for A, sq in self.phi.items():
            s = arr.squares[sq]
            if s.src != s.dst or not arr.cat.is_identity(sq):
                return False
        return self._chi_commutes()

    def _chi_commutes(self) -> bool:
        src, dst = self.src, self.dst
        arr = dst.arrows
        Fm = self.F.mor_map
        for A in src.total.objects:
            if dst.chi.obj_map[self.Fbar.obj_map[A]] != Fm[src.proj(A)]:
                return False
        for m in src.total.morphisms:
            sq = src.arrows.squares[src.chi.mor_map[m]]
            img = arr.find(Fm[sq.src], Fm[sq.dst], Fm[sq.top], Fm[sq.bottom])
            if dst.chi.mor_map[self.Fbar.mor_map[m]] != img:
                return False
        return True

    @property
    def strictly_pointed(self) -> bool:
        return (self.point_iso is not None and self.dst.point is not None
                and self.F.obj_map.get(self.src.point) == self.dst.point
                and self.point_iso == self.dst.base.identity[self.dst.point])

    def _key(self):
        return (self.F._key, self.Fbar._key, tuple(sorted(self.phi.items())), self.point_iso)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompCatMap):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"CompCatMap(F={self.F.obj_map}, Fbar={self.Fbar.obj_map})"


def check_map(m: CompCatMap, require_strict: bool = False) -> ValidationReport:
    rep = ValidationReport("compcat map")
    src, dst = m.src, m.dst
    C2 = dst.base
    for F, what in ((m.F, "F"), (m.Fbar, "Fbar")):
        for v in check_functor(F).violations:
            rep.add(v.code, f"{what}: {v.message}", *v.witness)
    if not rep.ok:
        return rep
    for A in src.total.objects:
        if dst.p.obj_map[m.Fbar.obj_map[A]] != m.F.obj_map[src.p.obj_map[A]]:
            rep.add("NotOverF", f"Fbar({A}) does not lie over F(p({A}))", A)
    for f in src.total.morphisms:
        if dst.p.mor_map[m.Fbar.mor_map[f]] != m.F.mor_map[src.p.mor_map[f]]:
            rep.add("NotOverF", f"Fbar({f}) does not lie over F(p({f}))", f)
    cart2 = cartesian_morphisms(dst.p)
    for f in sorted(cartesian_morphisms(src.p)):
        if m.Fbar.mor_map[f] not in cart2:
            rep.add("CartesianNotPreserved", f"Fbar sends cartesian {f!r} to a non-cartesian map", f)
    if not rep.ok:
        return rep

    arr = dst.arrows
    Fm = m.F.mor_map
    for A in src.total.objects:
        sq_id = m.phi.get(A)
        sq = arr.squares.get(sq_id) if sq_id is not None else None
        want_src = dst.proj(m.Fbar.obj_map[A])
        want_dst = Fm[src.proj(A)]
        if sq is None or sq.src != want_src or sq.dst != want_dst:
            rep.add("PhiNotNatural", f"phi({A}) is not a map chi'(Fbar {A}) -> F(chi {A})", A)
            continue
        if sq.bottom != C2.identity[C2.dst[want_dst]]:
            rep.add("PhiNotOverIdentity", f"phi({A}) does not lie over the identity", A)
        if not arr.cat.is_iso(sq_id):
            rep.add("PhiNotIso", f"phi({A}) is not invertible", A)
    if not rep.ok:
        return rep
    for f in src.total.morphisms:
        a, b = src.total.src[f], src.total.dst[f]
        sq = src.arrows.squares[src.chi.mor_map[f]]
        Fchi = arr.lookup(Fm[sq.src], Fm[sq.dst], Fm[sq.top], Fm[sq.bottom])
        lhs = arr.cat.compose_table[(Fchi, m.phi[a])]
        rhs = arr.cat.compose_table[(m.phi[b], dst.chi.mor_map[m.Fbar.mor_map[f]])]
        if lhs != rhs:
            rep.add("PhiNotNatural", f"phi is not natural at {f!r}", f)
    if m.point_iso is not None:
        if src.point is None or dst.point is None:
            rep.add("PointMismatch", "point isomorphism given between unpointed structures")
        elif m.point_iso not in C2.hom(m.F.obj_map[src.point], dst.point) or not C2.is_iso(m.point_iso):
            rep.add("PointNotIso", "point_iso is not an isomorphism F(point) -> point'", m.point_iso)
    if require_strict and rep.ok and not m.strict:
        rep.add("NotStrict", "map does not preserve context extension on the nose")
    return rep


def validate_map(m: CompCatMap, require_strict: bool = False) -> CompCatMap:
    check_map(m, require_strict).raise_if_failed()
    return m


def identity_map(cc: CompCat) -> CompCatMap:
    from .fincat import identity_functor
    arr = cc.arrows
    phi = {A: arr.cat.identity[cc.proj(A)] for A in cc.total.objects}
    pi = cc.base.identity[cc.point] if cc.point is not None else None
    return CompCatMap(cc, cc, identity_functor(cc.base), identity_functor(cc.total), phi, pi)


def compose_maps(n: CompCatMap, m: CompCatMap) -> CompCatMap:
    """``n . m``; comprehension isos compose as ``Arr(G)(phi_A) . psi_(Fbar A)``."""
    from .fincat import compose_functors
    arr2 = n.dst.arrows
    arr1 = m.dst.arrows
    Gm = n.F.mor_map
    phi = {}
    for A in m.src.total.objects:
        sq = arr1.squares[m.phi[A]]
        g_phi = arr2.lookup(Gm[sq.src], Gm[sq.dst], Gm[sq.top], Gm[sq.bottom])
        phi[A] = arr2.cat.compose_table[(g_phi, n.phi[m.Fbar.obj_map[A]])]
    pi = None
    if m.point_iso is not None and n.point_iso is not None:
        pi = n.dst.base.compose_table[(n.point_iso, Gm[m.point_iso])]
    return CompCatMap(m.src, n.dst, compose_functors(n.F, m.F), compose_functors(n.Fbar, m.Fbar),
                      phi, pi)


def is_equivalence(m: CompCatMap) -> bool:
    """Base and total functors are both equivalences of categories."""
    return functor_report(m.F).equivalence and functor_report(m.Fbar).equivalence


def is_isomorphism_map(m: CompCatMap) -> bool:
    from .fincat import is_isomorphism
    return is_isomorphism(m.F) and is_isomorphism(m.Fbar)


def iter_maps(src: CompCat, dst: CompCat, strict_only: bool = False, pointed: bool = False,
              strictly_pointed: bool = False, budget: int = DEFAULT_BUDGET,
              counter: list[int] | None = None) -> Iterator[CompCatMap]:
    """All valid maps ``src -> dst`` in canonical order: ``F``, then ``Fbar``, then ``phi``.

    With ``pointed``, every choice of point isomorphism yields its own map.
    ``budget`` caps the object maps and phi candidates examined.
    """
    counter = counter if counter is not None else [0]
    C1, C2 = src.base, dst.base
    T1, T2 = src.total, dst.total
    arr2 = dst.arrows
    pointed = pointed or strictly_pointed
    if pointed and (src.point is None or dst.point is None):
        return
    if pointed:
        targets = [dst.point] if strictly_pointed else [x for x in C2.objects
                                                         if C2.isomorphic(x, dst.point)]
        obj_allowed = lambda x: targets if x == src.point else C2.objects
    else:
        obj_allowed = None
    cart1, cart2 = cartesian_morphisms(src.p), cartesian_morphisms(dst.p)
    over2_obj: dict[str, list[str]] = {}
    for B in T2.objects:
        over2_obj.setdefault(dst.p.obj_map[B], []).append(B)
    over2_mor: dict[str, list[str]] = {}
    for v in T2.morphisms:
        over2_mor.setdefault(dst.p.mor_map[v], []).append(v)

    for Fo, Fm in search_functors(C1, C2, obj_allowed=obj_allowed, budget=budget, counter=counter):
        F = FinFunctor(C1, C2, Fo, Fm)
        if pointed:
            isos = C2.isos(Fo[src.point], dst.point)
            if strictly_pointed:
                isos = [i for i in isos if i == C2.identity[dst.point]]
            if not isos:
                continue
        else:
            isos = [None]

        def ob_ok(A, F=F):
            cands = over2_obj.get(Fo[src.p.obj_map[A]], [])
            if strict_only:
                cands = [B for B in cands if dst.proj(B) == Fm[src.proj(A)]]
            return cands

        def mor_ok(f, F=F):
            cands = over2_mor.get(Fm[src.p.mor_map[f]], [])
            if f in cart1:
                cands = [v for v in cands if v in cart2]
            if strict_only:
                sq = src.arrows.squares[src.chi.mor_map[f]]
                img = arr2.find(Fm[sq.src], Fm[sq.dst], Fm[sq.top], Fm[sq.bottom])
                cands = [v for v in cands if dst.chi.mor_map[v] == img]
            return cands

        for Bo, Bm in search_functors(T1, T2, obj_allowed=ob_ok, mor_allowed=mor_ok,
                                      budget=budget, counter=counter):
            Fbar = FinFunctor(T1, T2, Bo, Bm)
            for phi in _phi_choices(src, dst, F, Fbar, strict_only, budget, counter):
                for pi in isos:
                    yield CompCatMap(src, dst, F, Fbar, phi, pi)


def _phi_choices(src: CompCat, dst: CompCat, F: FinFunctor, Fbar: FinFunctor,
                 strict_only: bool, budget: int, counter: list[int]) -> Iterator[dict]:
    C2 = dst.base
    arr2 = dst.arrows
    Fm = F.mor_map
    T1 = src.total
    types = list(T1.objects)
    cands: dict[str, list[str]] = {}
    for A in types:
        a = dst.proj(Fbar.obj_map[A])
        b = Fm[src.proj(A)]
        bottom = C2.identity[C2.dst[b]]
        if strict_only:
            cands[A] = [arr2.cat.identity[a]] if a == b else []
        else:
            cands[A] = [arr2.lookup(a, b, t, bottom) for t in C2.isos(C2.src[a], C2.src[b])
                        if arr2.find(a, b, t, bottom) is not None]
        if not cands[A]:
            return
    # naturality squares, checked once both endpoints are assigned
    pos = {A: i for i, A in enumerate(types)}
    checks: list[list[tuple]] = [[] for _ in types]
    for f in T1.morphisms:
        a, b = T1.src[f], T1.dst[f]
        sq = src.arrows.squares[src.chi.mor_map[f]]
        Fchi = arr2.lookup(Fm[sq.src], Fm[sq.dst], Fm[sq.top], Fm[sq.bottom])
        chi2 = dst.chi.mor_map[Fbar.mor_map[f]]
        checks[max(pos[a], pos[b])].append((a, b, Fchi, chi2))
    phi: dict[str, str] = {}

    def go(i: int):
        if i == len(types):
            yield dict(phi)
            return
        A = types[i]
        for c in cands[A]:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded(counter[0], budget, "candidates")
            phi[A] = c
            if all(arr2.cat.compose_table[(Fchi, phi[a])] == arr2.cat.compose_table[(phi[b], chi2)]
                   for a, b, Fchi, chi2 in checks[i]):
                yield from go(i + 1)
            del phi[A]

    yield from go(0)


def enumerate_maps(src: CompCat, dst: CompCat, strict_only: bool = False, pointed: bool = False,
                   budget: int = DEFAULT_BUDGET, strictly_pointed: bool = False) -> list[CompCatMap]:
    return list(iter_maps(src, dst, strict_only, pointed, strictly_pointed, budget))


# -- transformations ----------------------------------------------------------------

class CompCatTransformation:
    """``(alpha, alphabar) : (F, Fbar, phi) => (G, Gbar, gamma)``."""

    def __init__(self, src: CompCatMap, dst: CompCatMap, alpha: Mapping[str, str],
                 alphabar: Mapping[str, str]):
        self.src = src
        self.dst = dst
        self.alpha = dict(alpha)
        self.alphabar = dict(alphabar)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompCatTransformation):
            return NotImplemented
        return self.alpha == other.alpha and self.alphabar == other.alphabar

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.alpha.items())), tuple(sorted(self.alphabar.items()))))

    def is_invertible(self) -> bool:
        C2, T2 = self.src.dst.base, self.src.dst.total
        return (all(C2.is_iso(x) for x in self.alpha.values())
                and all(T2.is_iso(x) for x in self.alphabar.values()))


def check_transformation(t: CompCatTransformation) -> ValidationReport:
    rep = ValidationReport("transformation")
    M, N = t.src, t.dst
    if not (M.src == N.src and M.dst == N.dst):
        rep.add("NotParallel", "maps do not share source and target")
        return rep
    src, dst = M.src, M.dst
    C1, C2 = src.base, dst.base
    T1, T2 = src.total, dst.total
    arr2 = dst.arrows
    for o in C1.objects:
        a = t.alpha.get(o)
        if a not in C2.hom(M.F.obj_map[o], N.F.obj_map[o]):
            rep.add("LawViolation", f"alpha({o}) does not run F({o}) -> G({o})", o)
    for A in T1.objects:
        a = t.alphabar.get(A)
        if a not in T2.hom(M.Fbar.obj_map[A], N.Fbar.obj_map[A]):
            rep.add("LawViolation", f"alphabar({A}) does not run Fbar({A}) -> Gbar({A})", A)
    if not rep.ok:
        return rep
    for f in C1.morphisms:
        x, y = C1.src[f], C1.dst[f]
        if C2.compose_table[(N.F.mor_map[f], t.alpha[x])] != C2.compose_table[(t.alpha[y], M.F.mor_map[f])]:
            rep.add("LawViolation", f"alpha is not natural at {f!r}", f)
    for f in T1.morphisms:
        x, y = T1.src[f], T1.dst[f]
        if T2.compose_table[(N.Fbar.mor_map[f], t.alphabar[x])] != T2.compose_table[(t.alphabar[y], M.Fbar.mor_map[f])]:
            rep.add("LawViolation", f"alphabar is not natural at {f!r}", f)
    for A in T1.objects:
        if dst.p.mor_map[t.alphabar[A]] != t.alpha[src.ctx(A)]:
            rep.add("NotOverAlpha", f"alphabar({A}) does not lie over alpha", A)
    if not rep.ok:
        return rep
    for A in T1.objects:
        if not _coherent(t, A):
            rep.add("CoherenceFailure", f"gamma_A chi'(alphabar_A) != alpha_(G.A) phi_A at {A!r}", A)
    if M.point_iso is not None and N.point_iso is not None:
        if C2.compose_table[(N.point_iso, t.alpha[src.point])] != M.point_iso:
            rep.add("NotPointed", "alpha at the point does not commute with the point isomorphisms")
    return rep


def _coherent(t: CompCatTransformation, A: str) -> bool:
    M, N = t.src, t.dst
    src, dst = M.src, M.dst
    C2 = dst.base
    arr2 = dst.arrows
    chi_A = src.proj(A)
    e, g = C2.src[chi_A], C2.dst[chi_A]
    # Arr(alpha) at chi_A : F(chi_A) -> G(chi_A)
    sq = arr2.find(M.F.mor_map[chi_A], N.F.mor_map[chi_A], t.alpha[e], t.alpha[g])
    if sq is None:
        return False
    lhs = arr2.cat.compose_table[(N.phi[A], dst.chi.mor_map[t.alphabar[A]])]
    rhs = arr2.cat.compose_table[(sq, M.phi[A])]
    return lhs == rhs


def validate_transformation(t: CompCatTransformation) -> CompCatTransformation:
    check_transformation(t).raise_if_failed()
    return t


def identity_transformation(m: CompCatMap) -> CompCatTransformation:
    C2, T2 = m.dst.base, m.dst.total
    return CompCatTransformation(m, m, {o: C2.identity[x] for o, x in m.F.obj_map.items()},
                                 {A: T2.identity[x] for A, x in m.Fbar.obj_map.items()})


def iter_transformations(M: CompCatMap, N: CompCatMap, pointed: bool = False,
                         budget: int = DEFAULT_BUDGET) -> Iterator[CompCatTransformation]:
    """Every transformation ``M => N``, by backtracking with naturality pruning."""
    src, dst = M.src, M.dst
    C1, C2, T1, T2 = src.base, dst.base, src.total, dst.total
    counter = [0]

    def tick():
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(counter[0], budget, "candidates")

    def nat_search(D1, D2, fo, go, fm, gm, cand_fn):
        objs = list(D1.objects)
        pos = {o: i for i, o in enumerate(objs)}
        checks: list[list[str]] = [[] for _ in objs]
        for f in D1.morphisms:
            checks[max(pos[D1.src[f]], pos[D1.dst[f]])].append(f)
        comp: dict[str, str] = {}

        def go_(i):
            if i == len(objs):
                yield dict(comp)
                return
            o = objs[i]
            for c in cand_fn(o):
                tick()
                comp[o] = c
                if all(D2.compose_table[(gm[f], comp[D1.src[f]])]
                       == D2.compose_table[(comp[D1.dst[f]], fm[f])] for f in checks[i]):
                    yield from go_(i + 1)
                del comp[o]

        yield from go_(0)

    alpha_cands = lambda o: C2.hom(M.F.obj_map[o], N.F.obj_map[o])
    for alpha in nat_search(C1, C2, M.F.obj_map, N.F.obj_map, M.F.mor_map, N.F.mor_map, alpha_cands):
        if pointed and M.point_iso is not None and N.point_iso is not None:
            if C2.compose_table[(N.point_iso, alpha[src.point])] != M.point_iso:
                continue

        def bar_cands(A, alpha=alpha):
            a = alpha[src.ctx(A)]
            return [v for v in T2.hom(M.Fbar.obj_map[A], N.Fbar.obj_map[A]) if dst.p.mor_map[v] == a]

        for alphabar in nat_search(T1, T2, M.Fbar.obj_map, N.Fbar.obj_map, M.Fbar.mor_map,
                                   N.Fbar.mor_map, bar_cands):
            t = CompCatTransformation(M, N, alpha, alphabar)
            if all(_coherent(t, A) for A in T1.objects):
                yield t


def enumerate_transformations(M: CompCatMap, N: CompCatMap, pointed: bool = False,
                              budget: int = DEFAULT_BUDGET) -> list[CompCatTransformation]:
    return list(iter_transformations(M, N, pointed, budget))


def certify_equivalence(m: CompCatMap, budget: int = DEFAULT_BUDGET):
    """Search a pseudo inverse ``n`` with invertible transformations to both identities.

    Returns ``(n, unit, counit)`` or None.
    """
    if not is_equivalence(m):
        return None
    idA, idB = identity_map(m.src), identity_map(m.dst)
    for n in iter_maps(m.dst, m.src, budget=budget):
        if not is_equivalence(n):
            continue
        eta = next((t for t in iter_transformations(idA, compose_maps(n, m), budget=budget)
                    if t.is_invertible()), None)
        if eta is None:
            continue
        eps = next((t for t in iter_transformations(compose_maps(m, n), idB, budget=budget)
                    if t.is_invertible()), None)
        if eps is not None:
            return n, eta, eps
    return None


# -- strictification -------------------------------------------------------------------

def strictify_contextual_map(m: CompCatMap) -> tuple[CompCatMap, CompCatTransformation]:
    """A strict, strictly pointed map isomorphic to the pointed pseudo map ``m``.

    Built by induction on the length of contexts: the point goes to the point,
    each ``G(Gamma.A)`` is the comprehension of the reindexing of ``Fbar A``
    along ``alpha_Gamma^-1``, and everything else is conjugated by ``alpha``.
    """
    src, dst = m.src, m.dst
    if src.point is None or not is_contextual(src):
        raise PreconditionFailed("source is not pointed contextual")
    if dst.point is None or not is_terminal(dst.base, dst.point):
        raise PreconditionFailed("target point is not terminal")
    if m.point_iso is None:
        raise PreconditionFailed("map is not pointed")
    C1, C2, T1, T2 = src.base, dst.base, src.total, dst.total
    arr2 = dst.arrows
    cleave = compute_cleaving(dst.p)
    alpha = {src.point: m.point_iso}
    alphabar: dict[str, str] = {}
    Go = {src.point: dst.point}
    Gbo: dict[str, str] = {}
    order = [src.point]
    edges = extension_edges(src)
    i = 0
    while i < len(order):
        gamma = order[i]
        i += 1
        for A, ext in edges[gamma]:
            a_inv = C2.inverse(alpha[gamma])
            FA = m.Fbar.obj_map[A]
            c = cleave(a_inv, FA)                  # lift of alpha^-1 at Fbar A: G-bar A -> Fbar A
            alphabar[A] = T2.inverse(c)
            Gbo[A] = T2.src[c]
            Go[ext] = C2.src[dst.proj(Gbo[A])]
            top_bar = arr2.squares[dst.chi.mor_map[alphabar[A]]].top
            top_phi = arr2.squares[m.phi[A]].top
            alpha[ext] = C2.compose_table[(top_bar, C2.inverse(top_phi))]
            order.append(ext)
    Gm = {f: C2.comp(alpha[C1.dst[f]], m.F.mor_map[f], C2.inverse(alpha[C1.src[f]]))
          for f in C1.morphisms}
    Gbm = {v: T2.comp(alphabar[T1.dst[v]], m.Fbar.mor_map[v], T2.inverse(alphabar[T1.src[v]]))
           for v in T1.morphisms}
    G = FinFunctor(C1, C2, Go, Gm)
    Gbar = FinFunctor(T1, T2, Gbo, Gbm)
    phi = {A: arr2.cat.identity[dst.proj(Gbo[A])] for A in T1.objects}
    strict = CompCatMap(src, dst, G, Gbar, phi, C2.identity[dst.point])
    return strict, CompCatTransformation(m, strict, alpha, alphabar)
