"""Cartesian morphisms, (discrete, split) fibrations, cleavings and strict pullbacks."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, NotAFibration
from .fincat import FinCategory, FinFunctor, pair_id

SPLIT_BUDGET = 10**5


def is_cartesian(p: FinFunctor, m: str) -> bool:
    return m in cartesian_morphisms(p)


def cartesian_morphisms(p: FinFunctor) -> frozenset[str]:
    """Every p-cartesian morphism of ``p.dom``, by exhaustive filler counting."""
    if "cartesian" in p._memo:
        return p._memo["cartesian"]
    T, C = p.dom, p.cod
    out = set()
    for m in T.morphisms:
        if _cartesian(p, m):
            out.add(m)
    res = frozenset(out)
    p._memo["cartesian"] = res
    return res


def _cartesian(p: FinFunctor, m: str) -> bool:
    T, C = p.dom, p.cod
    X, Y = T.src[m], T.dst[m]
    pm = p.mor_map[m]
    pX = p.obj_map[X]
    for psi in T.into(Y):
        Z = T.src[psi]
        ppsi = p.mor_map[psi]
        for g in C.hom(p.obj_map[Z], pX):
            if C.compose_table[(pm, g)] != ppsi:
                continue
            fillers = 0
            for h in T.hom(Z, X):
                if p.mor_map[h] == g and T.compose_table[(m, h)] == psi:
                    fillers += 1
                    if fillers > 1:
                        return False
            if fillers != 1:
                return False
    return True


def fiber(p: FinFunctor, c: str) -> list[str]:
    """Objects of ``p.dom`` lying over ``c``."""
    return _fibers(p).get(c, [])


def _fibers(p: FinFunctor) -> dict[str, list[str]]:
    if "fibers" not in p._memo:
        d: dict[str, list[str]] = {}
        for t in p.dom.objects:
            d.setdefault(p.obj_map[t], []).append(t)
        p._memo["fibers"] = d
    return p._memo["fibers"]


def lifts(p: FinFunctor, f: str, Y: str) -> list[str]:
    """Morphisms over ``f`` with target ``Y``, in canonical order."""
    return [m for m in p.dom.into(Y) if p.mor_map[m] == f]


def cartesian_lifts(p: FinFunctor, f: str, Y: str) -> list[str]:
    cart = cartesian_morphisms(p)
    return [m for m in lifts(p, f, Y) if m in cart]


def _lift_problems(p: FinFunctor):
    """All pairs ``(f, Y)`` with ``Y`` over the target of ``f``."""
    C = p.cod
    for f in C.morphisms:
        for Y in fiber(p, C.dst[f]):
            yield f, Y


@dataclass
class Cleaving:
    p: FinFunctor
    lift: dict[tuple[str, str], str] = field(default_factory=dict)

    def __call__(self, f: str, Y: str) -> str:
        return self.lift[(f, Y)]


def _canonical_candidates(p: FinFunctor, f: str, Y: str) -> list[str]:
    cands = cartesian_lifts(p, f, Y)
    C, T = p.cod, p.dom
    if C.is_identity(f) and T.identity[Y] in cands:
        cands.remove(T.identity[Y])
        cands.insert(0, T.identity[Y])
    return cands


def fibration_report(p: FinFunctor, budget: int = SPLIT_BUDGET) -> dict:
    failures = []
    discrete = True
    for f, Y in _lift_problems(p):
        if not cartesian_lifts(p, f, Y):
            failures.append([f, Y])
        if len(lifts(p, f, Y)) != 1:
            discrete = False
    fib = not failures
    splittable = fib and find_split_cleaving(p, budget) is not None
    return {"fibration": fib, "discrete": fib and discrete, "splittable": splittable,
            "witness_failures": failures}


def is_fibration(p: FinFunctor) -> bool:
    return all(cartesian_lifts(p, f, Y) for f, Y in _lift_problems(p))


def is_discrete_fibration(p: FinFunctor) -> bool:
    return all(len(lifts(p, f, Y)) == 1 for f, Y in _lift_problems(p))


def compute_cleaving(p: FinFunctor) -> Cleaving:
    """Lexicographically least cartesian lifts; identities lift to identities."""
    if "cleaving" in p._memo:
        return p._memo["cleaving"]
    lift = {}
    for f, Y in _lift_problems(p):
        cands = _canonical_candidates(p, f, Y)
        if not cands:
            raise NotAFibration(f"no cartesian lift of {f!r} at {Y!r}")
        lift[(f, Y)] = cands[0]
    cl = Cleaving(p, lift)
    p._memo["cleaving"] = cl
    return cl


def split_violation(c: Cleaving) -> tuple | None:
    """First failure of strict functoriality of ``c``, or None.

    The composite law checked is ``lift(f . g, Y) == lift(f, Y) . lift(g, X)``
    where ``X`` is the source of ``lift(f, Y)``.
    """
    p = c.p
    C, T = p.cod, p.dom
    for (f, Y), m in c.lift.items():
        if C.is_identity(f) and m != T.identity[Y]:
            return ("identity", f, Y)
    for (f, Y), a in c.lift.items():
        X = T.src[a]
        for g in C.into(C.src[f]):
            b = c.lift[(g, X)]
            if c.lift[(C.compose_table[(f, g)], Y)] != T.compose_table[(a, b)]:
                return ("composite", f, g, Y)
    return None


def is_split(c: Cleaving) -> bool:
    return split_violation(c) is None


def find_split_cleaving(p: FinFunctor, budget: int = SPLIT_BUDGET) -> Cleaving | None:
    """Backtracking search for a split cleaving, canonical choices first.

    ``budget`` caps the number of lift assignments tried.
    """
    key = ("split", budget)
    if key in p._memo:
        return p._memo[key]
    C, T = p.cod, p.dom
    problems = sorted(_lift_problems(p), key=lambda fy: (not C.is_identity(fy[0]), fy))
    cands = {}
    for f, Y in problems:
        cs = _canonical_candidates(p, f, Y)
        if C.is_identity(f):
            cs = [m for m in cs if m == T.identity[Y]]
        cands[(f, Y)] = cs
    lift: dict[tuple[str, str], str] = {}
    tried = 0

    def consistent(key: tuple[str, str]) -> bool:
        h, Y = key
        m = lift[key]
        # key as the outer factor f
        X = T.src[m]
        for g in C.into(C.src[h]):
            b = lift.get((g, X))
            c = lift.get((C.compose_table[(h, g)], Y))
            if b is not None and c is not None and c != T.compose_table[(m, b)]:
                return False
        # key as the inner factor g
        for f in C.out_of(C.dst[h]):
            for Y2 in fiber(p, C.dst[f]):
                a = lift.get((f, Y2))
                if a is None or T.src[a] != Y:
                    continue
                c = lift.get((C.compose_table[(f, h)], Y2))
                if c is not None and c != T.compose_table[(a, m)]:
                    return False
        # key as the composite
        for g in C.out_of(C.src[h]):
            for f in C.into(C.dst[h]):
                if C.src[f] != C.dst[g] or C.compose_table[(f, g)] != h:
                    continue
                a = lift.get((f, Y))
                if a is None:
                    continue
                b = lift.get((g, T.src[a]))
                if b is not None and m != T.compose_table[(a, b)]:
                    return False
        return True

    def search(i: int) -> bool:
        nonlocal tried
        if i == len(problems):
            return True
        key = problems[i]
        for m in cands[key]:
            tried += 1
            if tried > budget:
                raise BudgetExceeded(tried, budget, "cleaving assignments")
            lift[key] = m
            if consistent(key) and search(i + 1):
                return True
            del lift[key]
        return False

    found = Cleaving(p, dict(lift)) if search(0) else None
    p._memo[key] = found
    return found


def strict_pullback(p: FinFunctor, F: FinFunctor) -> tuple[FinFunctor, FinFunctor]:
    """The strict pullback of ``p : T -> C`` along ``F : D -> C``.

    Objects ``"(d,t)"`` with ``F(d) == p(t)``, morphisms ``"(u,v)"`` likewise.
    Returns the projections to ``D`` and to ``T``.
    """
    T, D = p.dom, F.dom
    objs, o1, o2 = [], {}, {}
    by_base: dict[str, list[str]] = {}
    for t in T.objects:
        by_base.setdefault(p.obj_map[t], []).append(t)
    for d in D.objects:
        for t in by_base.get(F.obj_map[d], ()):
            o = pair_id(d, t)
            objs.append(o)
            o1[o], o2[o] = d, t
    mors, m1, m2 = {}, {}, {}
    mby: dict[str, list[str]] = {}
    for v in T.morphisms:
        mby.setdefault(p.mor_map[v], []).append(v)
    for u in D.morphisms:
        for v in mby.get(F.mor_map[u], ()):
            m = pair_id(u, v)
            mors[m] = (pair_id(D.src[u], T.src[v]), pair_id(D.dst[u], T.dst[v]))
            m1[m], m2[m] = u, v
    ident = {o: pair_id(D.identity[o1[o]], T.identity[o2[o]]) for o in objs}
    comp = {}
    for g in mors:
        for f in mors:
            if mors[f][1] == mors[g][0]:
                comp[(g, f)] = pair_id(D.compose_table[(m1[g], m1[f])],
                                       T.compose_table[(m2[g], m2[f])])
    P = FinCategory(objs, mors, ident, comp)
    return FinFunctor(P, D, o1, m1), FinFunctor(P, T, o2, m2)


def pullback_fibration(p: FinFunctor, F: FinFunctor, check: bool = True) -> FinFunctor:
    if F.cod != p.cod:
        raise ValueError("pullback_fibration: F and p have different codomains")
    q, _ = strict_pullback(p, F)
    if check and not is_fibration(q):
        raise NotAFibration("strict pullback is not a fibration")
    return q
