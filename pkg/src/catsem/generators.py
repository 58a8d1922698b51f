"""Constructors for small finite categories used as test instances."""
from __future__ import annotations

from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from .errors import CyclicGraph, NotAMonoid, NotAPartialOrder
from .fincat import FinCategory, pair_id


def poset_category(relation: Iterable[tuple], elements: Iterable = ()) -> FinCategory:
    """The poset generated by ``relation`` (pairs ``a <= b``), closed reflexively and transitively.

    The morphism ``a -> b`` is named ``"a<=b"``. Raises NotAPartialOrder when
    the closure identifies two distinct elements.
    """
    rel = {(str(a), str(b)) for a, b in relation}
    elems = {str(x) for x in elements} | {x for p in rel for x in p}
    leq = {x: {x} for x in elems}
    for a, b in rel:
        leq[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elems:
            new = set().union(*(leq[b] for b in leq[a]))
            if new != leq[a]:
                leq[a] = new
                changed = True
    for a in elems:
        for b in leq[a]:
            if a != b and a in leq[b]:
                raise NotAPartialOrder(f"{a} <= {b} <= {a} with {a} != {b}")
    name = lambda a, b: f"{a}<={b}"
    mors = {name(a, b): (a, b) for a in elems for b in leq[a]}
    comp = {}
    for a in elems:
        for b in leq[a]:
            for c in leq[b]:
                comp[(name(b, c), name(a, b))] = name(a, c)
    return FinCategory(elems, mors, {a: name(a, a) for a in elems}, comp)


def chain(n: int) -> FinCategory:
    """The ordinal ``0 < 1 < ... < n-1``."""
    return poset_category([(i, i + 1) for i in range(n - 1)], range(n))


def discrete_category(names: Iterable | int) -> FinCategory:
    if isinstance(names, int):
        names = range(names)
    return poset_category([], names)


def terminal_category(name: str = "*") -> FinCategory:
    return discrete_category([name])


def indiscrete_category(names: Iterable) -> FinCategory:
    """Exactly one morphism between any two objects; every object is terminal."""
    elems = sorted({str(x) for x in names})
    name = lambda a, b: f"{a}~{b}"
    mors = {name(a, b): (a, b) for a in elems for b in elems}
    comp = {(name(b, c), name(a, b)): name(a, c) for a in elems for b in elems for c in elems}
    return FinCategory(elems, mors, {a: name(a, a) for a in elems}, comp)


def powerset_lattice(n: int) -> FinCategory:
    """Subsets of ``{0..n-1}`` under inclusion; objects are bit strings."""
    subsets = ["".join(str((s >> i) & 1) for i in range(n)) for s in range(2 ** n)]
    rel = [(a, b) for a in subsets for b in subsets
           if all(x <= y for x, y in zip(a, b))]
    return poset_category(rel, subsets)


def free_category_on_dag(edges: Mapping[str, tuple] | Iterable[tuple],
                         vertices: Iterable = ()) -> FinCategory:
    """Paths in an acyclic graph.

    ``edges`` maps an edge name to ``(src, dst)`` (or is a list of
    ``(name, src, dst)``). Identities are ``"id:X"``; a path is its edge names
    in traversal order joined by ``";"``.
    """
    if isinstance(edges, Mapping):
        elist = [(str(e), str(s), str(d)) for e, (s, d) in edges.items()]
    else:
        elist = [(str(e), str(s), str(d)) for e, s, d in edges]
    verts = {str(v) for v in vertices} | {x for _, s, d in elist for x in (s, d)}
    out: dict[str, list[tuple[str, str]]] = {v: [] for v in verts}
    for e, s, d in sorted(elist):
        out[s].append((e, d))

    # depth-first cycle detection
    state: dict[str, int] = {}

    def visit(v: str) -> None:
        state[v] = 1
        for _, w in out[v]:
            if state.get(w) == 1:
                raise CyclicGraph(f"cycle through {w!r}")
            if w not in state:
                visit(w)
        state[v] = 2

    for v in sorted(verts):
        if v not in state:
            visit(v)

    paths: dict[str, tuple[str, str, tuple[str, ...]]] = {}
    for v in verts:
        stack = [(v, ())]
        while stack:
            here, path = stack.pop()
            if path:
                paths[";".join(path)] = (v, here, path)
            for e, w in out[here]:
                stack.append((w, path + (e,)))
    mors = {f"id:{v}": (v, v) for v in verts}
    mors.update({p: (s, d) for p, (s, d, _) in paths.items()})
    ident = {v: f"id:{v}" for v in verts}
    comp = {}
    for f, (fs, fd) in mors.items():
        for g, (gs, gd) in mors.items():
            if fd != gs:
                continue
            if f.startswith("id:"):
                comp[(g, f)] = g
            elif g.startswith("id:"):
                comp[(g, f)] = f
            else:
                comp[(g, f)] = f + ";" + g
    return FinCategory(verts, mors, ident, comp)


def monoid_category(table: Mapping[tuple, object], obj: str = "*") -> FinCategory:
    """One-object category of a finite monoid; ``table[(a, b)]`` is ``a * b``.

    Composition ``g . f`` is ``g * f``. Raises NotAMonoid when the table is
    not total, not associative or has no two-sided unit.
    """
    tab = {(str(a), str(b)): str(c) for (a, b), c in table.items()}
    elems = sorted({x for p in tab for x in p} | set(tab.values()))
    for a, b in iproduct(elems, elems):
        if (a, b) not in tab:
            raise NotAMonoid(f"product {a}*{b} missing")
    for a, b, c in iproduct(elems, elems, elems):
        if tab[(tab[(a, b)], c)] != tab[(a, tab[(b, c)])]:
            raise NotAMonoid(f"not associative at ({a}, {b}, {c})")
    units = [e for e in elems if all(tab[(e, a)] == a == tab[(a, e)] for a in elems)]
    if not units:
        raise NotAMonoid("no unit")
    return FinCategory([obj], {a: (obj, obj) for a in elems}, {obj: units[0]}, tab)


def product(C: FinCategory, D: FinCategory) -> FinCategory:
    objs = [pair_id(a, b) for a in C.objects for b in D.objects]
    mors = {pair_id(f, g): (pair_id(C.src[f], D.src[g]), pair_id(C.dst[f], D.dst[g]))
            for f in C.morphisms for g in D.morphisms}
    ident = {pair_id(a, b): pair_id(C.identity[a], D.identity[b])
             for a in C.objects for b in D.objects}
    comp = {}
    for (g1, f1), h1 in C.compose_table.items():
        for (g2, f2), h2 in D.compose_table.items():
            comp[(pair_id(g1, g2), pair_id(f1, f2))] = pair_id(h1, h2)
    return FinCategory(objs, mors, ident, comp)


def opposite(C: FinCategory) -> FinCategory:
    """Same ids with sources and targets swapped."""
    mors = {m: (C.dst[m], C.src[m]) for m in C.morphisms}
    comp = {(f, g): h for (g, f), h in C.compose_table.items()}
    return FinCategory(C.objects, mors, C.identity, comp)


def finset_category(sizes: Mapping[str, int],
                    keep=None) -> FinCategory:
    """Full subcategory of finite sets on objects of the given sizes.

    The function ``a -> b`` with values ``v0 v1 ...`` is named ``"a>b:v0v1..."``.
    ``keep(name, values, src, dst)`` optionally filters the morphisms; the
    caller is responsible for keeping identities and closing under
    composition.
    """
    sizes = {str(k): int(v) for k, v in sizes.items()}
    if any(v > 10 for v in sizes.values()):
        raise ValueError("finset_category supports sets of size at most 10")
    name = lambda a, b, vals: f"{a}>{b}:" + "".join(map(str, vals))
    mors: dict[str, tuple[str, str]] = {}
    funcs: dict[str, tuple[int, ...]] = {}
    for a, na in sizes.items():
        for b, nb in sizes.items():
            for vals in iproduct(range(nb), repeat=na):
                if keep is not None and not keep(name(a, b, vals), vals, a, b):
                    continue
                m = name(a, b, vals)
                mors[m] = (a, b)
                funcs[m] = vals
    ident = {a: name(a, a, tuple(range(n))) for a, n in sizes.items()}
    comp = {}
    for f, (fa, fb) in mors.items():
        for g, (ga, gb) in mors.items():
            if fb == ga:
                h = name(fa, gb, tuple(funcs[g][x] for x in funcs[f]))
                comp[(g, f)] = h
    return FinCategory(sizes, mors, ident, comp)


def finset_values(m: str) -> tuple[int, ...]:
    """Values of a morphism named by :func:`finset_category`."""
    return tuple(int(c) for c in m.split(":", 1)[1])


def is_injective_name(m: str) -> bool:
    vals = finset_values(m)
    return len(set(vals)) == len(vals)


def sum_category(parts: Sequence[FinCategory]) -> FinCategory:
    """Disjoint union; ids are prefixed with ``"k:"`` for the k-th summand."""
    objs, mors, ident, comp = [], {}, {}, {}
    for k, C in enumerate(parts):
        p = f"{k}:"
        objs += [p + o for o in C.objects]
        mors.update({p + m: (p + C.src[m], p + C.dst[m]) for m in C.morphisms})
        ident.update({p + o: p + i for o, i in C.identity.items()})
        comp.update({(p + g, p + f): p + h for (g, f), h in C.compose_table.items()})
    return FinCategory(objs, mors, ident, comp)
