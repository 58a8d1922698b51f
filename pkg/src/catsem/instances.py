"""Named instances and generated families used by the law checks and tests."""
from __future__ import annotations

import random
from itertools import combinations

from .compcat import CompCat, compcat_over_point, trivial_compcat
from .errors import CatsemError, PreconditionFailed
from .fincat import FinCategory, is_lex
from .generators import (chain, discrete_category, finset_category, free_category_on_dag,
                         indiscrete_category, is_injective_name, poset_category,
                         powerset_lattice, terminal_category)
from .presheaf import FinPresheaf, terminal_presheaf, yoneda
from .structures import CwA, DisplayClass, check_dmc, close_under_pullbacks, empty_cwa, universe_cwa


# -- the sDMC counterexample ------------------------------------------------------------

def finset2() -> FinCategory:
    """Skeleton of finite sets of size at most two."""
    return finset_category({"0": 0, "1": 1, "2": 2})


def finset2_injections() -> DisplayClass:
    C = finset2()
    return DisplayClass(C, frozenset(m for m in C.morphisms if is_injective_name(m)))


def counterexample_target() -> DisplayClass:
    """Sets ``0, 1, 1p, 2`` with every injection display except ``r : 1 -> 2`` (hitting 1)
    and ``l' : 1p -> 2`` (hitting 0)."""
    C = finset_category({"0": 0, "1": 1, "1p": 1, "2": 2})
    excluded = {"1>2:1", "1p>2:0"}
    return DisplayClass(C, frozenset(m for m in C.morphisms
                                     if is_injective_name(m) and m not in excluded))


def chain_partial() -> DisplayClass:
    """Chain ``0 -> 1 -> 2`` with ``0 <= 1`` and ``1 <= 2`` display: pullback-stable,
    not composition-closed."""
    C = chain(3)
    return close_under_pullbacks(C, ["0<=1", "1<=2"])


# -- small categories -------------------------------------------------------------------

def meet_semilattices() -> list[tuple[str, FinCategory]]:
    """Finite lex posets (meet-semilattices with top)."""
    return [
        ("terminal", terminal_category("1")),
        ("chain2", chain(2)),
        ("chain3", chain(3)),
        ("bool1", powerset_lattice(1)),
        ("bool2", powerset_lattice(2)),
        ("diamond", poset_category([("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])),
        ("vee_top", poset_category([("b", "x"), ("b", "y"), ("x", "t"), ("y", "t"), ("b", "t")])),
    ]


def small_categories() -> list[tuple[str, FinCategory]]:
    cats = meet_semilattices() + [
        ("discrete2", discrete_category(["a", "b"])),
        ("indiscrete2", indiscrete_category(["a", "b"])),
        ("span", poset_category([("o", "a"), ("o", "b")])),
        ("cospan", poset_category([("a", "t"), ("b", "t")])),
        ("dag_square", free_category_on_dag({"f": ("a", "b"), "g": ("a", "c"),
                                             "h": ("b", "d"), "k": ("c", "d")})),
        ("dag_parallel", free_category_on_dag({"u": ("a", "b"), "v": ("a", "b")})),
        ("finset2", finset2()),
    ]
    return cats


# -- display map categories ---------------------------------------------------------------

def generated_dmcs(limit: int | None = None) -> list[tuple[str, DisplayClass]]:
    """Replete pullback-stable classes on small categories.

    Seeds are single maps and pairs of maps, closed under pullbacks and
    isomorphism; classes that fail validation are skipped.
    """
    from .translators import replete_class
    out: dict[tuple, tuple[str, DisplayClass]] = {}
    for name, C in small_categories():
        seeds = [()] + [(m,) for m in C.morphisms] + list(combinations(C.morphisms, 2))[:12]
        for seed in seeds:
            try:
                d = close_under_pullbacks(C, seed)
            except PreconditionFailed:
                continue
            d = DisplayClass(C, replete_class(C, d.display))
            if not check_dmc(d, require_replete=True).ok:
                continue
            key = (name, d.display)
            if key not in out:
                label = f"{name}:{'+'.join(seed) or 'empty'}"
                out[key] = (label, d)
    res = sorted(out.values(), key=lambda x: x[0])
    res.append(("finset2:injections", finset2_injections()))
    return res[:limit] if limit else res


# -- comprehension categories -------------------------------------------------------------

def generated_compcats() -> list[tuple[str, CompCat]]:
    """A mix of non-full, full and subcategorical comprehension categories."""
    from .translators import dmc_to_compcat
    out = []
    for name, T in [("chain2", chain(2)), ("chain3", chain(3)), ("span", poset_category([("o", "a"), ("o", "b")])),
                    ("discrete2", discrete_category(["a", "b"])), ("indiscrete2", indiscrete_category(["a", "b"])),
                    ("bool1", powerset_lattice(1)), ("terminal", terminal_category("A")),
                    ("dag_parallel", free_category_on_dag({"u": ("a", "b"), "v": ("a", "b")}))]:
        out.append((f"over_point:{name}", compcat_over_point(T)))
    for name, C in [("chain2", chain(2)), ("terminal", terminal_category("1")),
                    ("discrete2", discrete_category(["a", "b"])), ("indiscrete2", indiscrete_category(["a", "b"])),
                    ("diamond", poset_category([("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")]))]:
        out.append((f"trivial:{name}", trivial_compcat(C)))
    for label, d in generated_dmcs()[:12]:
        out.append((f"dmc:{label}", dmc_to_compcat(d)))
    for label, a in generated_cwas()[:6]:
        from .translators import cwa_to_compcat
        out.append((f"cwa:{label}", cwa_to_compcat(a)))
    return out


# -- presheaves ---------------------------------------------------------------------------

def random_free_presheaf(C: FinCategory, edges: dict[str, tuple[str, str]], rng: random.Random,
                         max_size: int = 3) -> FinPresheaf:
    """Arbitrary sets and edge restrictions on a free category, extended along paths."""
    at = {o: [f"{o}{i}" for i in range(rng.randint(0, max_size))] for o in C.objects}
    # a presheaf needs a value for every restriction, so a nonempty target
    # forces a nonempty source
    changed = True
    while changed:
        changed = False
        for e, (s, d) in sorted(edges.items()):
            if at[d] and not at[s]:
                at[s] = [f"{s}0"]
                changed = True
    emap = {e: {x: rng.choice(at[s]) for x in at[d]} for e, (s, d) in edges.items()}
    act = {}
    for m in C.morphisms:
        s, d = C.src[m], C.dst[m]
        steps = [] if m.startswith("id:") else m.split(";")
        for x in at[d]:
            y = x
            for e in reversed(steps):
                y = emap[e][y]
            act[(m, x)] = y
    return FinPresheaf(C, at, act)


def generated_presheaves(n: int = 24, seed: int = 7) -> list[tuple[str, FinPresheaf]]:
    rng = random.Random(seed)
    out = []
    dags = [
        {"f": ("a", "b")},
        {"f": ("a", "b"), "g": ("b", "c")},
        {"f": ("a", "b"), "g": ("a", "b")},
        {"f": ("a", "c"), "g": ("b", "c")},
        {"f": ("a", "b"), "g": ("a", "c"), "h": ("b", "d"), "k": ("c", "d")},
    ]
    i = 0
    while len(out) < n - 6:
        edges = dags[i % len(dags)]
        C = free_category_on_dag(edges)
        out.append((f"free{i % len(dags)}#{i}", random_free_presheaf(C, edges, rng)))
        i += 1
    for name, C in [("chain3", chain(3)), ("bool2", powerset_lattice(2)), ("finset2", finset2())]:
        out.append((f"yoneda:{name}", yoneda(C, C.objects[-1])))
        out.append((f"terminal:{name}", terminal_presheaf(C)))
    return out


# -- CwAs ---------------------------------------------------------------------------------

def generated_cwas() -> list[tuple[str, CwA]]:
    """Universe CwAs ``Ty = hom(-, U)`` extended by pullbacks of a chosen ``u``."""
    out = [("empty:terminal", empty_cwa(terminal_category("1"))),
           ("empty:chain2", empty_cwa(chain(2)))]
    for name, C in [("chain2", chain(2)), ("chain3", chain(3)), ("bool2", powerset_lattice(2)),
                    ("finset2", finset2())]:
        for u in C.morphisms:
            if name == "finset2" and not is_injective_name(u):
                continue
            try:
                out.append((f"universe:{name}:{u}", universe_cwa(C, u)))
            except PreconditionFailed:
                continue
    return out


# -- contextual and pointed instances -------------------------------------------------------

def _no_types(C: FinCategory):
    from .fincat import FinFunctor, arrow_category
    T = FinCategory([], {}, {}, {})
    return C, T, FinFunctor(T, C, {}, {}), FinFunctor(T, arrow_category(C).cat, {}, {})


def contextual_instances() -> list[tuple[str, CompCat]]:
    """Contextual compcats at finite scale: a terminal base with no types.

    Any type over the point extends along its own projection forever, so
    finite contextual structures have none.
    """
    return [(f"empty:{o}", CompCat(*_no_types(terminal_category(o)), point=o))
            for o in ("1", "*", "root")]


def pointed_targets() -> list[tuple[str, CompCat]]:
    """Pointed comprehension categories whose point is terminal."""
    from .translators import dmc_to_compcat
    return [
        ("indiscrete2", CompCat(*_no_types(indiscrete_category(["a", "b"])), point="a")),
        ("finset2_inj", dmc_to_compcat(finset2_injections(), point="1")),
        ("chain2_trivial", trivial_compcat(chain(2), "1")),
    ]


def finite_core_targets() -> list[tuple[str, CompCat]]:
    """Discrete pointed compcats whose contextual core is finite (no types over the point)."""
    from .translators import cwa_to_compcat, dmc_to_compcat
    out = [
        ("chain2_bottom", dmc_to_compcat(DisplayClass(chain(2), frozenset({"0<=0"})), point="1")),
        ("finset2_empty_universe", cwa_to_compcat(universe_cwa(finset2(), "0>0:"), point="1")),
        ("indiscrete2_no_types", CompCat(*_no_types(indiscrete_category(["a", "b"])), point="a")),
    ]
    return out


# -- adjunction instance pairs ----------------------------------------------------------------

def adjunction_pairs() -> dict[str, list[tuple[str, object, object]]]:
    """Hand-picked ``(label, X, Y)`` pairs per construction, each hom-set at most 50 maps."""
    from .translators import comp_closure, lex_to_clan
    cc = dict(generated_compcats())
    dm = dict(generated_dmcs())
    full = [("over_point:chain2", "trivial:chain2"), ("over_point:indiscrete2", "trivial:indiscrete2"),
            ("over_point:bool1", "dmc:bool1:0<=1+1<=1"), ("dmc:bool1:0<=0", "trivial:chain2"),
            ("over_point:span", "trivial:discrete2")]
    closure = [("chain_partial", chain_partial(), "chain3:all"),
               ("chain3:0<=1", dm["chain3:0<=1"], "chain3:all"),
               ("bool2:00<=01", dm["bool2:00<=01"], "bool2:all"),
               ("span:o<=a", dm["span:o<=a"], "span:closure(o<=a+o<=b)")]
    targets = {"chain3:all": DisplayClass(chain(3), frozenset(chain(3).morphisms)),
               "bool2:all": lex_to_clan(powerset_lattice(2)),
               "span:closure(o<=a+o<=b)": comp_closure(dm["span:o<=a+o<=b"])[0]}
    sep = [("chain2", "chain3"), ("bool1", "bool2"), ("terminal", "diamond"), ("chain3", "bool1")]
    lex = dict(meet_semilattices())
    ctx = contextual_instances()
    cores = finite_core_targets()
    return {
        "fullify": [(f"{x}|{y}", cc[x], cc[y]) for x, y in full],
        "comp_closure": [(f"{x}|{y}", X, targets[y]) for x, X, y in closure],
        "sep_core": [(f"{x}|{y}", lex[x], lex_to_clan(lex[y])) for x, y in sep],
        "cxl_core": [(f"{ctx[i % len(ctx)][0]}|{y}", ctx[i % len(ctx)][1], Y)
                     for i, (y, Y) in enumerate(cores)],
    }
