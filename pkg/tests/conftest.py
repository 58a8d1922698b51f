import itertools
import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from catsem.generators import free_category_on_dag, poset_category

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


@st.composite
def posets(draw, max_elems=4):
    """A random partial order on ``0..n-1`` given by pairs ``i < j``."""
    n = draw(st.integers(1, max_elems))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rel = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return poset_category(rel, range(n))


@st.composite
def dags(draw, max_nodes=4, max_edges=4):
    n = draw(st.integers(1, max_nodes))
    pairs = [(f"v{i}", f"v{j}") for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=max_edges)) if pairs else []
    edges = {f"e{k}": p for k, p in enumerate(chosen)}
    return free_category_on_dag(edges, [f"v{i}" for i in range(n)])


small_categories = st.one_of(posets(), dags())


def brute_functors(C, D):
    """Every functor ``C -> D`` by trying all object maps and morphism maps."""
    out = []
    for objs in itertools.product(D.objects, repeat=len(C.objects)):
        om = dict(zip(C.objects, objs))
        choices = [D.hom(om[C.src[m]], om[C.dst[m]]) for m in C.morphisms]
        for ms in itertools.product(*choices):
            mm = dict(zip(C.morphisms, ms))
            if any(mm[C.identity[o]] != D.identity[om[o]] for o in C.objects):
                continue
            if all(mm[h] == D.compose_table[(mm[g], mm[f])] for (g, f), h in C.compose_table.items()):
                out.append((om, mm))
    return out


def brute_pullback_apexes(C, f, g):
    """Apexes of limiting cones over ``f, g``, from the definition."""
    cones = [(a, u, v) for a in C.objects for u in C.hom(a, C.src[f]) for v in C.hom(a, C.src[g])
             if C.comp(f, u) == C.comp(g, v)]
    out = []
    for a, u, v in cones:
        ok = True
        for b, u2, v2 in cones:
            med = [h for h in C.hom(b, a) if C.comp(u, h) == u2 and C.comp(v, h) == v2]
            if len(med) != 1:
                ok = False
                break
        if ok:
            out.append((a, u, v))
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


@st.composite
def dag_edges(draw, max_nodes=4, max_edges=4):
    n = draw(st.integers(1, max_nodes))
    pairs = [(f"v{i}", f"v{j}") for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=max_edges)) if pairs else []
    return {f"e{k}": p for k, p in enumerate(chosen)}, [f"v{i}" for i in range(n)]


@st.composite
def presheaves(draw, max_size=3):
    """Random presheaves on free categories: arbitrary edge restrictions, extended along paths."""
    from catsem.instances import random_free_presheaf
    edges, verts = draw(dag_edges())
    C = free_category_on_dag(edges, verts)
    rng = draw(st.randoms(use_true_random=False))
    return random_free_presheaf(C, edges, rng, max_size)
