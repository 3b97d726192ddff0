import random

import pytest

from qktree.core import Graph
from qktree.flow import (
    EXCEEDS_BOUND,
    INF,
    CapacitatedGraph,
    bounded_vertex_maxflow,
)
from qktree.ssmc import (
    check_cover_properties,
    single_source_mincut_cover,
    width_budget,
)

from conftest import gnp


def caps_with_inf(g, specials):
    return CapacitatedGraph(
        g, tuple(INF if v in set(specials) else 1 for v in range(g.n))
    )


def lam(cg, t, s):
    res = bounded_vertex_maxflow(cg, {t}, {s}, cg.base.n)
    return res.value


def test_path_single_sink():
    g = Graph(3, [(0, 1), (1, 2)])  # s=0, x=1, t=2
    cg = caps_with_inf(g, {0, 2})
    cover, captured = single_source_mincut_cover(cg, 0, {2}, 1, random.Random(1))
    assert captured == {2}
    cuts = cover.all_cuts()
    assert cuts and all(c.separator == {1} for c in cuts)


def test_high_connectivity_sink_not_captured():
    # sink joined to s by k+1 = 3 internally disjoint paths
    g = Graph(8, [(0, i) for i in (2, 3, 4)] + [(i, 1) for i in (2, 3, 4)]
              + [(1, 5), (5, 6), (6, 7), (7, 0)])
    cg = caps_with_inf(g, {0, 1})
    cover, captured = single_source_mincut_cover(cg, 0, {1}, 2, random.Random(3))
    assert 1 not in captured
    assert not cover.all_cuts()


def random_ssmc_instance(seed, max_n=14, max_sinks=5, require=2):
    rng = random.Random(seed)
    g = gnp(rng.randint(5, max_n), rng.uniform(0.2, 0.45), seed)
    verts = list(range(g.n))
    rng.shuffle(verts)
    chosen = []
    for v in verts:
        if all(not g.has_edge(v, u) for u in chosen):
            chosen.append(v)
        if len(chosen) == max_sinks + 1:
            break
    if len(chosen) < require + 1:
        return None
    return g, chosen[0], sorted(chosen[1:])


@pytest.mark.parametrize("block", range(3))
def test_cover_properties_on_random_instances(block):
    checked = 0
    seed = block * 30000
    while checked < 25:
        seed += 1
        inst = random_ssmc_instance(seed)
        if inst is None:
            continue
        g, s, sinks = inst
        checked += 1
        k = random.Random(seed ^ 99).randint(1, 3)
        cg = caps_with_inf(g, {s} | set(sinks))
        cover, captured = single_source_mincut_cover(
            cg, s, sinks, k, random.Random(seed)
        )
        expected = {t for t in sinks if lam(cg, t, s) <= k}
        assert captured == expected, (seed, g.edges(), s, sinks, k)
        problems = check_cover_properties(
            g, cg, s, captured, cover, lambda t: lam(cg, t, s)
        )
        assert not problems, (seed, problems)
        assert cover.width <= width_budget(k, g.n)


def test_determinism():
    inst = None
    seed = 424242
    while inst is None:
        inst = random_ssmc_instance(seed)
        seed += 1
    g, s, sinks = inst
    cg = caps_with_inf(g, {s} | set(sinks))
    a = single_source_mincut_cover(cg, s, sinks, 2, random.Random(7))
    b = single_source_mincut_cover(cg, s, sinks, 2, random.Random(7))
    assert a[1] == b[1]
    assert a[0].collections == b[0].collections
