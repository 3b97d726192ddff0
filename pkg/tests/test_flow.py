import random
from itertools import combinations

import pytest

from qktree.core import Graph, connected_components
from qktree.flow import (
    EXCEEDS_BOUND,
    INF,
    CapacitatedGraph,
    PreconditionError,
    bounded_vertex_maxflow,
    disjoint_paths_certificate,
    minimal_side_mincut,
    unit_capacities,
)

from conftest import complete_graph, gnp, path_graph


def brute_min_separator(g, sources, sinks, caps=None):
    """Minimum-capacity vertex set whose removal disconnects sources from
    sinks (endpoints excluded); exhaustive over all subsets."""
    sources, sinks = set(sources), set(sinks)
    middle = sorted(set(range(g.n)) - sources - sinks)
    best = None
    best_set = None
    for size in range(len(middle) + 1):
        for sep in combinations(middle, size):
            weight = size if caps is None else sum(caps[v] for v in sep)
            if best is not None and weight >= best:
                continue
            comps = connected_components(g, sep)
            reach = set()
            for c in comps:
                if c & sources:
                    reach |= c
            if not (reach & sinks):
                best = weight
                best_set = set(sep)
    return best, best_set


def enumerate_mincuts(g, sources, sinks, value):
    """All source-sink mincut separators of the given value (unit caps)."""
    sources, sinks = set(sources), set(sinks)
    middle = sorted(set(range(g.n)) - sources - sinks)
    out = []
    for sep in combinations(middle, value):
        comps = connected_components(g, sep)
        reach = set()
        for c in comps:
            if c & sources:
                reach |= c
        if not (reach & sinks):
            out.append((set(sep), reach))
    return out


def test_path_unit_flow():
    g = path_graph(4)
    res = bounded_vertex_maxflow(unit_capacities(g), {0}, {3}, 3)
    assert res.value == 1
    assert res.mincut.separator in ({1}, {2})


def test_near_complete_pair():
    g = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)])  # K4 minus 0-3
    res = bounded_vertex_maxflow(unit_capacities(g), {0}, {3}, 3)
    assert res.value == 2
    assert res.mincut.separator == {1, 2}


def test_source_sink_edge_rejected():
    g = path_graph(2)
    with pytest.raises(PreconditionError):
        bounded_vertex_maxflow(unit_capacities(g), {0}, {1}, 2)


def test_exceeds_bound():
    # four internally disjoint paths between nonadjacent endpoints
    g = Graph(6, [(0, i) for i in range(1, 5)] + [(i, 5) for i in range(1, 5)])
    res = bounded_vertex_maxflow(unit_capacities(g), {0}, {5}, 2)
    assert res.value == EXCEEDS_BOUND
    assert res.mincut is None


def test_minimal_side_path_and_diamond():
    g = path_graph(4)
    res = minimal_side_mincut(unit_capacities(g), {0}, {3}, 3)
    assert res.mincut.left_only == {0}
    assert res.mincut.separator == {1}
    diamond = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    res = minimal_side_mincut(unit_capacities(diamond), {0}, {3}, 3)
    assert res.mincut.left_only == {0}
    assert res.mincut.separator == {1, 2}


def random_instance(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 9)
    g = gnp(n, rng.uniform(0.25, 0.7), seed)
    verts = list(range(n))
    rng.shuffle(verts)
    a = {verts[0]} if rng.random() < 0.6 else set(verts[:2])
    rest = [v for v in verts if v not in a]
    b = {rest[0]} if rng.random() < 0.6 else set(rest[:2])
    if any(u in b for v in a for u in g.adj[v]):
        return None
    return g, frozenset(a), frozenset(b)


@pytest.mark.parametrize("block", range(5))
def test_flow_matches_separator_enumeration(block):
    """The flow-oracle equivalence property on random unit-cap instances."""
    checked = 0
    seed = block * 100000
    while checked < 60:
        seed += 1
        inst = random_instance(seed)
        if inst is None:
            continue
        g, a, b = inst
        checked += 1
        expected, _ = brute_min_separator(g, a, b)
        res = bounded_vertex_maxflow(unit_capacities(g), a, b, g.n)
        if expected is None:
            # no separator avoids endpoints: flow saturates beyond any bound
            assert res.value > 0
            continue
        assert res.value == expected
        assert len(res.mincut.separator) == expected
        assert a <= res.mincut.left_only
        assert b <= res.mincut.right_only
        assert res.mincut.is_valid(g)
        # minimal side is contained in every enumerated mincut's source side
        mres = minimal_side_mincut(unit_capacities(g), a, b, g.n)
        assert mres.value == expected
        for sep, reach in enumerate_mincuts(g, a, b, expected):
            assert mres.mincut.left_only <= reach


def test_inf_capacity_avoided_in_separator():
    g = path_graph(5)
    caps = (1, INF, 1, 1, 1)
    res = bounded_vertex_maxflow(CapacitatedGraph(g, caps), {0}, {4}, 3)
    assert res.value == 1
    assert 1 not in res.mincut.separator


def test_capacity_respected():
    # two parallel length-2 paths, middle vertices capacity 2 total
    g = Graph(4, [(0, 1), (1, 3), (0, 2), (2, 3)])
    caps = (INF, 2, 1, INF)
    res = bounded_vertex_maxflow(CapacitatedGraph(g, caps), {0}, {3}, 5)
    assert res.value == 3


def test_determinism():
    seed = 12345
    inst = None
    while inst is None:
        inst = random_instance(seed)
        seed += 1
    g, a, b = inst
    r1 = bounded_vertex_maxflow(unit_capacities(g), a, b, g.n)
    r2 = bounded_vertex_maxflow(unit_capacities(g), a, b, g.n)
    assert r1.mincut == r2.mincut and r1.value == r2.value


def test_disjoint_paths_two_disjoint_edges():
    g = Graph(4, [(0, 1), (2, 3)])
    paths = disjoint_paths_certificate(g, {0, 2}, {1, 3}, set(range(4)), 2)
    assert paths is not None and len(paths) == 2
    used = set()
    for p in paths:
        assert not (set(p) & used)
        used |= set(p)


def test_disjoint_paths_blocked_by_cut_vertex():
    g = Graph(5, [(0, 2), (1, 2), (2, 3), (2, 4)])
    assert disjoint_paths_certificate(g, {0, 1}, {3, 4}, set(range(5)), 2) is None


def test_disjoint_paths_trivial_overlap():
    g = path_graph(3)
    # any path from 0 passes through 1, so two disjoint paths are impossible
    assert disjoint_paths_certificate(g, {0, 1}, {1, 2}, {0, 1, 2}, 2) is None
    paths = disjoint_paths_certificate(g, {0, 1}, {1, 2}, {0, 1, 2}, 1)
    assert paths == [[1]]
    # with the cut vertex as its own path plus a detour, two paths fit
    square = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    paths = disjoint_paths_certificate(square, {0, 1}, {1, 2}, {0, 1, 2, 3}, 2)
    assert paths is not None and len(paths) == 2
    used = set()
    for p in paths:
        assert not (set(p) & used)
        used |= set(p)


@pytest.mark.parametrize("seed", range(40))
def test_disjoint_paths_match_flow_value(seed):
    inst = random_instance(seed + 777000)
    if inst is None:
        return
    g, a, b = inst
    # the auxiliary construction: unit caps with the endpoints cuttable, so
    # the flow value is exactly the maximum number of fully-disjoint paths
    res = bounded_vertex_maxflow(
        unit_capacities(g), a, b, g.n, cut_sources=True, cut_sinks=True
    )
    value = res.value
    assert value != EXCEEDS_BOUND
    if value > 0:
        paths = disjoint_paths_certificate(g, a, b, set(range(g.n)), value)
        assert paths is not None and len(paths) == value
        used = set()
        for p in paths:
            assert p[0] in a and p[-1] in b
            assert not (set(p) & used)
            used |= set(p)
            for x, y in zip(p, p[1:]):
                assert g.has_edge(x, y)
    assert (
        disjoint_paths_certificate(g, a, b, set(range(g.n)), value + 1) is None
    )
