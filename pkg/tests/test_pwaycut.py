import random
from itertools import product

import pytest

from qktree import config
from qktree.core import Graph, induced_subgraph
from qktree.decomp import VARIANT_STANDARD, decompose, variant_parameters
from qktree.pwaycut import (
    INFEASIBLE,
    DPTableM,
    PwayCutSolver,
    compute_bag_entry,
    min_pway_cut,
)
from qktree.verify import brute_pway_cut
from qktree.verify import INFEASIBLE as BRUTE_INFEASIBLE

from conftest import (
    complete_graph,
    cycle_graph,
    gnp,
    path_graph,
    petersen_graph,
    star_graph,
)


def check_against_oracle(g, p, k, seed):
    res = min_pway_cut(g, p, k, 1, rng=random.Random(seed))
    oracle = brute_pway_cut(g, p, k)
    if oracle == BRUTE_INFEASIBLE:
        assert not res.feasible and res.cost is None, (g, p, k, res)
    else:
        assert res.feasible and res.cost == oracle, (g, p, k, res, oracle)
    return res


def test_cycle_six_two_way():
    res = min_pway_cut(cycle_graph(6), 2, 2, 1, rng=random.Random(0))
    assert res.feasible and res.cost == 2


def test_tree_needs_p_minus_one_edges():
    for p in (2, 3, 4):
        res = min_pway_cut(star_graph(6), p, p - 1, 1, rng=random.Random(0))
        assert res.feasible and res.cost == p - 1


def test_petersen_two_way_is_three():
    res = min_pway_cut(petersen_graph(), 2, 3, 1, rng=random.Random(0))
    assert res.feasible and res.cost == 3
    res = min_pway_cut(petersen_graph(), 2, 2, 1, rng=random.Random(0))
    assert not res.feasible


def test_k4_edge_connectivity_three():
    res = min_pway_cut(complete_graph(4), 2, 2, 1, rng=random.Random(0))
    assert not res.feasible and res.cost is None


def test_already_split_graph_costs_zero():
    g = Graph(6, [(0, 1), (2, 3), (4, 5)])
    for p in (2, 3):
        res = min_pway_cut(g, p, 0, 1, rng=random.Random(0))
        assert res.feasible and res.cost == 0


def test_component_budget_infeasible_shortcut():
    # one edge deletion adds at most one component
    res = min_pway_cut(path_graph(8), 4, 2, 1, rng=random.Random(0))
    assert not res.feasible


def test_input_validation():
    with pytest.raises(ValueError):
        min_pway_cut(path_graph(3), 1, 2)
    with pytest.raises(ValueError):
        min_pway_cut(path_graph(3), 2, -1)


@pytest.mark.parametrize("seed", range(12))
def test_random_agreement_with_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 10)
    g = gnp(n, rng.uniform(0.2, 0.5), seed + 300)
    if g.m > 20:
        g = gnp(n, 0.25, seed + 900)
    for p in (2, 3, 4):
        for k in range(0, 5):
            check_against_oracle(g, p, k, seed * 31 + p * 5 + k)


def brute_entry(g, deco, t, f, imask, p, k):
    """Minimum cost over all p-colorings of G_t respecting f and realizing
    every color of imask, saturated at k+1."""
    gamma = sorted(deco.cone(t))
    sigma = sorted(deco.adhesion_set(t))
    drop = [(u, v) for u in sigma for v in g.adj[u] if v in set(sigma) and u < v]
    sub, ids = induced_subgraph(g, gamma, drop_edges=drop)
    pos = {v: i for i, v in enumerate(ids)}
    fixed = dict(zip((pos[v] for v in sigma), f))
    best = k + 1
    free = [i for i in range(sub.n) if i not in fixed]
    for assign in product(range(1, p + 1), repeat=len(free)):
        col = dict(fixed)
        col.update(zip(free, assign))
        realized = 0
        for c in col.values():
            realized |= 1 << (c - 1)
        if imask & ~realized:
            continue
        cost = sum(1 for u, v in sub.edges() if col[u] != col[v])
        if cost < best:
            best = cost
    return best


@pytest.mark.parametrize("seed", [0, 2, 5])
def test_table_entries_match_exhaustive_coloring(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 8)
    g = gnp(n, 0.35, seed + 40)
    p, k = 3, 3
    deco, _ = decompose(g, k, 1, rng=random.Random(seed), seed=seed)
    params = variant_parameters(k, 1)[VARIANT_STANDARD]
    solver = PwayCutSolver(
        g, deco, p, k, params["q_bound"], params["adhesion_bound"],
        random.Random(seed),
    )
    solver.entry(deco.root, (), solver.full)
    assert isinstance(solver.table, DPTableM)
    for (t, f), vec in solver.table.vectors.items():
        for imask in range(solver.full + 1):
            expect = brute_entry(g, deco, t, f, imask, p, k)
            assert vec[imask] == expect, (t, f, imask, vec[imask], expect)


def test_entry_monotone_in_required_colors():
    g = gnp(8, 0.3, 17)
    p, k = 3, 3
    deco, _ = decompose(g, k, 1, rng=random.Random(1), seed=1)
    params = variant_parameters(k, 1)[VARIANT_STANDARD]
    solver = PwayCutSolver(
        g, deco, p, k, params["q_bound"], params["adhesion_bound"],
        random.Random(1),
    )
    solver.entry(deco.root, (), solver.full)
    for (t, f), vec in solver.table.vectors.items():
        for imask in range(solver.full + 1):
            for sub in range(imask + 1):
                if sub & ~imask:
                    continue
                assert vec[sub] <= vec[imask]


def test_compute_bag_entry_reports_infeasible():
    g = complete_graph(4)
    p, k = 2, 2
    deco, _ = decompose(g, k, 1, rng=random.Random(0))
    params = variant_parameters(k, 1)[VARIANT_STANDARD]
    solver = PwayCutSolver(
        g, deco, p, k, params["q_bound"], params["adhesion_bound"],
        random.Random(0),
    )
    assert compute_bag_entry(solver, deco.root, (), solver.full) == INFEASIBLE
    assert compute_bag_entry(solver, deco.root, (), 0b01) == 0


@pytest.mark.parametrize("seed", range(6))
def test_coded_regime_matches_exact(seed, monkeypatch):
    monkeypatch.setattr(config, "PWAY_EXACT_BAG_LIMIT", -1)
    rng = random.Random(seed)
    n = rng.randint(4, 9)
    g = gnp(n, 0.35, seed + 70)
    for p in (2, 3):
        for k in range(0, 4):
            check_against_oracle(g, p, k, seed * 29 + p + k)


def test_flip_dp_forced_components_stay_infeasible_unflipped(monkeypatch):
    # force the coded regime and inspect the recorded flip tables: whenever
    # a component meets the adhesion, its unflipped row is saturated
    monkeypatch.setattr(config, "PWAY_EXACT_BAG_LIMIT", -1)
    g = gnp(8, 0.35, 5)
    p, k = 3, 3
    deco, _ = decompose(g, k, 1, rng=random.Random(3), seed=3)
    params = variant_parameters(k, 1)[VARIANT_STANDARD]
    solver = PwayCutSolver(
        g, deco, p, k, params["q_bound"], params["adhesion_bound"],
        random.Random(3),
    )
    solver.entry(deco.root, (), solver.full)
    assert solver.flip_tables, "coded regime was never exercised"
    assert all(
        cost <= solver.inf
        for table in solver.flip_tables
        for cost in table.entries.values()
    )
