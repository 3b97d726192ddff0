"""Exact Minimum p-Way Cut by dynamic programming over an unbreakable tree
decomposition, with a component-flip DP and color coding for large bags."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Dict, List, Optional, Tuple

from . import config
from .carving import color_family_general
from .core import Graph, connected_components
from .decomp import (
    RootedTreeDecomposition,
    VARIANT_STANDARD,
    decompose,
    variant_parameters,
)

INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class PwayResult:
    """Decision and valuation for one Minimum p-Way Cut query."""

    p: int
    k: int
    feasible: bool
    cost: Optional[int]
    seed: Optional[int] = None

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "feasible": self.feasible,
            "cost": self.cost,
            "seed": self.seed,
        }


def _submasks(m: int) -> List[int]:
    """All submasks of m, descending, ending with 0."""
    out = []
    s = m
    while True:
        out.append(s)
        if s == 0:
            return out
        s = (s - 1) & m


class DPTableM:
    """Costs M[t, f, I]: the minimum cost (number of bichromatic edges) of a
    p-coloring of the subtree graph G_t that respects the adhesion coloring
    f, uses every color of I somewhere in G_t, and costs at most k; values
    saturate at k+1 (infeasible).

    f is a tuple of colors (1..p) aligned with the sorted adhesion set of t;
    I is a bitmask with bit c-1 for color c. Entries are stored as full
    vectors over all 2^p masks per (t, f)."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.vectors: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, ...]] = {}

    def get(self, t: int, f: Tuple[int, ...], imask: int) -> Optional[int]:
        vec = self.vectors.get((t, f))
        return None if vec is None else vec[imask]

    def set_vector(self, t: int, f: Tuple[int, ...], vec: Tuple[int, ...]):
        self.vectors[(t, f)] = vec


class FlipDPTable:
    """Partial costs T[i][j][I0][b] of the component-flip DP inside one bag:
    the first i torso-like components (and j children attached to the i-th)
    have been decided, I0 is the set of colors that must already be
    realized, and b records whether component i is flipped away from the
    heavy color."""

    def __init__(self, inf: int):
        self.inf = inf
        self.entries: Dict[Tuple[int, int, int, int], int] = {}

    def record(self, i: int, j: int, row: Dict[Tuple[int, int], int]):
        for (mask, b), cost in row.items():
            self.entries[(i, j, mask, b)] = cost


class _Node:
    """Precomputed per-node bag structure used by both entry regimes."""

    __slots__ = (
        "bag", "pos", "adh", "adh_local", "children", "cost_edges", "units",
    )

    def __init__(self, g: Graph, deco: RootedTreeDecomposition, t: int):
        self.bag: Tuple[int, ...] = tuple(sorted(deco.bag(t)))
        self.pos = {v: i for i, v in enumerate(self.bag)}
        self.adh: Tuple[int, ...] = tuple(sorted(deco.adhesion_set(t)))
        self.adh_local: Tuple[int, ...] = tuple(self.pos[v] for v in self.adh)
        adh_set = set(self.adh)
        self.cost_edges: List[Tuple[int, int]] = [
            (self.pos[u], self.pos[v])
            for u in self.bag
            for v in g.adj[u]
            if u < v and v in self.pos
            and not (u in adh_set and v in adh_set)
        ]
        # children as (child id, adhesion colors aligned with sorted order,
        # local indices of the adhesion inside this bag)
        self.children: List[Tuple[int, Tuple[int, ...]]] = []
        for c in deco.nodes[t].children:
            c_adh = tuple(sorted(deco.adhesion_set(c)))
            self.children.append((c, tuple(self.pos[v] for v in c_adh)))
        # breakable units: bag edges and multi-vertex child adhesions; a
        # coloring of cost <= k crosses at most k of them in total
        self.units: List[Tuple[str, int]] = [
            ("e", i) for i in range(len(self.cost_edges))
        ] + [
            ("a", ci)
            for ci, (_, adh_l) in enumerate(self.children)
            if len(adh_l) >= 2
        ]


class PwayCutSolver:
    """Demand-driven evaluation of the table M over one decomposition."""

    def __init__(
        self,
        g: Graph,
        deco: RootedTreeDecomposition,
        p: int,
        k: int,
        q: int,
        sigma: int,
        rng,
    ):
        self.g = g
        self.deco = deco
        self.p = p
        self.k = k
        self.q = q
        self.sigma = sigma
        self.rng = rng
        self.inf = k + 1
        self.full = (1 << p) - 1
        self.table = DPTableM(p, k)
        self.info = [_Node(g, deco, t) for t in range(len(deco.nodes))]
        self.flip_tables: List[FlipDPTable] = []  # regime-2 traces

    # ---- public entry -------------------------------------------------

    def entry(self, t: int, f: Tuple[int, ...], imask: int) -> int:
        """M[t, f, imask], saturating at k+1."""
        vec = self.table.vectors.get((t, f))
        if vec is None:
            vec = self._compute_vector(t, f)
            self.table.set_vector(t, f, vec)
        return vec[imask]

    # ---- regime dispatch ----------------------------------------------

    def _compute_vector(self, t: int, f: Tuple[int, ...]) -> Tuple[int, ...]:
        info = self.info[t]
        units = len(info.units)
        subsets = sum(comb(units, i) for i in range(min(self.k, units) + 1))
        if (
            len(info.bag) <= config.PWAY_EXACT_BAG_LIMIT
            and subsets <= config.PWAY_EXACT_SUBSET_LIMIT
        ):
            return self._exact_vector(t, f)
        return self._coded_vector(t, f)

    # ---- children chain (shared) ---------------------------------------

    def _chain(
        self, children: List[Tuple[int, Tuple[int, ...]]],
        profile: Tuple[Tuple[int, ...], ...],
    ) -> List[int]:
        """Minimum total child cost per required-color mask: colors of the
        mask must be realized somewhere below, split among the children."""
        inf = self.inf
        d = [inf] * (self.full + 1)
        d[0] = 0
        for (cid, _), part in zip(children, profile):
            nd = [inf] * (self.full + 1)
            for m in range(self.full + 1):
                best = inf
                for s in _submasks(m):
                    c_cost = self.entry(cid, part, s)
                    if c_cost >= inf:
                        continue
                    cand = c_cost + d[m ^ s]
                    if cand < best:
                        best = cand
                nd[m] = min(best, inf)
            d = nd
        return d

    # ---- exact regime ---------------------------------------------------

    def _exact_vector(self, t: int, f: Tuple[int, ...]) -> Tuple[int, ...]:
        """Exact M[t, f, .] by enumerating every possible set of crossing
        bag edges and crossing child adhesions (at most k of them), the
        components they leave, and all colorings constant on those
        components."""
        info = self.info[t]
        p, k, inf = self.p, self.k, self.inf
        nb = len(info.bag)
        forced_local = dict(zip(info.adh_local, f))

        # (child restriction profile, realized mask, free slots) -> min cost
        groups: Dict[Tuple, int] = {}

        for r in range(min(k, len(info.units)) + 1):
            for subset in combinations(range(len(info.units)), r):
                broken = frozenset(subset)
                parent = list(range(nb))

                def find(x: int) -> int:
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    return x

                for ui, (kind, idx) in enumerate(info.units):
                    if ui in broken:
                        continue
                    if kind == "e":
                        a, b = info.cost_edges[idx]
                        parent[find(a)] = find(b)
                    else:
                        adh_l = info.children[idx][1]
                        for a, b in zip(adh_l, adh_l[1:]):
                            parent[find(a)] = find(b)

                comp_of = [0] * nb
                comp_ids: Dict[int, int] = {}
                for v in range(nb):
                    root = find(v)
                    comp_of[v] = comp_ids.setdefault(root, len(comp_ids))
                ncomp = len(comp_ids)

                forced_comp: Dict[int, int] = {}
                conflict = False
                for local, col in forced_local.items():
                    c = comp_of[local]
                    if forced_comp.setdefault(c, col) != col:
                        conflict = True
                        break
                if conflict:
                    continue

                coupled = set()
                broken_edges = []
                for ui in broken:
                    kind, idx = info.units[ui]
                    if kind == "e":
                        a, b = info.cost_edges[idx]
                        broken_edges.append((comp_of[a], comp_of[b]))
                        coupled.add(comp_of[a])
                        coupled.add(comp_of[b])
                    else:
                        for l in info.children[idx][1]:
                            coupled.add(comp_of[l])
                for _, adh_l in info.children:
                    for l in adh_l:
                        coupled.add(comp_of[l])
                enum_comps = sorted(c for c in coupled if c not in forced_comp)
                free = ncomp - len(forced_comp) - len(enum_comps)
                base_realized = 0
                for col in forced_comp.values():
                    base_realized |= 1 << (col - 1)

                for phi in product(range(1, p + 1), repeat=len(enum_comps)):
                    color = dict(forced_comp)
                    color.update(zip(enum_comps, phi))
                    bagcost = sum(
                        1 for ca, cb in broken_edges if color[ca] != color[cb]
                    )
                    if bagcost > k:
                        continue
                    realized = base_realized
                    for col in phi:
                        realized |= 1 << (col - 1)
                    profile = tuple(
                        tuple(color[comp_of[l]] for l in adh_l)
                        for _, adh_l in info.children
                    )
                    key = (profile, realized, min(free, p))
                    old = groups.get(key)
                    if old is None or bagcost < old:
                        groups[key] = bagcost

        vec = [inf] * (self.full + 1)
        chain_cache: Dict[Tuple, List[int]] = {}
        for (profile, realized, free), bagcost in groups.items():
            d = chain_cache.get(profile)
            if d is None:
                d = self._chain(info.children, profile)
                chain_cache[profile] = d
            for imask in range(self.full + 1):
                need = imask & ~realized
                best = vec[imask]
                # unconstrained components can each absorb one missing color
                for z in _submasks(need):
                    if bin(z).count("1") > free:
                        continue
                    cand = bagcost + d[need ^ z]
                    if cand < best:
                        best = cand
                vec[imask] = min(best, inf)
        return tuple(vec)

    # ---- color-coding regime ---------------------------------------------

    def _coded_vector(self, t: int, f: Tuple[int, ...]) -> Tuple[int, ...]:
        """M[t, f, .] with high probability: guess the heavy color, draw a
        random hitting family of bag colorings, and for each one run the
        component-flip DP."""
        p, inf = self.p, self.inf
        vec = [inf] * (self.full + 1)
        for c in range(1, p + 1):
            # relabel so the guessed heavy color becomes p
            perm = list(range(p + 1))
            perm[c], perm[p] = p, c
            f_rel = tuple(perm[x] for x in f)
            sub = self._coded_guess_vector(t, f_rel)
            for imask in range(self.full + 1):
                rel = 0
                for col in range(1, p + 1):
                    if imask & (1 << (col - 1)):
                        rel |= 1 << (perm[col] - 1)
                if sub[rel] < vec[imask]:
                    vec[imask] = sub[rel]
        return tuple(vec)

    def _coded_guess_vector(self, t: int, f_rel: Tuple[int, ...]) -> List[int]:
        info = self.info[t]
        p, k, inf = self.p, self.k, self.inf
        universe = len(info.bag)
        if universe == 0:
            return list(self._exact_vector(t, f_rel))
        # classes 1..p-1 bound the non-heavy color classes; class p bounds
        # the heavy-colored vertices adjacent to crossing edges/adhesions
        sizes = [min(self.q, universe)] * (p - 1) + [
            min(self.q * self.k * self.sigma, universe)
        ]
        family = color_family_general(
            universe, sizes, max(self.g.n, 2), self.rng, trim="each"
        )
        vec = [inf] * (self.full + 1)
        pbit = 1 << (p - 1)
        for base in family:
            gp = list(base)
            for local, col in zip(info.adh_local, f_rel):
                gp[local] = col
            if p not in gp:
                continue  # the heavy color must appear in the bag
            flip_vec = self._flip_vector(t, gp)
            for imask in range(self.full + 1):
                # the heavy color is realized by the bag itself
                cand = flip_vec[imask & ~pbit]
                if cand < vec[imask]:
                    vec[imask] = cand
        return vec

    def _flip_vector(self, t: int, gp: List[int]) -> List[int]:
        """Given a candidate bag coloring gp (heavy color = p), decide which
        connected components of the non-heavy part to flip back to p, by DP;
        returns the minimum cost per required-color mask over colors < p."""
        info = self.info[t]
        p, k, inf = self.p, self.k, self.inf
        nb = len(info.bag)
        # auxiliary graph: bag cost edges plus a clique per child adhesion
        adj: List[set] = [set() for _ in range(nb)]
        for a, b in info.cost_edges:
            adj[a].add(b)
            adj[b].add(a)
        for _, adh_l in info.children:
            for i, a in enumerate(adh_l):
                for b in adh_l[i + 1:]:
                    adj[a].add(b)
                    adj[b].add(a)
        alive = [l for l in range(nb) if gp[l] != p]
        alive_set = set(alive)
        comp_idx = {}
        comps: List[List[int]] = []
        for start in alive:
            if start in comp_idx:
                continue
            comp = []
            stack = [start]
            comp_idx[start] = len(comps)
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in adj[v]:
                    if u in alive_set and u not in comp_idx:
                        comp_idx[u] = len(comps)
                        stack.append(u)
            comps.append(sorted(comp))

        attached: List[List[int]] = [[] for _ in comps]
        group0: List[int] = []
        for ci, (_, adh_l) in enumerate(info.children):
            hits = {comp_idx[l] for l in adh_l if l in alive_set}
            # each child adhesion is a clique here, so it meets at most one
            # component of the non-heavy part
            assert len(hits) <= 1, "child adhesion meets several components"
            if hits:
                attached[hits.pop()].append(ci)
            else:
                group0.append(ci)

        adh_local_set = set(info.adh_local)
        flip_cost = [0] * len(comps)
        comp_colors = [0] * len(comps)
        forced = [False] * len(comps)
        for i, comp in enumerate(comps):
            cset = set(comp)
            cost = 0
            for a, b in info.cost_edges:
                ina, inb = a in cset, b in cset
                if ina and inb:
                    if gp[a] != gp[b]:
                        cost += 1
                elif ina or inb:
                    cost += 1
            flip_cost[i] = cost
            mask = 0
            for l in comp:
                mask |= 1 << (gp[l] - 1)
            comp_colors[i] = mask
            forced[i] = any(l in adh_local_set for l in comp)

        table = FlipDPTable(inf)
        self.flip_tables.append(table)
        masks = range(self.full + 1)
        cur: Dict[Tuple[int, int], int] = {
            (m, b): (0 if m == 0 else inf) for m in masks for b in (0, 1)
        }
        table.record(0, 0, cur)

        def child_step(
            row: Dict[Tuple[int, int], int], ci: int,
            f0: Tuple[int, ...], f1: Tuple[int, ...], forbid0: bool,
        ) -> Dict[Tuple[int, int], int]:
            cid = info.children[ci][0]
            new: Dict[Tuple[int, int], int] = {}
            for m in masks:
                best0 = inf
                best1 = inf
                for s in _submasks(m):
                    if not forbid0:
                        c0 = self.entry(cid, f0, s)
                        if c0 < inf:
                            cand = c0 + row[(m ^ s, 0)]
                            if cand < best0:
                                best0 = cand
                    c1 = self.entry(cid, f1, s)
                    if c1 < inf:
                        cand = c1 + row[(m ^ s, 1)]
                        if cand < best1:
                            best1 = cand
                new[(m, 0)] = min(best0, inf)
                new[(m, 1)] = min(best1, inf)
            return new

        for j, ci in enumerate(group0, 1):
            adh_len = len(info.children[ci][1])
            f_p = (p,) * adh_len
            cur = child_step(cur, ci, f_p, f_p, False)
            table.record(0, j, cur)

        for i in range(1, len(comps) + 1):
            fc = flip_cost[i - 1]
            icols = comp_colors[i - 1]
            new: Dict[Tuple[int, int], int] = {}
            for m in masks:
                if forced[i - 1]:
                    v0 = inf  # a component touching the adhesion must flip
                else:
                    v0 = min(cur[(m, 0)], cur[(m, 1)])
                mprev = m & ~icols
                v1 = min(cur[(mprev, 0)], cur[(mprev, 1)]) + fc
                new[(m, 0)] = v0
                new[(m, 1)] = min(v1, inf)
            cur = new
            table.record(i, 0, cur)
            for j, ci in enumerate(attached[i - 1], 1):
                adh_l = info.children[ci][1]
                f0 = (p,) * len(adh_l)
                f1 = tuple(gp[l] for l in adh_l)
                cur = child_step(cur, ci, f0, f1, forced[i - 1])
                table.record(i, j, cur)

        return [min(cur[(m, 0)], cur[(m, 1)]) for m in masks]


def compute_bag_entry(
    solver: PwayCutSolver, t: int, f: Tuple[int, ...], imask: int
):
    """One table entry M[t, f, imask] with child entries resolved on demand;
    returns the cost, or INFEASIBLE when no coloring of cost <= k exists."""
    cost = solver.entry(t, f, imask)
    return cost if cost <= solver.k else INFEASIBLE


def min_pway_cut(
    g: Graph,
    p: int,
    k: int,
    epsilon=1,
    rng=None,
    seed: Optional[int] = None,
) -> PwayResult:
    """Decide whether deleting at most k edges can split g into at least p
    connected components, and if so return the minimum number of deletions.

    Runs the tree-decomposition DP; the minimum p-way cut size equals the
    minimum cost of a p-coloring of V(g) that uses all p colors."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if k < 0:
        raise ValueError("k must be nonnegative")
    ncomp = len(connected_components(g))
    if ncomp >= p:
        return PwayResult(p, k, True, 0, seed)
    if p > k + ncomp:
        # deleting one edge adds at most one component
        return PwayResult(p, k, False, None, seed)
    if rng is None:
        import random

        rng = random.Random(seed)
    deco, _report = decompose(g, k, epsilon, VARIANT_STANDARD, rng=rng, seed=seed)
    params = variant_parameters(k, epsilon)[VARIANT_STANDARD]
    solver = PwayCutSolver(
        g, deco, p, k, params["q_bound"], params["adhesion_bound"], rng
    )
    sys.setrecursionlimit(
        max(sys.getrecursionlimit(), 6 * len(deco.nodes) + 1000)
    )
    cost = solver.entry(deco.root, (), solver.full)
    if cost <= k:
        return PwayResult(p, k, True, cost, seed)
    return PwayResult(p, k, False, None, seed)
