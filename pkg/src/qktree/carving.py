"""Witness predicates, carvable vertices, carve operations, color-coded
disjoint-witness covers, and lean enforcement."""

from __future__ import annotations

import math
from itertools import product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import config
from .core import (
    Graph,
    SizeGuardError,
    VertexCut,
    connected_components,
    induced_subgraph,
    is_connected,
    neighborhood,
    torso,
)
from .flow import CapacitatedGraph, INF, minimal_side_mincut
from .isolating import ordered_disjoint
from .ssmc import CutCollection, single_source_mincut_cover

ColorFunction = Tuple[int, ...]


class WitnessContext:
    """Terminals T, a protected subset X of T, and a cut-size budget k'.

    The torso of the graph on T is computed lazily and cached; witnesses are
    cuts (L, R) of the full graph with |L∩R| <= k', |L∩T| > |L∩R|, X ⊆ R.
    """

    __slots__ = ("g", "t_set", "x_set", "k_prime", "_torso")

    def __init__(
        self, g: Graph, t_set: Iterable[int], x_set: Iterable[int], k_prime: int
    ):
        self.g = g
        self.t_set = frozenset(t_set)
        self.x_set = frozenset(x_set)
        if not self.x_set <= self.t_set:
            raise ValueError("x_set must be a subset of t_set")
        if not all(0 <= v < g.n for v in self.t_set):
            raise ValueError("t_set must consist of vertices of g")
        self.k_prime = k_prime
        self._torso: Optional[Tuple[Graph, List[int]]] = None

    def torso_graph(self) -> Tuple[Graph, List[int]]:
        """(H, ids) where H is the torso on t_set and ids[local] = original."""
        if self._torso is None:
            self._torso = torso(self.g, self.t_set)
        return self._torso


def is_witness(ctx: WitnessContext, cut: VertexCut) -> bool:
    """|L∩R| <= k', |L∩T| > |L∩R|, and X ⊆ R."""
    sep = len(cut.L & cut.R)
    return (
        sep <= ctx.k_prime
        and len(cut.L & ctx.t_set) > sep
        and ctx.x_set <= cut.R
    )


def is_connected_witness(ctx: WitnessContext, cut: VertexCut) -> bool:
    """A witness whose set (L\\R)∩T induces a connected torso subgraph."""
    if not is_witness(ctx, cut):
        return False
    h, ids = ctx.torso_graph()
    pos = {v: i for i, v in enumerate(ids)}
    local = [pos[v] for v in cut.left_only & ctx.t_set]
    return is_connected(h, local)


def carvable_oracle(
    ctx: WitnessContext, enum_limit: int = config.CARVABLE_ENUM_LIMIT
) -> FrozenSet[int]:
    """Exact set of terminals lying in L\\R of some connected witness,
    by enumerating every (L\\R, L∩R, R\\L) assignment of the vertices."""
    g = ctx.g
    if g.n > enum_limit:
        raise SizeGuardError(
            f"graph with {g.n} vertices exceeds the enumeration limit {enum_limit}"
        )
    carvable: set = set()
    for assign in product((0, 1, 2), repeat=g.n):
        left_only = [v for v in range(g.n) if assign[v] == 0]
        sep = [v for v in range(g.n) if assign[v] == 1]
        if not left_only or len(sep) > ctx.k_prime:
            continue
        if any(v in ctx.x_set for v in left_only):
            continue
        if not (set(left_only) & ctx.t_set) - carvable:
            continue  # nothing new to learn from this assignment
        cut = VertexCut(
            frozenset(left_only) | frozenset(sep),
            frozenset(range(g.n)) - frozenset(left_only),
        )
        if cut.is_valid(g) and is_connected_witness(ctx, cut):
            carvable.update(set(left_only) & ctx.t_set)
    return frozenset(carvable)


def carve_one(t_set: Iterable[int], cut: VertexCut) -> FrozenSet[int]:
    """New terminal set (T \\ L) ∪ (L ∩ R)."""
    return (frozenset(t_set) - cut.L) | cut.separator


def carve_many(t_set: Iterable[int], cuts: CutCollection) -> FrozenSet[int]:
    """New terminal set T ∪ (∪ L_i∩R_i) \\ (∪ (L_i\\R_i)∩T) for pairwise
    ordered-disjoint cuts."""
    t = frozenset(t_set)
    seps: set = set()
    removed: set = set()
    for cut in cuts:
        seps |= cut.separator
        removed |= cut.left_only & t
    return (t | seps) - removed


def make_lean(ctx: WitnessContext, cuts: CutCollection) -> CutCollection:
    """Replace each witness (L,R) by a lean witness (L',R') with
    L'\\R' ⊆ L\\R and |(L'\\R')∩T| >= |(L\\R)∩T| / (k'+1).

    For each cut, a unit-capacity mincut is taken in G[L] minus the edges
    inside L∩R, between L∩T (sources) and L∩R (sinks); the source side
    becomes L' and everything else R'. Outputs stay pairwise disjoint.
    """
    g = ctx.g
    out: CutCollection = []
    for cut in cuts:
        overlap = cut.separator & ctx.t_set  # forced into the new separator
        sources = (cut.L & ctx.t_set) - overlap
        sinks = cut.separator - overlap
        if not sinks:
            # the whole separator lies in T; the cut is already lean via
            # single-vertex paths
            out.append(cut)
            continue
        drop = [
            (u, v)
            for u in cut.separator
            for v in g.adj[u]
            if u < v and v in cut.separator
        ]
        local_vs = cut.L - overlap
        sub, ids = induced_subgraph(g, local_vs, drop_edges=drop)
        pos = {v: i for i, v in enumerate(ids)}
        cg = CapacitatedGraph(sub, tuple(1 for _ in ids))
        res = minimal_side_mincut(
            cg,
            frozenset(pos[v] for v in sources),
            frozenset(pos[v] for v in sinks),
            bound=len(cut.separator),
            cut_sources=True,
            cut_sinks=True,
        )
        assert res.mincut is not None
        new_l = frozenset(ids[i] for i in res.mincut.L) | overlap
        new_r = (
            frozenset(ids[i] for i in res.mincut.R)
            | overlap
            | (cut.R - cut.L)
        )
        out.append(VertexCut(new_l, new_r))
    return out


def color_family_general(
    universe_size: int, sizes: Sequence[int], n_ambient: int, rng,
    trim: str = "pack",
) -> List[ColorFunction]:
    """Seeded random family of colorings f: [universe_size] -> 1..len(sizes).

    With probability >= 1 - n_ambient^(-c_fam), every tuple of disjoint sets
    (A_1, ..., A_l) with |A_i| <= sizes[i] is simultaneously hit by some f
    (A_i entirely colored i). Colors are drawn with probabilities
    proportional to the target sizes.

    trim="pack" shrinks class budgets by the room the earlier classes leave
    (disjoint sets cannot exceed the universe jointly); trim="each" only
    caps each class at the universe, keeping every class's probability
    positive for callers that need all colors available.
    """
    # class budgets beyond the universe size can never be realized by
    # disjoint sets; trim them before optimizing the color probabilities
    if trim == "pack":
        trimmed = []
        room = universe_size
        for a in sizes:
            a = min(a, room)
            trimmed.append(a)
            room -= a
    elif trim == "each":
        trimmed = [min(a, universe_size) for a in sizes]
    else:
        raise ValueError(f"unknown trim mode {trim!r}")
    sizes = trimmed
    total = sum(sizes)
    if total == 0:
        return [tuple(len(sizes) for _ in range(universe_size))]
    probs = [a / total for a in sizes]
    p_succ = math.prod(p ** a for p, a in zip(probs, sizes) if a > 0)
    count = max(1, math.ceil(config.C_FAM * math.log(max(n_ambient, 2)) / p_succ))
    count = min(count, config.FAMILY_SIZE_LIMIT)
    cumulative = []
    acc = 0.0
    for p in probs:
        acc += p
        cumulative.append(acc)
    family: List[ColorFunction] = []
    seen = set()
    for _ in range(count):
        colors = []
        for _ in range(universe_size):
            x = rng.random()
            c = next(
                i
                for i, edge in enumerate(cumulative)
                if x < edge or i == len(cumulative) - 1
            )
            colors.append(c + 1)
        f = tuple(colors)
        if f not in seen:  # duplicates add nothing downstream
            seen.add(f)
            family.append(f)
    return family


def color_family(
    universe_size: int, a1: int, a2: int, a3: int, n_ambient: int, rng
) -> List[ColorFunction]:
    """Three-color random family hitting disjoint triples of sizes a1,a2,a3."""
    return color_family_general(universe_size, (a1, a2, a3), n_ambient, rng)


def witness_cover(
    ctx: WitnessContext, rng
) -> Tuple[FrozenSet[int], CutCollection]:
    """(q_set, best): q_set covers (with high probability) every carvable
    terminal; best is a pairwise-disjoint collection of lean witnesses whose
    sets (L\\R)∩T lie inside q_set, maximizing the number of terminals cut
    off.

    Per color function f from a random family, terminals colored 1 become
    infinite-capacity, a super sink is added per torso component of the
    color-1 terminals, and a super source attached to X; a single-source
    mincut cover then yields candidate cuts, which are stripped of super
    vertices and filtered down to genuine witnesses.
    """
    g = ctx.g
    k_prime = ctx.k_prime
    if ctx.x_set == ctx.t_set:
        return frozenset(), []
    h, ids = ctx.torso_graph()
    pos = {v: i for i, v in enumerate(ids)}
    a3 = 2 * k_prime ** 3
    family = color_family(len(ids), k_prime + 1, k_prime, a3, g.n, rng)

    g_vertices = frozenset(range(g.n))
    kept: List[Tuple[int, int, CutCollection]] = []
    q_set: set = set()
    for f_index, f in enumerate(family):
        color1 = [local for local in range(len(ids)) if f[local] == 1]
        if not color1:
            continue
        # one super sink per torso component of the color-1 terminals,
        # joined to the component and its color-2 torso neighborhood
        comps = connected_components(h, set(range(len(ids))) - set(color1))
        extra_edges: List[Tuple[int, int]] = []
        sink_ids = []
        next_id = g.n
        for comp in comps:
            attach = set(comp) | {
                u for u in neighborhood(h, comp) if f[u] == 2
            }
            for local in sorted(attach):
                extra_edges.append((next_id, ids[local]))
            sink_ids.append(next_id)
            next_id += 1
        s_id = next_id
        for v in sorted(ctx.x_set):
            extra_edges.append((s_id, v))
        aug = Graph(s_id + 1, g.edges() + extra_edges)
        # X vertices stay at capacity 1 even when colored 1: they may appear
        # in separators (the cut still keeps X inside R), and an infinite X
        # vertex next to the super source would make mincuts unbounded
        caps = tuple(
            INF
            if v in ctx.t_set and v not in ctx.x_set and f[pos[v]] == 1
            else 1
            for v in range(g.n)
        ) + tuple(INF for _ in range(s_id + 1 - g.n))
        cover, _captured = single_source_mincut_cover(
            CapacitatedGraph(aug, caps), s_id, sink_ids, k_prime, rng
        )
        for c_index, coll in enumerate(cover.collections):
            mapped = []
            for cut in coll:
                proj = VertexCut(cut.L & g_vertices, cut.R & g_vertices)
                if proj.is_valid(g) and is_witness(ctx, proj):
                    mapped.append(proj)
            if mapped:
                kept.append((f_index, c_index, mapped))
                for cut in mapped:
                    q_set |= cut.left_only & ctx.t_set

    best_raw: CutCollection = []
    best_score = 0
    best_key = None
    for f_index, c_index, coll in kept:
        score = sum(len(cut.left_only & ctx.t_set) for cut in coll)
        if score > best_score:
            best_score = score
            best_raw = coll
            best_key = (f_index, c_index)
    # greedily absorb cuts from the other collections while the merged
    # family stays pairwise disjoint; every member is still a witness, so
    # carving along the merged family removes more terminals per round
    merged = list(best_raw)
    for key_f, key_c, coll in kept:
        if (key_f, key_c) == best_key:
            continue
        for cut in coll:
            if all(
                ordered_disjoint(cut, other) and ordered_disjoint(other, cut)
                for other in merged
            ):
                merged.append(cut)
    best = make_lean(ctx, merged) if merged else []
    return frozenset(q_set), best
