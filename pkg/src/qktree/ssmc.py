"""Single-source vertex mincut covers of bounded width."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

from . import config
from .core import Graph, VertexCut, connected_components
from .flow import (
    EXCEEDS_BOUND,
    CapacitatedGraph,
    PreconditionError,
    bounded_vertex_maxflow,
    minimal_side_mincut,
)
from .isolating import isolating_vertex_cuts, pairwise_disjoint

CutCollection = List[VertexCut]


@dataclass
class MincutCover:
    """Cut collections, each a family of pairwise-disjoint t-s mincuts."""

    collections: List[CutCollection] = field(default_factory=list)

    @property
    def width(self) -> int:
        return len(self.collections)

    def all_cuts(self) -> List[VertexCut]:
        return [cut for coll in self.collections for cut in coll]


def width_budget(k: int, n: int) -> int:
    log = max(1, math.ceil(math.log2(max(n, 2))))
    return 8 * k * log ** 3


def single_source_mincut_cover(
    cg: CapacitatedGraph,
    s: int,
    sinks: Iterable[int],
    k: int,
    rng,
    c_mid: int = config.C_MID,
) -> Tuple[MincutCover, FrozenSet[int]]:
    """Mincut cover for all sinks within vertex connectivity k of the source.

    Returns (cover, captured) where captured collects every sink t with
    lambda(t, s) <= k (with high probability over the seeded rng). Every
    stored cut is a t-s mincut for some captured sink t with t in L\\R, and
    each collection consists of pairwise disjoint cuts.
    """
    g = cg.base
    sink_list = sorted(set(sinks))
    if s in sink_list:
        raise PreconditionError("PRECONDITION_OVERLAP", "source cannot be a sink")
    for t in sink_list:
        if g.has_edge(s, t):
            raise PreconditionError(
                "PRECONDITION_INDEPENDENCE", f"sink {t} is adjacent to the source"
            )
    for a_i, a in enumerate(sink_list):
        for b in sink_list[a_i + 1:]:
            if g.has_edge(a, b):
                raise PreconditionError(
                    "PRECONDITION_INDEPENDENCE", f"sinks {a} and {b} are adjacent"
                )
    log = max(1, math.ceil(math.log2(max(g.n, 2))))
    mid_reps = c_mid * log * log
    scales = max(1, math.floor(math.log2(max(g.n, 2)))) + 1

    gamma: set = set()
    cover = MincutCover()
    # isolating_vertex_cuts is deterministic in its terminal set, and small
    # sampled sets recur constantly across repetitions; memoize per call
    iso_cache: dict = {}

    # sinks disconnected from the source have mincut value 0; capture them
    # deterministically with one collection of component cuts
    full = frozenset(range(g.n))
    zero_coll: List[VertexCut] = []
    for comp in connected_components(g):
        if s in comp:
            continue
        comp_sinks = [t for t in sink_list if t in comp]
        if comp_sinks:
            zero_coll.append(VertexCut(comp, full - comp))
            gamma.update(comp_sinks)
    if zero_coll:
        cover.collections.append(zero_coll)

    # a cut of size k' <= k isolating a sink certifies lambda(t, s) <= k, so
    # sinks above that connectivity can never be captured; drop them from
    # the sampling pool up front (one cheap bounded flow each)
    light = [
        t
        for t in sink_list
        if t in gamma
        or bounded_vertex_maxflow(cg, {t}, {s}, k).value != EXCEEDS_BOUND
    ]

    for k_prime in range(1, k + 1):
        if all(t in gamma for t in light):
            break  # nothing left to sample; no rng draws would occur anyway
        for _ in range(mid_reps):
            round_cuts: List[VertexCut] = []
            pool = [t for t in light if t not in gamma]  # fixed within a round
            for i in range(scales):
                r = 1 << i
                sampled = [t for t in pool if rng.random() * r < 1.0]
                if not sampled:
                    continue
                terms = sorted(sampled + [s])
                key = tuple(terms)
                iso = iso_cache.get(key)
                if iso is None:
                    # per-sink source-minimal mincuts against the other
                    # terminals; these coincide with the localized isolating
                    # construction (each minimal side lies inside its
                    # terminal's residual component), and bounding the flow
                    # at k is free since only cuts of size <= k are kept
                    iso = {}
                    term_set = frozenset(terms)
                    for t in terms:
                        if t == s:
                            continue
                        res = minimal_side_mincut(
                            cg, {t}, term_set - {t}, bound=k
                        )
                        if res.value != EXCEEDS_BOUND:
                            iso[t] = res.mincut
                    if not pairwise_disjoint(iso.values()):
                        # defensive fallback to the localized construction,
                        # which repairs disjointness violations internally
                        full_iso = isolating_vertex_cuts(cg, terms)
                        iso = {
                            t: cut
                            for t, cut in zip(terms, full_iso)
                            if t != s and cut.size <= k
                        }
                    iso_cache[key] = iso
                coll = [
                    iso[t]
                    for t in sampled
                    if t in iso and iso[t].size == k_prime
                ]
                if coll:
                    cover.collections.append(coll)
                    round_cuts.extend(coll)
            for cut in round_cuts:
                gamma |= cut.left_only & (set(sink_list) - gamma)
    return cover, frozenset(gamma)


def check_cover_properties(
    g: Graph,
    cg: CapacitatedGraph,
    s: int,
    captured: FrozenSet[int],
    cover: MincutCover,
    mincut_value,
) -> List[str]:
    """Literal check of the three mincut-cover properties; returns a list of
    violation descriptions (empty means all hold).

    mincut_value(t) must return lambda(t, s) computed independently.
    """
    problems = []
    for ci, coll in enumerate(cover.collections):
        if not pairwise_disjoint(coll):
            problems.append(f"collection {ci} is not pairwise disjoint")
        for cut in coll:
            if not cut.is_valid(g):
                problems.append(f"collection {ci} holds an invalid cut")
                continue
            if s not in cut.right_only:
                problems.append(f"collection {ci} holds a cut not avoiding s")
                continue
            owners = [t for t in captured if t in cut.left_only]
            if not owners:
                problems.append(
                    f"collection {ci} holds a cut isolating no captured sink"
                )
                continue
            if all(cut.size != mincut_value(t) for t in owners):
                problems.append(
                    f"collection {ci} holds a non-mincut of size {cut.size}"
                )
    for t in captured:
        if not any(
            t in cut.left_only for coll in cover.collections for cut in coll
        ):
            problems.append(f"captured sink {t} is covered by no cut")
    return problems
