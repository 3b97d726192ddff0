"""Isolating vertex cuts: per-terminal mincuts that are pairwise disjoint."""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Tuple

from .core import Graph, VertexCut, connected_components, neighborhood
from .flow import (
    INF,
    CapacitatedGraph,
    PreconditionError,
    minimal_side_mincut,
)


class IsolatingCuts(list):
    """List of per-terminal cuts; `fallback_used` flags any defensive
    recomputation triggered by a runtime disjointness failure."""

    def __init__(self, cuts: Iterable[VertexCut], fallback_used: bool = False):
        super().__init__(cuts)
        self.fallback_used = fallback_used


def _check_independent(g: Graph, terms: List[int]) -> None:
    tset = set(terms)
    for v in terms:
        for u in g.adj[v]:
            if u in tset:
                raise PreconditionError(
                    "PRECONDITION_INDEPENDENCE", f"terminals {v} and {u} are adjacent"
                )


def _single_terminal_mincut(
    cg: CapacitatedGraph, w: int, others: FrozenSet[int]
) -> VertexCut:
    res = minimal_side_mincut(cg, frozenset([w]), others, bound=cg.base.n)
    assert res.mincut is not None
    return res.mincut


def ordered_disjoint(a: VertexCut, b: VertexCut) -> bool:
    """Disjointness for an ordered pair of cuts: L_a\\R_a avoids all of L_b."""
    return not (a.left_only & b.L)


def pairwise_disjoint(cuts: Iterable[VertexCut]) -> bool:
    cuts = list(cuts)
    for i, a in enumerate(cuts):
        for j, b in enumerate(cuts):
            if i != j and not ordered_disjoint(a, b):
                return False
    return True


def isolating_vertex_cuts(
    cg: CapacitatedGraph, w: Iterable[int], naive: bool = False
) -> IsolatingCuts:
    """For each terminal, a mincut separating it from the other terminals.

    Terminals must form an independent set of size >= 2 (capacities INF).
    The returned cuts are aligned with sorted(w); in the default mode they
    are pairwise disjoint (ordered sense), computed with ~log|w| set-to-set
    flows plus one localized flow per terminal.
    """
    g = cg.base
    terms = sorted(set(w))
    if len(terms) < 2:
        raise PreconditionError("PRECONDITION_SIZE", "need at least two terminals")
    _check_independent(g, terms)
    term_set = frozenset(terms)

    if naive:
        cuts = [
            _single_terminal_mincut(cg, t, term_set - {t}) for t in terms
        ]
        return IsolatingCuts(cuts)

    # phase 1: log|W| set-to-set mincuts along the bit code classes
    bits = max(1, (len(terms) - 1).bit_length())
    removed: set = set()
    for b in range(bits):
        zeros = frozenset(t for i, t in enumerate(terms) if not (i >> b) & 1)
        ones = frozenset(t for i, t in enumerate(terms) if (i >> b) & 1)
        if not zeros or not ones:
            continue
        res = minimal_side_mincut(cg, zeros, ones, bound=g.n)
        if res.mincut is None:
            raise PreconditionError(
                "PRECONDITION_INFINITE_CUT",
                "no finite cut separates two terminal groups",
            )
        removed |= res.mincut.separator

    # phase 2: localize each terminal's cut inside its residual component
    comp_of: Dict[int, FrozenSet[int]] = {}
    for comp in connected_components(g, removed):
        for t in terms:
            if t in comp:
                comp_of[t] = comp
    cuts: List[VertexCut] = []
    fallback = False
    all_vertices = frozenset(range(g.n))
    for t in terms:
        u_w = comp_of[t]
        boundary = neighborhood(g, u_w)
        if not boundary:
            # the terminal's component is already detached from everything else
            cuts.append(VertexCut(u_w, all_vertices - u_w))
            continue
        # keep U_w and its boundary as real (cuttable) vertices; contract
        # everything beyond them into a single super sink
        keep = set(u_w) | set(boundary)
        ids = sorted(keep)
        pos = {v: i for i, v in enumerate(ids)}
        sink = len(ids)
        edges = []
        for v in ids:
            attached = False
            for u in g.adj[v]:
                if u in pos:
                    if v < u:
                        edges.append((pos[v], pos[u]))
                elif not attached:
                    edges.append((pos[v], sink))
                    attached = True
        local = Graph(len(ids) + 1, edges)
        caps = tuple(cg.capacity[v] for v in ids) + (INF,)
        res = minimal_side_mincut(
            CapacitatedGraph(local, caps),
            frozenset([pos[t]]),
            frozenset([sink]),
            bound=g.n,
        )
        if res.mincut is None:
            raise PreconditionError(
                "PRECONDITION_INFINITE_CUT",
                f"no finite cut isolates terminal {t}",
            )
        left_only = frozenset(ids[i] for i in res.mincut.left_only)
        sep = frozenset(ids[i] for i in res.mincut.separator if i != sink)
        cuts.append(VertexCut(left_only | sep, all_vertices - left_only))

    # defensive recheck: on any ordered-disjointness failure, fall back to a
    # direct per-terminal mincut for the offending terminal
    for i, t in enumerate(terms):
        for j in range(len(terms)):
            if i != j and not ordered_disjoint(cuts[i], cuts[j]):
                cuts[i] = _single_terminal_mincut(cg, t, term_set - {t})
                fallback = True
                break
    return IsolatingCuts(cuts, fallback_used=fallback)
