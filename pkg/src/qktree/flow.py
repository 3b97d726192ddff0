"""Vertex-capacitated maximum flow bounded by k, with mincut and path extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .core import Graph, VertexCut, induced_subgraph

INF = math.inf

EXCEEDS_BOUND = "EXCEEDS_BOUND"


class PreconditionError(ValueError):
    """Raised when an operation's stated precondition is violated."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class CapacitatedGraph:
    """Graph plus per-vertex positive integer (or infinite) capacities."""

    base: Graph
    capacity: Tuple[float, ...]

    def __post_init__(self):
        if len(self.capacity) != self.base.n:
            raise ValueError("capacity vector length must equal vertex count")
        if any(c != INF and (c <= 0 or int(c) != c) for c in self.capacity):
            raise ValueError("capacities must be positive integers or INF")


def unit_capacities(g: Graph, inf_set: Iterable[int] = ()) -> CapacitatedGraph:
    """Capacity 1 everywhere except INF on inf_set."""
    infs = set(inf_set)
    return CapacitatedGraph(
        g, tuple(INF if v in infs else 1 for v in range(g.n))
    )


@dataclass(frozen=True)
class FlowResult:
    value: object  # int or EXCEEDS_BOUND
    mincut: Optional[VertexCut] = None
    paths: Optional[List[List[int]]] = None


class _SplitNetwork:
    """In/out vertex-splitting reduction with BFS augmenting paths.

    Node ids: vertex v maps to nodes 2v (in) and 2v+1 (out); the super
    source is 2n and the super sink is 2n+1. Neighbor lists are kept in
    ascending node id so augmentation order is deterministic.
    """

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.adj: List[List[int]] = [[] for _ in range(num_nodes)]
        self.arc_to: List[int] = []
        self.arc_cap: List[int] = []
        self._pair = {}

    def add_arc(self, a: int, b: int, cap: int) -> None:
        i = self._pair.get((a, b))
        if i is None:
            i = len(self.arc_to)
            self._pair[(a, b)] = i
            self._pair[(b, a)] = i + 1
            self.arc_to.extend((b, a))
            self.arc_cap.extend((0, 0))
            self.adj[a].append(i)
            self.adj[b].append(i + 1)
        self.arc_cap[i] += cap

    def finalize(self) -> None:
        to = self.arc_to
        for lst in self.adj:
            lst.sort(key=to.__getitem__)

    def bfs_augment(self, s: int, t: int) -> int:
        """One shortest augmenting path; returns pushed amount (0 if none)."""
        to = self.arc_to
        cap = self.arc_cap
        parent_arc = [-1] * self.num_nodes
        parent_arc[s] = -2
        queue = [s]
        qi = 0
        while qi < len(queue) and parent_arc[t] == -1:
            v = queue[qi]
            qi += 1
            for i in self.adj[v]:
                u = to[i]
                if parent_arc[u] == -1 and cap[i] > 0:
                    parent_arc[u] = i
                    queue.append(u)
        if parent_arc[t] == -1:
            return 0
        arcs = []
        node = t
        while node != s:
            i = parent_arc[node]
            arcs.append(i)
            node = to[i ^ 1]
        push = min(cap[i] for i in arcs)
        for i in arcs:
            cap[i] -= push
            cap[i ^ 1] += push
        return push

    def residual_reachable(self, s: int) -> set:
        to = self.arc_to
        cap = self.arc_cap
        seen = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for i in self.adj[v]:
                u = to[i]
                if u not in seen and cap[i] > 0:
                    seen.add(u)
                    stack.append(u)
        return seen


def _base_network(cg: CapacitatedGraph, bound: int) -> _SplitNetwork:
    """Vertex and edge arcs only (no endpoint arcs), cached per graph+bound."""
    cache = getattr(cg, "_net_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(cg, "_net_cache", cache)
    tmpl = cache.get(bound)
    if tmpl is None:
        g = cg.base
        big = bound + 1
        tmpl = _SplitNetwork(2 * g.n + 2)
        for v in range(g.n):
            c = cg.capacity[v]
            tmpl.add_arc(2 * v, 2 * v + 1, big if c == INF else min(int(c), big))
        for u in range(g.n):
            for v in g.adj[u]:
                tmpl.add_arc(2 * u + 1, 2 * v, big)
        tmpl.finalize()
        cache[bound] = tmpl
    return tmpl


def _build_network(
    cg: CapacitatedGraph,
    sources: FrozenSet[int],
    sinks: FrozenSet[int],
    bound: int,
    cut_sources: bool,
    cut_sinks: bool,
) -> Tuple[_SplitNetwork, int, int]:
    g = cg.base
    big = bound + 1
    tmpl = _base_network(cg, bound)
    net = _SplitNetwork.__new__(_SplitNetwork)
    net.num_nodes = tmpl.num_nodes
    net.adj = [list(lst) for lst in tmpl.adj]
    net.arc_to = list(tmpl.arc_to)
    net.arc_cap = list(tmpl.arc_cap)
    net._pair = {}  # endpoint arcs below are always new node pairs
    s_node, t_node = 2 * g.n, 2 * g.n + 1
    touched = []
    for v in sorted(sources):
        node = 2 * v if cut_sources else 2 * v + 1
        net.add_arc(s_node, node, big)
        touched.append(node)
    for v in sorted(sinks):
        node = 2 * v + 1 if cut_sinks else 2 * v
        net.add_arc(node, t_node, big)
        touched.append(node)
    to = net.arc_to
    for node in touched:
        net.adj[node].sort(key=to.__getitem__)
    net.adj[s_node].sort(key=to.__getitem__)
    net.adj[t_node].sort(key=to.__getitem__)
    return net, s_node, t_node


def _extract_cut(
    net: _SplitNetwork,
    g: Graph,
    s_node: int,
) -> VertexCut:
    reach = net.residual_reachable(s_node)
    left_only = {v for v in range(g.n) if (2 * v + 1) in reach}
    sep = {v for v in range(g.n) if (2 * v) in reach and (2 * v + 1) not in reach}
    left = left_only | sep
    right = set(range(g.n)) - left_only
    return VertexCut(frozenset(left), frozenset(right))


def _decompose_paths(
    net: _SplitNetwork, g: Graph, s_node: int, t_node: int, original_cap
) -> List[List[int]]:
    """Read vertex paths off the flow (original_cap - residual_cap per arc)."""
    flow = [orig - cur for orig, cur in zip(original_cap, net.arc_cap)]
    to = net.arc_to
    paths = []
    while True:
        # walk one unit of flow from the super source
        node = s_node
        trail = []
        while node != t_node:
            nxt = None
            for i in net.adj[node]:
                if flow[i] > 0:
                    nxt = i
                    break
            if nxt is None:
                break
            flow[nxt] -= 1
            trail.append(to[nxt])
            node = to[nxt]
        if node != t_node:
            break
        verts = []
        for nd in trail:
            if nd < 2 * g.n:
                v = nd // 2
                if not verts or verts[-1] != v:
                    verts.append(v)
        paths.append(verts)
    return paths


def bounded_vertex_maxflow(
    cg: CapacitatedGraph,
    sources: Iterable[int],
    sinks: Iterable[int],
    bound: int,
    cut_sources: bool = False,
    cut_sinks: bool = False,
    with_paths: bool = False,
) -> FlowResult:
    """Max flow between vertex sets with value capped at `bound`.

    Returns the exact value and a sources-sinks mincut when the value is at
    most `bound`, else EXCEEDS_BOUND. With the default flags the endpoint
    vertices themselves are not cuttable (sources end in L\\R, sinks in
    R\\L); with cut_sources / cut_sinks their own capacities apply and they
    may appear in the separator.
    """
    src = frozenset(sources)
    snk = frozenset(sinks)
    if not src or not snk:
        raise PreconditionError("PRECONDITION_EMPTY", "sources and sinks must be nonempty")
    if src & snk:
        raise PreconditionError("PRECONDITION_OVERLAP", "sources and sinks must be disjoint")
    if not cut_sources and not cut_sinks:
        g = cg.base
        for u in src:
            for v in cg.base.adj[u]:
                if v in snk:
                    raise PreconditionError(
                        "PRECONDITION_EDGE", f"edge ({u},{v}) joins a source to a sink"
                    )
    net, s_node, t_node = _build_network(cg, src, snk, bound, cut_sources, cut_sinks)
    original_cap = list(net.arc_cap) if with_paths else None
    value = 0
    while value <= bound:
        pushed = net.bfs_augment(s_node, t_node)
        if pushed == 0:
            break
        value += pushed
    if value > bound:
        return FlowResult(EXCEEDS_BOUND)
    cut = _extract_cut(net, cg.base, s_node)
    paths = None
    if with_paths:
        paths = _decompose_paths(net, cg.base, s_node, t_node, original_cap)
    return FlowResult(value, cut, paths)


def minimal_side_mincut(
    cg: CapacitatedGraph,
    sources: Iterable[int],
    sinks: Iterable[int],
    bound: int,
    cut_sources: bool = False,
    cut_sinks: bool = False,
) -> FlowResult:
    """The unique sources-sinks mincut minimizing |L\\R|.

    The residual-reachability cut taken from the source side after maxflow
    is exactly this minimal cut, so this shares the maxflow implementation.
    """
    return bounded_vertex_maxflow(
        cg, sources, sinks, bound, cut_sources=cut_sources, cut_sinks=cut_sinks
    )


def disjoint_paths_certificate(
    g: Graph,
    start_set: Iterable[int],
    end_set: Iterable[int],
    within: Iterable[int],
    count: int,
) -> Optional[List[List[int]]]:
    """`count` vertex-disjoint paths in g[within] from distinct start vertices
    to end_set, or None if no such system exists."""
    starts = set(start_set)
    ends = set(end_set)
    wset = set(within)
    if not starts <= wset:
        raise PreconditionError("PRECONDITION_SUBSET", "start_set must lie inside within")
    ends &= wset
    if count <= 0:
        return []
    # a vertex that is both a start and an end serves as its own path
    trivial = sorted(starts & ends)[: count]
    paths: List[List[int]] = [[v] for v in trivial]
    need = count - len(paths)
    if need == 0:
        return paths
    remaining = wset - set(trivial)
    starts2 = (starts - set(trivial)) & remaining
    ends2 = (ends - set(trivial)) & remaining
    if not starts2 or not ends2:
        return None
    sub, ids = induced_subgraph(g, remaining)
    pos = {v: i for i, v in enumerate(ids)}
    cg = unit_capacities(sub)
    res = bounded_vertex_maxflow(
        cg,
        frozenset(pos[v] for v in starts2),
        frozenset(pos[v] for v in ends2),
        bound=need,
        cut_sources=True,
        cut_sinks=True,
        with_paths=True,
    )
    if res.value == EXCEEDS_BOUND:
        # more than `need` disjoint paths exist; rerun with a higher bound
        # so the decomposition is available, then keep the first `need`
        res = bounded_vertex_maxflow(
            cg,
            frozenset(pos[v] for v in starts2),
            frozenset(pos[v] for v in ends2),
            bound=sub.n,
            cut_sources=True,
            cut_sinks=True,
            with_paths=True,
        )
    if res.value != EXCEEDS_BOUND and res.value < need:
        return None
    assert res.paths is not None
    for p in res.paths[:need]:
        paths.append([ids[i] for i in p])
    return paths
