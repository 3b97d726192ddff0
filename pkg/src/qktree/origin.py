"""Net sampling, exact unbreakability checking, and balanced unbreakable origins."""

from __future__ import annotations

import math
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Tuple

from . import config
from .core import (
    Graph,
    SizeGuardError,
    VertexCut,
    components_masks,
    connected_components,
    induced_subgraph,
    is_connected,
    mask_to_set,
    set_to_mask,
)
from .flow import bounded_vertex_maxflow, unit_capacities, EXCEEDS_BOUND

UNBREAKABLE = "UNBREAKABLE"


def _split_counts(counts: List[int], lo: int, hi: int) -> Optional[List[int]]:
    """Indices of a subset of counts whose sum lies in [lo, hi], or None.

    lo >= 1 is assumed, so the chosen subset is nonempty and (because the
    complement's count is also positive) proper.
    """
    total = sum(counts)
    if hi < lo:
        return None
    # suffix_achieve[i] = bitset of sums formable from counts[i:]
    suffix = [1] * (len(counts) + 1)
    for i in range(len(counts) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | (suffix[i + 1] << counts[i])
    window = ((1 << (hi - lo + 1)) - 1) << lo
    if not suffix[0] & window:
        return None
    # walk forward: keep target reachable from the remaining counts
    target = (suffix[0] & window).bit_length() - 1  # largest achievable in window
    chosen = []
    for i, c in enumerate(counts):
        if c <= target and (suffix[i + 1] >> (target - c)) & 1:
            chosen.append(i)
            target -= c
        if target == 0:
            break
    return chosen


def _dfs_articulations(adj, alive: int, root: int):
    """One DFS from root over the alive vertices; returns (visited_mask,
    articulation_mask). visited_mask < alive means the graph is already
    disconnected (articulation_mask is then meaningless)."""
    disc = {}
    low = {}
    art = 0
    timer = 1
    disc[root] = low[root] = timer
    timer += 1
    visited = 1 << root
    root_children = 0
    stack = [(root, -1, iter(adj[root]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for u in it:
            if not (alive >> u) & 1:
                continue
            if u not in disc:
                disc[u] = low[u] = timer
                timer += 1
                visited |= 1 << u
                if v == root:
                    root_children += 1
                stack.append((u, v, iter(adj[u])))
                advanced = True
                break
            if u != parent and disc[u] < low[v]:
                low[v] = disc[u]
        if not advanced:
            stack.pop()
            if parent != -1:
                if parent != root and low[v] >= disc[parent]:
                    art |= 1 << parent
                if low[v] < low[parent]:
                    low[parent] = low[v]
    if root_children >= 2:
        art |= 1 << root
    return visited, art


def _removal_profile(g: Graph, smask: int):
    """("d", comps) when g minus the masked vertices is disconnected, else
    ("c", articulation_mask) of the remaining graph ("e", None) when empty."""
    alive = ((1 << g.n) - 1) ^ smask
    if not alive:
        return ("e", None)
    root = (alive & -alive).bit_length() - 1
    visited, art = _dfs_articulations(g.adj, alive, root)
    if visited != alive:
        return ("d", components_masks(g, smask))
    return ("c", art)


def _still_disconnected(profile, v: int) -> bool:
    """Whether removing one more vertex v keeps at least two components,
    given the removal profile of the smaller separator."""
    kind, data = profile
    if kind == "e":
        return False
    if kind == "c":
        return bool((data >> v) & 1)
    comps = data
    if len(comps) >= 3:
        return True
    cv = next(c for c in comps if (c >> v) & 1)
    return cv != (1 << v)  # v's component must survive its removal


def _disconnecting_separators(g: Graph, k: int):
    """All vertex sets of size <= k whose removal leaves >= 2 components,
    with those components, ascending by (size, lexicographic members).

    Sizes 1..3 are found via articulation vertices of the graph minus each
    smaller prefix (one DFS per prefix) rather than a component computation
    per candidate subset; larger sizes fall back to the plain sweep.
    """
    n = g.n
    out = []
    if n == 0:
        return out
    full = (1 << n) - 1
    base = components_masks(g, 0)
    if len(base) >= 2:
        # already-disconnected inputs are rare and small here; plain sweep
        for size in range(0, min(k, n) + 1):
            for sep in combinations(range(n), size):
                smask = set_to_mask(sep)
                comps = components_masks(g, smask)
                if len(comps) >= 2:
                    out.append((smask, comps))
        return out
    if k < 1:
        return out
    _, art0 = _dfs_articulations(g.adj, full, 0)
    for v in range(n):
        if (art0 >> v) & 1:
            out.append((1 << v, components_masks(g, 1 << v)))
    if k >= 2:
        singles = [_removal_profile(g, 1 << u) for u in range(n)]
        for u in range(n):
            prof = singles[u]
            for v in range(u + 1, n):
                if _still_disconnected(prof, v):
                    smask = (1 << u) | (1 << v)
                    out.append((smask, components_masks(g, smask)))
    if k >= 3:
        for u in range(n):
            for v in range(u + 1, n):
                pair = (1 << u) | (1 << v)
                prof = _removal_profile(g, pair)
                if prof[0] == "e":
                    continue
                for w in range(v + 1, n):
                    if _still_disconnected(prof, w):
                        smask = pair | (1 << w)
                        out.append((smask, components_masks(g, smask)))
    for size in range(4, min(k, n) + 1):
        for sep in combinations(range(n), size):
            smask = set_to_mask(sep)
            comps = components_masks(g, smask)
            if len(comps) >= 2:
                out.append((smask, comps))
    return out


def _separator_candidates(g: Graph, k: int):
    """Cached list of disconnecting (separator mask, components) pairs; the
    refinement loops re-certify the same graph many times, so the
    enumeration is done once per (graph, bound)."""
    cache = g._caches.setdefault("separators", {})
    found = cache.get(k)
    if found is None:
        cache[k] = found = _disconnecting_separators(g, k)
    return found


def _check_by_separators(
    g: Graph, wmask: int, q: int, k: int
):
    """Enumerate candidate separators of size <= k; exact."""
    full = (1 << g.n) - 1
    for smask, comps in _separator_candidates(g, k):
        q2 = q - bin(smask & wmask).count("1")
        if q2 < 0:
            left = comps[0]
            return VertexCut(
                mask_to_set(left | smask), mask_to_set(full & ~left)
            )
        counts = [bin(c & wmask).count("1") for c in comps]
        total = sum(counts)
        chosen = _split_counts(counts, q2 + 1, total - q2 - 1)
        if chosen is None:
            continue
        left = smask
        for i in chosen:
            left |= comps[i]
        return VertexCut(
            mask_to_set(left), mask_to_set((full & ~left) | smask)
        )
    return UNBREAKABLE


def _check_by_partitions(g: Graph, w: List[int], q: int, k: int):
    """Enumerate forced-separator subsets of w plus partitions of the rest,
    one bounded flow each; exact (requires q >= k)."""
    n = g.n
    wlen = len(w)
    for s_size in range(0, min(k, wlen) + 1):
        for forced in combinations(w, s_size):
            q2 = q - s_size  # >= 0 since s_size <= k <= q
            rest = [v for v in w if v not in forced]
            if len(rest) < 2 * (q2 + 1):
                continue
            sub, ids = induced_subgraph(g, set(range(n)) - set(forced))
            pos = {v: i for i, v in enumerate(ids)}
            cg = unit_capacities(sub)
            bound = k - s_size
            rest_local = [pos[v] for v in rest]
            anchor = rest_local[0]
            others = rest_local[1:]
            for bitsel in range(1 << len(others)):
                side_a = {anchor} | {
                    others[i] for i in range(len(others)) if (bitsel >> i) & 1
                }
                if not (q2 < len(side_a) < len(rest_local) - q2):
                    continue
                side_b = set(rest_local) - side_a
                res = bounded_vertex_maxflow(
                    cg,
                    frozenset(side_a),
                    frozenset(side_b),
                    bound,
                    cut_sources=True,
                    cut_sinks=True,
                )
                if res.value != EXCEEDS_BOUND:
                    cut = res.mincut
                    left = {ids[i] for i in cut.L} | set(forced)
                    right = {ids[i] for i in cut.R} | set(forced)
                    return VertexCut(frozenset(left), frozenset(right))
    return UNBREAKABLE


def check_unbreakable(
    g: Graph,
    w: Iterable[int],
    q: int,
    k: int,
    enum_limit: int = config.UNBREAKABLE_ENUM_LIMIT,
):
    """Certify that w is (q,k)-unbreakable in g, or return a breakable
    witness: a cut (L,R) with |L∩R| <= k, |L∩w| > q, and |R∩w| > q.

    Exhaustive and exact. Two interchangeable strategies share the work: a
    partition enumeration over w (forcing each small subset of w into the
    separator, then one bounded flow per partition of the rest) and an
    enumeration of candidate separators of size <= k; the cheaper one for
    the given sizes is used.
    """
    wset = sorted(set(w))
    if len(wset) + min(k, len(wset)) < 2 * q + 2:
        # any witness needs |L∩w| + |R∩w| >= 2q+2, but that sum is at most
        # |w| + |separator ∩ w| <= |w| + k; no enumeration needed
        return UNBREAKABLE
    if len(wset) > enum_limit:
        raise SizeGuardError(
            f"set of size {len(wset)} exceeds the enumeration limit {enum_limit}"
        )
    wmask = set_to_mask(wset)
    cost_sep = sum(math.comb(g.n, s) for s in range(0, min(k, g.n) + 1))
    cost_part = sum(
        math.comb(len(wset), s) * (1 << max(len(wset) - s - 1, 0))
        for s in range(0, min(k, len(wset)) + 1)
    )
    if q >= k and cost_part * 8 < cost_sep:
        return _check_by_partitions(g, wset, q, k)
    return _check_by_separators(g, wmask, q, k)


def net_size(sigma: int, alpha: float) -> int:
    return math.ceil(config.C_NET * (sigma / alpha) * math.log(1 / alpha))


def sample_net(g: Graph, sigma: int, alpha: float, rng) -> FrozenSet[int]:
    """Uniform random set of the prescribed net size (whole vertex set when
    the budget reaches n). Correctness holds only with constant probability;
    callers absorb failures through retries."""
    size = net_size(sigma, alpha)
    if size >= g.n:
        return frozenset(range(g.n))
    return frozenset(rng.sample(range(g.n), size))


def _smaller_side(cut: VertexCut) -> VertexCut:
    """Orient a witness so L is the smaller side (lexicographic tie-break)."""
    if len(cut.L) < len(cut.R):
        return cut
    if len(cut.R) < len(cut.L):
        return cut.reversed()
    return cut if sorted(cut.L) <= sorted(cut.R) else cut.reversed()


def balanced_origin(g: Graph, k: int, sigma: int, rng) -> FrozenSet[int]:
    """A set that is always (k,k)-unbreakable in g and, with constant
    probability, a 1/2-balanced sigma-origin (every superset with adhesion
    at most sigma is 1/2-balanced).

    Starts from a sampled net and repeatedly applies the smaller-side update
    X <- (X \\ L) ∪ (L ∩ R) until the unbreakability check certifies.
    """
    if k > sigma:
        raise ValueError("k must be at most sigma")
    if not is_connected(g):
        raise ValueError("balanced_origin requires a connected graph")
    w = sample_net(g, sigma, 0.5, rng)
    x = set(w)
    while True:
        verdict = check_unbreakable(g, x, k, k)
        if verdict == UNBREAKABLE:
            return frozenset(x)
        cut = _smaller_side(verdict)
        new_x = (x - cut.L) | (cut.L & cut.R)
        assert len(new_x) < len(x), "witness update must shrink the set"
        x = new_x
        if __debug__:
            half = g.n / 2
            comps = connected_components(g, x)
            for v in w - x:
                for comp in comps:
                    if v in comp:
                        assert len(comp) <= half, (
                            "net vertex outside the set fell in a large component"
                        )
                        break
