"""Bridge graphs B(S), maximum bipartite matching, and the matching ratio gamma.

``gamma = min nu(B(S)) / |S|`` over ``0 < |S| <= n/2``, where ``nu`` is the size of a
maximum matching. ``verify_msize`` checks ``nu(B(S)) >= alpha * |S| / 4`` subset by subset.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InvalidParams, TooLargeForExact
from .graph import Graph, gather_neighbors
from .metrics import (
    DEFAULT_SAMPLES,
    ExpansionResult,
    _check_subset,
    _members,
    random_subsets,
    vertex_expansion,
)

__all__ = [
    "GAMMA_EXACT_CAP",
    "MSIZE_CAP",
    "BridgeGraph",
    "Matching",
    "MsizeReport",
    "bridge",
    "gamma",
    "max_matching",
    "matching_number",
    "verify_msize",
]

GAMMA_EXACT_CAP = 16
MSIZE_CAP = 12


@dataclass(frozen=True)
class BridgeGraph:
    """Bipartite graph between ``left = S`` and ``right = V - S`` on the host's cross edges."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    adj: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self.left for v in self.adj[u]]

    @property
    def num_edges(self) -> int:
        return sum(len(vs) for vs in self.adj.values())

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]]) -> "BridgeGraph":
        adj: dict[int, set[int]] = {}
        right: set[int] = set()
        for u, v in edges:
            adj.setdefault(u, set()).add(v)
            right.add(v)
        if set(adj) & right:
            raise InvalidParams("left and right sides overlap")
        left = tuple(sorted(adj))
        return cls(left, tuple(sorted(right)), {u: tuple(sorted(adj[u])) for u in left})


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def is_valid(self, b: BridgeGraph) -> bool:
        ends = [u for u, _ in self.pairs] + [v for _, v in self.pairs]
        if len(set(ends)) != len(ends):
            return False
        return all(v in b.adj.get(u, ()) for u, v in self.pairs)


def bridge(g: Graph, S: Iterable[int]) -> BridgeGraph:
    nodes = _check_subset(g, S)
    inside = np.zeros(g.n, dtype=bool)
    inside[nodes] = True
    nb = gather_neighbors(g.indptr, g.indices, nodes)
    owner = np.repeat(nodes, g.degrees[nodes])
    cross = ~inside[nb]
    owner, nb = owner[cross], nb[cross]
    adj = {int(u): () for u in nodes}
    if owner.size:
        cuts = np.flatnonzero(np.diff(owner)) + 1
        for grp_owner, grp in zip(np.split(owner, cuts), np.split(nb, cuts)):
            adj[int(grp_owner[0])] = tuple(grp.tolist())
    return BridgeGraph(tuple(nodes.tolist()), tuple(np.flatnonzero(~inside).tolist()), adj)


_FREE = -1
_INF = float("inf")


def max_matching(b: BridgeGraph) -> Matching:
    """Maximum-cardinality matching by Hopcroft-Karp.

    Left vertices are scanned in ascending ID order and neighbour lists in the order
    stored, so the returned pairs are a deterministic function of the input.
    """
    left = b.left
    adj = b.adj
    mate_l = {u: _FREE for u in left}
    mate_r: dict[int, int] = {}
    dist: dict[int, float] = {}

    def bfs() -> bool:
        q = deque()
        for u in left:
            if mate_l[u] == _FREE:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = mate_r.get(v, _FREE)
                if w == _FREE:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def augment(root: int) -> bool:
        # iterative DFS along the BFS layering; stack holds (left vertex, next edge index)
        stack = [(root, 0)]
        path: list[tuple[int, int]] = []
        while stack:
            u, i = stack[-1]
            nbrs = adj[u]
            if i == len(nbrs):
                dist[u] = _INF
                stack.pop()
                if path:
                    path.pop()
                continue
            stack[-1] = (u, i + 1)
            v = nbrs[i]
            w = mate_r.get(v, _FREE)
            if w == _FREE:
                path.append((u, v))
                for pu, pv in path:
                    mate_l[pu] = pv
                    mate_r[pv] = pu
                return True
            if dist[w] == dist[u] + 1:
                path.append((u, v))
                stack.append((w, 0))
        return False

    while bfs():
        for u in left:
            if mate_l[u] == _FREE:
                augment(u)
    return Matching(tuple((u, mate_l[u]) for u in left if mate_l[u] != _FREE))


def matching_number(S_mask: int, nbr_masks: tuple[int, ...]) -> int:
    """nu(B(S)) for a small graph given as bitmasks (Kuhn's augmenting paths)."""
    outside = ~S_mask
    mate: dict[int, int] = {}
    size = 0
    u_mask = S_mask
    while u_mask:
        low = u_mask & -u_mask
        u = low.bit_length() - 1
        u_mask ^= low
        if not nbr_masks[u] & outside:
            continue
        seen = [0]

        def try_kuhn(x: int) -> bool:
            avail = nbr_masks[x] & outside & ~seen[0]
            while avail:
                bit = avail & -avail
                avail ^= bit
                seen[0] |= bit
                v = bit.bit_length() - 1
                y = mate.get(v)
                if y is None or try_kuhn(y):
                    mate[v] = x
                    return True
            return False

        if try_kuhn(u):
            size += 1
    return size


def _exact_gamma(g: Graph) -> ExpansionResult:
    if g.n > GAMMA_EXACT_CAP:
        raise TooLargeForExact(f"exact gamma supports n <= {GAMMA_EXACT_CAP}, got n={g.n}")
    if g.n < 2:
        raise InvalidParams("gamma is undefined for a single vertex")
    masks = g.nbr_masks
    half = g.n // 2
    best_num, best_den, best_mask = None, None, None
    for S in range(1, 1 << g.n):
        k = S.bit_count()
        if k > half:
            continue
        # nu >= 1 in a connected graph, so S cannot beat the incumbent once best <= 1/k
        if best_num is not None and best_num * k <= best_den:
            continue
        nu = matching_number(S, masks)
        if best_num is None or nu * best_den < best_num * k:
            best_num, best_den, best_mask = nu, k, S
    return ExpansionResult(Fraction(best_num, best_den), _members(best_mask), "exact")


def _sampled_gamma(g: Graph, k: int, seed: int) -> ExpansionResult:
    if k < 1:
        raise InvalidParams("need at least one sample")
    if g.n < 2:
        raise InvalidParams("gamma is undefined for a single vertex")
    best = None
    for S in random_subsets(g.n, k, seed, max(1, g.n // 2)):
        members = tuple(S.tolist())
        val = Fraction(max_matching(bridge(g, members)).size, len(members))
        if best is None or val < best[0]:
            best = (val, members)
    return ExpansionResult(best[0], best[1], f"sampled({k})")


def gamma(g: Graph, mode: str = "exact", samples: int = DEFAULT_SAMPLES, seed: int = 0) -> ExpansionResult:
    if mode == "exact":
        return _exact_gamma(g)
    if mode == "sampled":
        return _sampled_gamma(g, samples, seed)
    raise InvalidParams(f"mode must be 'exact' or 'sampled', got {mode!r}")


@dataclass(frozen=True)
class MsizeReport:
    alpha: Fraction
    violations: tuple[tuple[tuple[int, ...], int], ...]
    tightest: Fraction
    tightest_subset: tuple[int, ...]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_msize(g: Graph, alpha: Fraction | None = None) -> MsizeReport:
    """Check nu(B(S)) >= alpha |S| / 4 for every S with |S| <= n/2.

    ``tightest`` is the smallest ``nu / (alpha |S|)`` seen; the inequality says it is
    at least 1/4.
    """
    if g.n > MSIZE_CAP:
        raise TooLargeForExact(f"verify_msize supports n <= {MSIZE_CAP}, got n={g.n}")
    if alpha is None:
        alpha = vertex_expansion(g).value
    masks = g.nbr_masks
    half = g.n // 2
    violations = []
    tightest, tight_mask, checked = None, 0, 0
    for S in range(1, 1 << g.n):
        k = S.bit_count()
        if k > half:
            continue
        checked += 1
        nu = matching_number(S, masks)
        if 4 * nu < alpha * k:
            violations.append((_members(S), nu))
        ratio = Fraction(nu) / (alpha * k)
        if tightest is None or ratio < tightest:
            tightest, tight_mask = ratio, S
    return MsizeReport(alpha, tuple(violations), tightest, _members(tight_mask), checked)
