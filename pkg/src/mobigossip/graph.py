"""Static undirected graphs with dense integer vertex IDs.

Adjacency is held in CSR form (``indptr``/``indices`` numpy arrays) so that the
simulator can vectorise per-round work on graphs with millions of edges. Python-level
views (``adjacency``, ``edges``, ``nbr_masks``) are derived lazily.
"""
from __future__ import annotations

from collections import Counter
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraph, InvalidEdge

__all__ = ["Graph", "make_graph", "gather_neighbors"]


def gather_neighbors(indptr: np.ndarray, indices: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Concatenate the adjacency slices of ``nodes`` (in the given order)."""
    starts = indptr[nodes]
    lengths = indptr[nodes + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return indices[:0]
    offsets = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
    return indices[offsets + np.arange(total)]


class Graph:
    """Connected, simple, undirected graph on vertices ``0..n-1``.

    Build one with :func:`make_graph` or a generator; the constructor trusts its input.
    Instances are immutable and safe to share between trials.
    """

    __slots__ = ("n", "indptr", "indices", "__dict__")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int32)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    # -- structure -------------------------------------------------------

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.flags.writeable = False
        return d

    @cached_property
    def Delta(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @cached_property
    def delta(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in self.neighbors(u)) for u in range(self.n))

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return list(zip(src[keep].tolist(), self.indices[keep].tolist()))

    @cached_property
    def nbr_masks(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as a Python-int bitmask."""
        masks = []
        for u in range(self.n):
            m = 0
            for v in self.neighbors(u).tolist():
                m |= 1 << v
            masks.append(m)
        return tuple(masks)

    def degree_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees.tolist()).items()))

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def relabel(self, perm: np.ndarray) -> "Graph":
        """Return the graph with old vertex ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        deg_new = self.degrees[inv]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg_new, out=indptr[1:])
        vals = perm[gather_neighbors(self.indptr, self.indices, inv)]
        owner = np.repeat(np.arange(self.n, dtype=np.int64), deg_new)
        vals = np.sort(owner * self.n + vals) - owner * self.n
        return Graph(self.n, indptr, vals)

    def is_connected(self) -> bool:
        return _is_connected(self.n, self.indptr, self.indices)

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash((self.n, self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges}, Delta={self.Delta}, delta={self.delta})"


def _is_connected(n: int, indptr: np.ndarray, indices: np.ndarray) -> bool:
    if n <= 1:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nb = gather_neighbors(indptr, indices, frontier)
        nb = np.unique(nb[~seen[nb]])
        seen[nb] = True
        frontier = nb.astype(np.int64)
    return bool(seen.all())


def make_graph(n: int, edges: Iterable[Sequence[int]] | np.ndarray) -> Graph:
    """Build a canonical graph from an edge list; duplicates and orientation are folded.

    Raises InvalidEdge on out-of-range endpoints or self-loops and DisconnectedGraph
    when the result has more than one component.
    """
    if n < 1:
        raise InvalidEdge(f"node count must be positive, got {n}")
    arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidEdge("edges must be pairs")
    bad = (arr < 0) | (arr >= n)
    if bad.any():
        u, v = arr[bad.any(axis=1)][0]
        raise InvalidEdge(f"edge ({u}, {v}) out of range for n={n}")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        u = arr[loops][0, 0]
        raise InvalidEdge(f"self-loop at node {u}")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    keys = np.unique(lo * n + hi)
    lo, hi = keys // n, keys % n
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.sort(src * n + dst)
    src, dst = order // n, order % n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    if not _is_connected(n, indptr, dst):
        raise DisconnectedGraph(f"graph on {n} nodes with {len(keys)} edges is disconnected")
    return Graph(n, indptr, dst)
