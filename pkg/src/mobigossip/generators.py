"""Graph families with fixed, documented vertex layouts.

Layouts
-------
gstar(delta, Delta)
    centres ``0..delta-1`` (a clique), points ``delta..delta+Delta-1``.
badgraph(n)
    left clique ``L = 0..n/2-1``, independent right side ``R = n/2..n-1``,
    matching edges ``(i, i + n/2)``, hub ``L* = 0..floor(sqrt n)-1`` joined to all of R.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import GenerationFailed, InvalidParams
from .graph import Graph, _is_connected, make_graph

__all__ = [
    "FAMILIES",
    "gen_badgraph",
    "gen_family",
    "gen_gstar",
    "hub_size",
]

GNP_MAX_RETRIES = 100


def _clique(nodes: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(nodes), k=1)
    return np.stack([nodes[i], nodes[j]], axis=1)


def gen_gstar(delta: int, Delta: int) -> Graph:
    """Generalised star: a ``delta``-clique of centres, ``Delta`` points each joined to every centre."""
    if not (1 <= delta <= Delta):
        raise InvalidParams(f"need 1 <= delta <= Delta, got delta={delta}, Delta={Delta}")
    centres = np.arange(delta)
    points = np.arange(delta, delta + Delta)
    spokes = np.stack(np.meshgrid(centres, points, indexing="ij"), axis=-1).reshape(-1, 2)
    return make_graph(delta + Delta, np.concatenate([_clique(centres), spokes]))


def hub_size(n: int) -> int:
    return math.isqrt(n)


def gen_badgraph(n: int) -> Graph:
    """Clique/independent-set halves joined by a perfect matching plus a sqrt(n) hub."""
    if n < 16 or n % 2:
        raise InvalidParams(f"badgraph needs even n >= 16, got {n}")
    half = n // 2
    left = np.arange(half)
    right = np.arange(half, n)
    matching = np.stack([left, left + half], axis=1)
    hub = np.arange(hub_size(n))
    full = np.stack(np.meshgrid(hub, right, indexing="ij"), axis=-1).reshape(-1, 2)
    return make_graph(n, np.concatenate([_clique(left), matching, full]))


def _complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParams("complete graph needs n >= 1")
    return make_graph(n, _clique(np.arange(n)))


def _path(n: int) -> Graph:
    if n < 1:
        raise InvalidParams("path needs n >= 1")
    u = np.arange(n - 1)
    return make_graph(n, np.stack([u, u + 1], axis=1))


def _cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParams("cycle needs n >= 3")
    u = np.arange(n)
    return make_graph(n, np.stack([u, (u + 1) % n], axis=1))


def _star(n: int) -> Graph:
    if n < 2:
        raise InvalidParams("star needs n >= 2")
    return gen_gstar(1, n - 1)


def _hypercube(n: int) -> Graph:
    dim = n.bit_length() - 1
    if n < 2 or 1 << dim != n:
        raise InvalidParams(f"hypercube needs n a power of two >= 2, got {n}")
    u = np.arange(n)
    pairs = [np.stack([u, u ^ (1 << b)], axis=1) for b in range(dim)]
    return make_graph(n, np.concatenate(pairs))


def _gnp(n: int, p: float, seed: int) -> Graph:
    if n < 1 or not (0.0 <= p <= 1.0):
        raise InvalidParams(f"gnp needs n >= 1 and p in [0, 1], got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    i, j = np.triu_indices(n, k=1)
    for _ in range(GNP_MAX_RETRIES):
        keep = rng.random(len(i)) < p
        edges = np.stack([i[keep], j[keep]], axis=1)
        # cheap connectivity probe before canonicalising
        g = _try_connected(n, edges)
        if g is not None:
            return g
    raise GenerationFailed(f"G({n}, {p}) stayed disconnected after {GNP_MAX_RETRIES} draws")


def _try_connected(n: int, edges: np.ndarray) -> Graph | None:
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.argsort(src * n + dst, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    if not _is_connected(n, indptr, dst[order]):
        return None
    return make_graph(n, edges)


FAMILIES = ("badgraph", "complete", "cycle", "gnp", "gstar", "hypercube", "path", "star")


def gen_family(name: str, n: int | None = None, *, delta: int | None = None,
               Delta: int | None = None, p: float | None = None, seed: int = 0) -> Graph:
    """Dispatch to a named family. ``gstar`` takes ``delta``/``Delta``; ``gnp`` takes ``p`` and ``seed``."""
    if name == "gstar":
        if delta is None or Delta is None:
            raise InvalidParams("gstar needs delta and Delta")
        return gen_gstar(delta, Delta)
    if n is None:
        raise InvalidParams(f"family {name!r} needs n")
    if name == "badgraph":
        return gen_badgraph(n)
    if name == "complete":
        return _complete(n)
    if name == "cycle":
        return _cycle(n)
    if name == "path":
        return _path(n)
    if name == "star":
        return _star(n)
    if name == "hypercube":
        return _hypercube(n)
    if name == "gnp":
        if p is None:
            raise InvalidParams("gnp needs p")
        return _gnp(n, p, seed)
    raise InvalidParams(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
