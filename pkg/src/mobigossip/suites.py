"""Graph suites used by the exhaustive and randomised checks."""
from __future__ import annotations

import itertools
from functools import lru_cache
from importlib import resources
from typing import Iterator

import numpy as np

from .generators import gen_family
from .graph import Graph, make_graph

__all__ = ["connected_graphs", "decode_edge_code", "random_connected_suite"]


def decode_edge_code(n: int, code: int) -> Graph:
    """Inverse of the catalogue encoding: bit k marks the k-th pair (u, v), u < v."""
    pairs = itertools.combinations(range(n), 2)
    return make_graph(n, [e for k, e in enumerate(pairs) if code >> k & 1])


@lru_cache(maxsize=1)
def _catalogue() -> tuple[tuple[int, int], ...]:
    text = resources.files("mobigossip.data").joinpath("connected_small.txt").read_text()
    rows = []
    for line in text.splitlines():
        n, code = line.split()
        rows.append((int(n), int(code, 16)))
    return tuple(rows)


def connected_graphs(n_max: int = 8, n_min: int = 2) -> Iterator[Graph]:
    """Every connected graph on ``n_min..n_max`` vertices, one per isomorphism class."""
    if n_max > 8:
        raise ValueError("the shipped catalogue stops at n = 8")
    for n, code in _catalogue():
        if n_min <= n <= n_max:
            yield decode_edge_code(n, code)


def random_connected_suite(count: int = 500, n_max: int = 12, seed: int = 0,
                           n_min: int = 2) -> list[Graph]:
    """Seeded G(n, p) graphs conditioned on connectivity, n uniform in ``n_min..n_max``,
    p uniform in [0.2, 0.8]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        p = float(rng.uniform(0.2, 0.8))
        out.append(gen_family("gnp", n, p=p, seed=int(rng.integers(2**32))))
    return out
