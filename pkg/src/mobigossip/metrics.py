"""Boundary, volume, cut, vertex expansion and conductance.

Exact minima enumerate every subset as a bitmask. Per-subset tables are filled by
doubling: the entries for masks in ``[2**i, 2**(i+1))`` are the entries for
``[0, 2**i)`` with vertex ``i`` added. Values are kept as integer numerator and
denominator; floats are used only to shortlist candidate minima.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .dynamic import DynamicGraph
from .errors import EmptySubset, FullSubset, InvalidParams, TooLargeForExact
from .graph import Graph, gather_neighbors

__all__ = [
    "EXACT_CAP",
    "CutReport",
    "ExpansionResult",
    "conductance",
    "cut_report",
    "degree_stats",
    "dynamic_metrics",
    "vertex_expansion",
]

EXACT_CAP = 24
DEFAULT_SAMPLES = 1000


@dataclass(frozen=True)
class CutReport:
    subset: tuple[int, ...]
    boundary_size: int
    cut_edges: int
    vol_S: int

    @property
    def alpha_S(self) -> Fraction:
        return Fraction(self.boundary_size, len(self.subset))

    @property
    def phi_S(self) -> Fraction:
        return Fraction(self.cut_edges, self.vol_S)


@dataclass(frozen=True)
class ExpansionResult:
    """Minimum of a subset ratio plus the subset attaining it.

    ``mode`` is ``"exact"`` or ``"sampled(k)"``; sampled values only bound the true
    minimum from above. ``frame`` names the round whose frame held the witness when
    the result comes from a dynamic graph.
    """

    value: Fraction
    witness: tuple[int, ...]
    mode: str
    frame: int | None = None

    @property
    def estimate(self) -> bool:
        return self.mode != "exact"

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {
            "num": self.value.numerator,
            "den": self.value.denominator,
            "witness": list(self.witness),
            "mode": self.mode,
        }


def _check_subset(g: Graph, S: Iterable[int]) -> np.ndarray:
    members = sorted(set(int(v) for v in S))
    if not members:
        raise EmptySubset("subset must be non-empty")
    if members[0] < 0 or members[-1] >= g.n:
        raise InvalidParams(f"subset has nodes outside 0..{g.n - 1}")
    if len(members) == g.n:
        raise FullSubset("subset must be a proper subset of V")
    return np.asarray(members, dtype=np.int64)


def cut_report(g: Graph, S: Iterable[int]) -> CutReport:
    nodes = _check_subset(g, S)
    inside = np.zeros(g.n, dtype=bool)
    inside[nodes] = True
    nb = gather_neighbors(g.indptr, g.indices, nodes)
    outward = nb[~inside[nb]]
    return CutReport(
        subset=tuple(nodes.tolist()),
        boundary_size=int(np.unique(outward).size),
        cut_edges=int(outward.size),
        vol_S=int(g.degrees[nodes].sum()),
    )


def degree_stats(g: Graph) -> tuple[int, int, dict[int, int]]:
    return g.Delta, g.delta, g.degree_histogram()


# -- exact enumeration ------------------------------------------------------

def _require_exact(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise TooLargeForExact(f"exact mode supports n <= {cap}, got n={g.n}")
    if g.n < 2:
        raise InvalidParams("expansion is undefined for a single vertex")


def _mask_dtype(n: int):
    return np.uint32 if n <= 32 else np.uint64


def _bits(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x)


def subset_tables(g: Graph, *, volumes: bool = False) -> dict[str, np.ndarray]:
    """Per-mask arrays: ``size``, ``nbr`` (union of neighbourhoods) and, optionally,
    ``vol`` and ``internal`` (edges with both ends in the subset)."""
    n = g.n
    dt = _mask_dtype(n)
    total = 1 << n
    masks = [dt(m) for m in g.nbr_masks]
    deg = g.degrees.tolist()
    size = np.zeros(total, dtype=np.int16)
    nbr = np.zeros(total, dtype=dt)
    vol = internal = None
    if volumes:
        vol = np.zeros(total, dtype=np.int32)
        internal = np.zeros(total, dtype=np.int32)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        size[lo:hi] = size[:lo] + 1
        np.bitwise_or(nbr[:lo], masks[i], out=nbr[lo:hi])
        if volumes:
            vol[lo:hi] = vol[:lo] + deg[i]
            inner = _bits(np.arange(lo, dtype=dt) & masks[i])
            internal[lo:hi] = internal[:lo] + inner
    out = {"size": size, "nbr": nbr}
    if volumes:
        out["vol"] = vol
        out["internal"] = internal
    return out


def boundary_sizes(tables: dict[str, np.ndarray]) -> np.ndarray:
    nbr = tables["nbr"]
    return _bits(nbr & ~np.arange(len(nbr), dtype=nbr.dtype)).astype(np.int32)


def exact_min_ratio(num: np.ndarray, den: np.ndarray, admissible: np.ndarray) -> tuple[Fraction, int]:
    """Exact minimum of ``num/den`` over admissible masks; ties go to the smallest mask."""
    idx = np.flatnonzero(admissible)
    if idx.size == 0:
        raise InvalidParams("no admissible subset")
    a = num[idx].astype(np.int64)
    b = den[idx].astype(np.int64)
    ratio = a / b
    lead = int(np.argmin(ratio))
    near = np.flatnonzero(ratio <= ratio[lead] + 1e-9)
    a, b = a[near], b[near]
    best = int(np.flatnonzero(near == lead)[0])
    while True:
        better = np.flatnonzero(a * b[best] < a[best] * b)
        if better.size == 0:
            break
        best = int(better[np.argmin(a[better] / b[better])])
    ties = np.flatnonzero(a * b[best] == a[best] * b)
    mask = int(idx[near[ties[0]]])
    return Fraction(int(a[best]), int(b[best])), mask


def _members(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _exact_alpha(g: Graph) -> ExpansionResult:
    _require_exact(g, EXACT_CAP)
    t = subset_tables(g)
    size = t["size"]
    admissible = (size > 0) & (2 * size <= g.n)
    value, mask = exact_min_ratio(boundary_sizes(t), size, admissible)
    return ExpansionResult(value, _members(mask), "exact")


def _exact_phi(g: Graph) -> ExpansionResult:
    _require_exact(g, EXACT_CAP)
    t = subset_tables(g, volumes=True)
    vol = t["vol"]
    total = int(g.degrees.sum())
    admissible = (vol > 0) & (2 * vol <= total)
    cut = vol - 2 * t["internal"]
    value, mask = exact_min_ratio(cut, vol, admissible)
    return ExpansionResult(value, _members(mask), "exact")


# -- sampling --------------------------------------------------------------

def random_subsets(n: int, k: int, seed: int, max_size: int):
    """Yield ``k`` random subsets with size uniform in ``1..max_size``."""
    rng = np.random.default_rng(seed)
    for _ in range(k):
        s = int(rng.integers(1, max_size + 1))
        yield np.sort(rng.choice(n, size=s, replace=False))


def _sampled(g: Graph, k: int, seed: int, ratio) -> ExpansionResult:
    if k < 1:
        raise InvalidParams("need at least one sample")
    if g.n < 2:
        raise InvalidParams("expansion is undefined for a single vertex")
    best = None
    for S in random_subsets(g.n, k, seed, max(1, g.n // 2)):
        val, witness = ratio(S)
        if best is None or val < best[0]:
            best = (val, witness)
    return ExpansionResult(best[0], best[1], f"sampled({k})")


def _alpha_of(g: Graph):
    def ratio(S):
        rep = cut_report(g, S.tolist())
        return rep.alpha_S, rep.subset
    return ratio


def _phi_of(g: Graph):
    total = int(g.degrees.sum())

    def ratio(S):
        if 2 * int(g.degrees[S].sum()) > total:
            inside = np.zeros(g.n, dtype=bool)
            inside[S] = True
            S = np.flatnonzero(~inside)
        rep = cut_report(g, S.tolist())
        return rep.phi_S, rep.subset
    return ratio


def vertex_expansion(g: Graph, mode: str = "exact", samples: int = DEFAULT_SAMPLES,
                     seed: int = 0) -> ExpansionResult:
    """alpha = min |boundary(S)| / |S| over 0 < |S| <= n/2."""
    if mode == "exact":
        return _exact_alpha(g)
    if mode == "sampled":
        return _sampled(g, samples, seed, _alpha_of(g))
    raise InvalidParams(f"mode must be 'exact' or 'sampled', got {mode!r}")


def conductance(g: Graph, mode: str = "exact", samples: int = DEFAULT_SAMPLES,
                seed: int = 0) -> ExpansionResult:
    """phi = min cut(S, V-S) / vol(S) over 0 < vol(S) <= vol(V)/2."""
    if mode == "exact":
        return _exact_phi(g)
    if mode == "sampled":
        return _sampled(g, samples, seed, _phi_of(g))
    raise InvalidParams(f"mode must be 'exact' or 'sampled', got {mode!r}")


def dynamic_metrics(dg: DynamicGraph, horizon: int, mode: str = "exact",
                    samples: int = DEFAULT_SAMPLES, seed: int = 0) -> dict:
    """Minimum alpha and phi, and extreme degrees, over the frames of rounds ``1..horizon``.

    Static and permuted dynamics have every frame isomorphic to the base, so the
    base graph's values are returned without touching the frames.
    """
    if horizon < 1:
        raise InvalidParams("horizon must be >= 1")
    if dg.model in ("static", "permute"):
        frames = [(1, dg.base)]
    else:
        frames = []
        for r in range(1, horizon + 1):
            g = dg.frame(r)
            if all(g != h for _, h in frames):
                frames.append((r, g))
    alpha = phi = None
    for r, g in frames:
        a = vertex_expansion(g, mode, samples, seed)
        p = conductance(g, mode, samples, seed)
        if alpha is None or a.value < alpha.value:
            alpha = ExpansionResult(a.value, a.witness, a.mode, r)
        if phi is None or p.value < phi.value:
            phi = ExpansionResult(p.value, p.witness, p.mode, r)
    return {
        "alpha": alpha,
        "phi": phi,
        "Delta": max(g.Delta for _, g in frames),
        "delta": min(g.delta for _, g in frames),
    }
