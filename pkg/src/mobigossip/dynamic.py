"""tau-stable dynamic graphs over a fixed vertex set.

Round ``r`` (1-based) falls in stability interval ``(r - 1) // tau``; every frame inside
one interval is the same graph. ``UNBOUNDED`` stands for tau = infinity.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DisconnectedFrame, InvalidParams, StabilityViolation
from .graph import Graph

__all__ = ["UNBOUNDED", "MODELS", "DynamicGraph", "Tau", "make_dynamic", "parse_tau"]


class _Unbounded(enum.Enum):
    UNBOUNDED = "inf"

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __str__(self) -> str:
        return "inf"


UNBOUNDED = _Unbounded.UNBOUNDED
Tau = Union[int, _Unbounded]

MODELS = ("static", "permute", "explicit")


def parse_tau(value: object) -> Tau:
    if value is UNBOUNDED or value in ("inf", "unbounded", "∞"):
        return UNBOUNDED
    tau = None
    if isinstance(value, str) and value.strip().isdigit():
        tau = int(value)
    elif isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        tau = int(value)
    if tau is None or tau < 1:
        raise InvalidParams(f"tau must be a positive integer or 'inf', got {value!r}")
    return tau


@dataclass(eq=False)
class DynamicGraph:
    """Sequence of frames ``G_1, G_2, ...``; query with :meth:`frame`.

    Frames past the end of an explicit list repeat the last one.
    """

    n: int
    tau: Tau
    model: str
    seed: int = 0
    base: Graph | None = None
    frames: tuple[Graph, ...] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def interval(self, r: int) -> int:
        if r < 1:
            raise InvalidParams(f"rounds are 1-based, got {r}")
        return 0 if self.tau is UNBOUNDED else (r - 1) // self.tau

    def permutation(self, interval: int) -> np.ndarray:
        return np.random.default_rng([self.seed, interval]).permutation(self.n)

    def frame(self, r: int) -> Graph:
        if self.model == "static":
            self.interval(r)
            return self.base
        if self.model == "explicit":
            self.interval(r)
            return self.frames[min(r, len(self.frames)) - 1]
        k = self.interval(r)
        hit = self._cache.get("frame")
        if hit is not None and hit[0] == k:
            return hit[1]
        g = self.base.relabel(self.permutation(k))
        self._cache["frame"] = (k, g)
        return g

    @property
    def is_static(self) -> bool:
        return self.model == "static"

    def distinct_frames(self, horizon: int) -> list[Graph]:
        """Frames of rounds ``1..horizon`` with consecutive repeats collapsed."""
        out: list[Graph] = []
        for r in range(1, horizon + 1):
            g = self.frame(r)
            if not out or out[-1] != g:
                out.append(g)
        return out

    def check_stability(self, horizon: int) -> bool:
        """True if every length-tau interval within ``1..horizon`` holds a single frame."""
        prev_k, prev_g = None, None
        for r in range(1, horizon + 1):
            k, g = self.interval(r), self.frame(r)
            if g.n != self.n or not g.is_connected():
                return False
            if k == prev_k and g != prev_g:
                return False
            prev_k, prev_g = k, g
        return True


def _validate_explicit(frames: Sequence[Graph], tau: Tau) -> None:
    n = frames[0].n
    for i, g in enumerate(frames):
        if g.n != n:
            raise InvalidParams(f"frame {i + 1} has {g.n} nodes, expected {n}")
        if not g.is_connected():
            raise DisconnectedFrame(f"frame {i + 1} is disconnected")
    for r in range(2, len(frames) + 1):
        same_interval = tau is UNBOUNDED or (r - 1) // tau == (r - 2) // tau
        if same_interval and frames[r - 1] != frames[r - 2]:
            raise StabilityViolation(f"frame changes at round {r} inside a stability interval (tau={tau})")


def make_dynamic(base: Graph | None, tau: Tau = UNBOUNDED, model: str = "permute", seed: int = 0,
                 frames: Sequence[Graph] | None = None) -> DynamicGraph:
    """Wrap ``base`` (or an explicit ``frames`` list) as a tau-stable dynamic graph.

    ``permute`` draws a fresh uniform relabelling of ``base`` for every interval,
    which keeps every expansion/degree quantity of the frames equal to the base's.
    """
    tau = parse_tau(tau)
    if model not in MODELS:
        raise InvalidParams(f"unknown dynamics model {model!r}; expected one of {', '.join(MODELS)}")
    if model == "explicit":
        if not frames:
            raise InvalidParams("explicit dynamics needs a non-empty frame list")
        frames = tuple(frames)
        _validate_explicit(frames, tau)
        return DynamicGraph(frames[0].n, tau, model, seed, base, frames)
    if base is None:
        raise InvalidParams(f"{model} dynamics needs a base graph")
    if not base.is_connected():
        raise DisconnectedFrame("base graph is disconnected")
    return DynamicGraph(base.n, tau, model, seed, base, None)
