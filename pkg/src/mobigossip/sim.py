"""Round engine for the mobile telephone model.

A round runs four phases in order:

1. advertise  -- with b >= 1 each node publishes its informed bit as of the round start;
2. propose    -- each node sends at most one connection proposal, per strategy;
3. resolve    -- a node that did not propose accepts one incoming proposal
                 (all of them when the acceptance cap is unbounded);
4. communicate -- across every connection with exactly one informed end, the
                 uninformed end learns the rumour.

Randomness comes from one ``numpy.random.Generator`` per trial. Every phase draws
for its nodes in ascending ID order with a single vectorised call, so the stream
is consumed identically on every run with the same seed.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .dynamic import DynamicGraph, make_dynamic
from .errors import FrameMismatch, InvalidParams, InvalidSpec
from .graph import Graph
from .matching import bridge, max_matching

__all__ = [
    "Cap",
    "ProtocolSpec",
    "Resolution",
    "RoundOutcome",
    "SimState",
    "Strategy",
    "TrialRecord",
    "initial_state",
    "resolve_proposals",
    "run_round",
    "run_trial",
]


class Strategy(str, enum.Enum):
    PUSH = "push"
    RPULL = "rpull"
    PUSHPULL_ALT = "pushpull"
    PPUSH = "ppush"
    MATCH_GREEDY = "matchgreedy"


class Resolution(str, enum.Enum):
    RANDOM = "random"
    FIRST_BY_ID = "first_by_id"
    ADVERSARIAL_MIN = "adversarial_min"


class Cap(str, enum.Enum):
    ONE = "one"
    UNBOUNDED = "unbounded"


def _enum(cls, value):
    if isinstance(value, cls):
        return value
    try:
        return cls(str(value).lower())
    except ValueError:
        try:
            return cls[str(value).upper()]
        except KeyError:
            choices = ", ".join(m.value for m in cls)
            raise InvalidSpec(f"unknown {cls.__name__.lower()} {value!r}; expected one of {choices}") from None


@dataclass(frozen=True)
class ProtocolSpec:
    strategy: Strategy
    tag_bits: int | None = None
    resolution: Resolution = Resolution.RANDOM
    acceptance_cap: Cap = Cap.ONE

    def __post_init__(self):
        object.__setattr__(self, "strategy", _enum(Strategy, self.strategy))
        object.__setattr__(self, "resolution", _enum(Resolution, self.resolution))
        object.__setattr__(self, "acceptance_cap", _enum(Cap, self.acceptance_cap))
        b = self.tag_bits
        if b is None:
            b = 1 if self.strategy is Strategy.PPUSH else 0
            object.__setattr__(self, "tag_bits", b)
        if isinstance(b, bool) or not isinstance(b, int) or b < 0:
            raise InvalidSpec(f"tag width must be a non-negative integer, got {b!r}")
        if self.strategy is Strategy.PPUSH and b < 1:
            raise InvalidSpec("PPUSH needs at least one tag bit")
        if self.strategy in (Strategy.PUSH, Strategy.RPULL, Strategy.PUSHPULL_ALT) and b != 0:
            raise InvalidSpec(f"{self.strategy.name} runs without tags (b = 0)")


@dataclass(frozen=True)
class SimState:
    """State at the start of round ``t``: the informed flags and the frame for round ``t``."""

    t: int
    informed: np.ndarray
    frame: Graph

    @property
    def informed_count(self) -> int:
        return int(self.informed.sum())

    @property
    def uninformed(self) -> np.ndarray:
        return np.flatnonzero(~self.informed)


def initial_state(frame: Graph, source: int) -> SimState:
    if not 0 <= source < frame.n:
        raise InvalidParams(f"source {source} outside 0..{frame.n - 1}")
    informed = np.zeros(frame.n, dtype=bool)
    informed[source] = True
    return SimState(1, informed, frame)


@dataclass(frozen=True)
class RoundOutcome:
    proposals: np.ndarray      # (k, 2) rows (proposer, target), proposer ascending
    connections: np.ndarray    # (c, 2) rows (proposer, acceptor), proposer ascending
    newly_informed: np.ndarray  # ascending node IDs
    tags: np.ndarray | None = None

    def trace_line(self, t: int, informed_count: int) -> dict:
        return {
            "t": t,
            "informed": informed_count,
            "proposals": self.proposals.tolist(),
            "connections": self.connections.tolist(),
            "new": self.newly_informed.tolist(),
        }


_EMPTY_PAIRS = np.zeros((0, 2), dtype=np.int64)


def _pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return _EMPTY_PAIRS
    return np.stack([a, b], axis=1).astype(np.int64)


def _random_neighbor(g: Graph, nodes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    offs = rng.integers(0, g.degrees[nodes]) if nodes.size else nodes
    return g.indices[g.indptr[nodes] + offs].astype(np.int64)


def _propose_ppush(g: Graph, tags: np.ndarray, rng: np.random.Generator):
    """Informed nodes pick a uniformly random neighbour whose tag says uninformed."""
    marks = ~tags[g.indices]
    csum = np.zeros(len(marks) + 1, dtype=np.int64)
    np.cumsum(marks, out=csum[1:])
    count = csum[g.indptr[1:]] - csum[g.indptr[:-1]]
    proposers = np.flatnonzero(tags & (count > 0))
    if proposers.size == 0:
        return proposers, proposers
    pick = rng.integers(0, count[proposers])
    # position of the (pick+1)-th uninformed entry inside the proposer's slice
    pos = np.searchsorted(csum, csum[g.indptr[proposers]] + pick + 1, side="left") - 1
    return proposers, g.indices[pos].astype(np.int64)


def _resolve(P: np.ndarray, T: np.ndarray, policy: Resolution, cap: Cap,
             rng: np.random.Generator, informed: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pick accepted proposals. ``P``/``T`` must already exclude proposing targets."""
    if P.size == 0 or cap is Cap.UNBOUNDED:
        return P, T
    if policy is Resolution.ADVERSARIAL_MIN:
        productive = informed[P] != informed[T]
        order = np.lexsort((P, productive, T))
    else:
        order = np.lexsort((P, T))
    P, T = P[order], T[order]
    starts = np.flatnonzero(np.r_[True, T[1:] != T[:-1]])
    if policy is Resolution.RANDOM:
        counts = np.diff(np.r_[starts, len(T)])
        starts = starts + rng.integers(0, counts)
    return P[starts], T[starts]


def resolve_proposals(incoming: Mapping[int, Sequence[int]], policy: Resolution | str,
                      rng: np.random.Generator, informed: np.ndarray | Sequence[bool],
                      cap: Cap | str = Cap.ONE) -> list[tuple[int, int]]:
    """Accept proposals for each acceptor in ``incoming`` (acceptor -> proposer list).

    Returns ``(proposer, acceptor)`` pairs ordered by acceptor.
    RANDOM picks uniformly; FIRST_BY_ID takes the lowest proposer ID;
    ADVERSARIAL_MIN prefers a proposer whose informed status equals the acceptor's
    (an unproductive connection) and otherwise the lowest ID.
    """
    policy = _enum(Resolution, policy)
    cap = _enum(Cap, cap)
    informed = np.asarray(informed, dtype=bool)
    P = np.array([p for a in sorted(incoming) for p in incoming[a]], dtype=np.int64)
    T = np.array([a for a in sorted(incoming) for _ in incoming[a]], dtype=np.int64)
    P, T = _resolve(P, T, policy, cap, rng, informed)
    order = np.lexsort((P, T))
    return list(zip(P[order].tolist(), T[order].tolist()))


def _step_kind(spec: ProtocolSpec, t: int) -> Strategy:
    if spec.strategy is Strategy.PUSHPULL_ALT:
        return Strategy.PUSH if t % 2 == 1 else Strategy.RPULL
    return spec.strategy


def run_round(state: SimState, spec: ProtocolSpec,
              rng: np.random.Generator) -> tuple[SimState, RoundOutcome]:
    g = state.frame
    informed = state.informed
    if len(informed) != g.n:
        raise FrameMismatch(f"state tracks {len(informed)} nodes but frame has {g.n}")
    if not isinstance(spec, ProtocolSpec):
        raise InvalidSpec(f"expected ProtocolSpec, got {type(spec).__name__}")

    tags = informed.copy() if spec.tag_bits >= 1 else None
    kind = _step_kind(spec, state.t)

    if kind is Strategy.MATCH_GREEDY:
        if informed.all() or not informed.any():
            conns = _EMPTY_PAIRS
        else:
            m = max_matching(bridge(g, np.flatnonzero(informed).tolist()))
            conns = np.array(m.pairs, dtype=np.int64).reshape(-1, 2)
        proposals = conns
    else:
        live = g.degrees > 0
        if kind is Strategy.PUSH:
            proposers = np.flatnonzero(informed & live)
            targets = _random_neighbor(g, proposers, rng)
        elif kind is Strategy.RPULL:
            proposers = np.flatnonzero(~informed & live)
            targets = _random_neighbor(g, proposers, rng)
        else:
            proposers, targets = _propose_ppush(g, tags, rng)
        proposals = _pairs(proposers, targets)
        is_proposer = np.zeros(g.n, dtype=bool)
        is_proposer[proposers] = True
        keep = ~is_proposer[targets]
        P, T = _resolve(proposers[keep], targets[keep], spec.resolution,
                        spec.acceptance_cap, rng, informed)
        order = np.argsort(P, kind="stable")
        conns = _pairs(P[order], T[order])

    if conns.size:
        a, b = conns[:, 0], conns[:, 1]
        productive = informed[a] != informed[b]
        learners = np.where(informed[a], b, a)[productive]
        newly = np.unique(learners)
    else:
        newly = np.zeros(0, dtype=np.int64)
    after = informed.copy()
    after[newly] = True
    return SimState(state.t + 1, after, g), RoundOutcome(proposals, conns, newly, tags)


@dataclass
class TrialRecord:
    """Outcome of one trial. ``counts[t]`` is |S| after ``t`` rounds (``counts[0] == 1``)."""

    seed: int
    rounds: int
    completed: bool
    counts: list[int]
    n: int
    trace: list[dict] | None = field(default=None, repr=False)


def default_max_rounds(n: int) -> int:
    return 64 * n


def run_trial(dg: DynamicGraph | Graph, source: int, spec: ProtocolSpec, seed: int,
              max_rounds: int | None = None, trace: bool = False) -> TrialRecord:
    """Run rounds until everyone is informed or ``max_rounds`` pass.

    A timeout is recorded with ``completed=False`` and ``rounds=max_rounds``.
    """
    if isinstance(dg, Graph):
        dg = make_dynamic(dg, model="static")
    n = dg.n
    if max_rounds is None:
        max_rounds = default_max_rounds(n)
    if max_rounds < 1:
        raise InvalidParams("max_rounds must be >= 1")
    rng = np.random.default_rng(seed)
    state = initial_state(dg.frame(1), source)
    counts = [1]
    lines: list[dict] | None = [] if trace else None
    while counts[-1] < n and state.t <= max_rounds:
        t = state.t
        state = SimState(t, state.informed, dg.frame(t))
        state, outcome = run_round(state, spec, rng)
        counts.append(counts[-1] + len(outcome.newly_informed))
        if lines is not None:
            lines.append(outcome.trace_line(t, counts[-1]))
    completed = counts[-1] == n
    return TrialRecord(seed, len(counts) - 1, completed, counts, n, lines)
