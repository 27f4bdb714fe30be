"""Monte Carlo harness, summary statistics, phase auditing and power-law fits."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dynamic import UNBOUNDED, DynamicGraph, Tau, make_dynamic, parse_tau
from .errors import InvalidParams, TraceIncomplete
from .generators import gen_family
from .graph import Graph
from .sim import ProtocolSpec, TrialRecord, default_max_rounds, run_trial

__all__ = [
    "CSV_FIELDS",
    "ExperimentSpec",
    "PhaseReport",
    "PointResult",
    "audit_phases",
    "f_tau",
    "fit_power_law",
    "rows_to_csv",
    "run_experiment",
    "run_trials",
    "summarize",
]

CSV_FIELDS = ("family", "n", "tau", "protocol", "b", "resolution", "seed", "rounds", "completed")


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep over graph sizes. For ``gstar`` each size is the point count Delta."""

    family: str
    sizes: tuple[int, ...]
    protocol: ProtocolSpec
    trials: int = 20
    seed_base: int = 0
    max_rounds: int | None = None
    tau: Tau = UNBOUNDED
    dynamics: str = "static"
    source: int = 0
    delta: int | None = None
    p: float | None = None
    graph_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        if not self.sizes:
            raise InvalidParams("size list is empty")
        object.__setattr__(self, "tau", parse_tau(self.tau))

    def graph(self, size: int) -> Graph:
        if self.family == "gstar":
            return gen_family("gstar", delta=self.delta or 1, Delta=size)
        return gen_family(self.family, size, p=self.p, seed=self.graph_seed)


@dataclass
class PointResult:
    family: str
    n: int
    records: list[TrialRecord]
    summary: dict = field(default_factory=dict)


def _one_trial(args) -> TrialRecord:
    base, tau, model, source, spec, seed, max_rounds, trace = args
    if isinstance(base, DynamicGraph):
        dg = base
    else:
        dg = make_dynamic(base, tau, model, seed=seed)
    return run_trial(dg, source, spec, seed, max_rounds, trace=trace)


def run_trials(graph: Graph | DynamicGraph, spec: ProtocolSpec, trials: int, seed_base: int = 0, *,
               tau: Tau = UNBOUNDED, dynamics: str = "static", source: int = 0,
               max_rounds: int | None = None, jobs: int = 1,
               trace: bool = False) -> list[TrialRecord]:
    """Trial ``i`` uses seed ``seed_base + i`` for both the protocol and the dynamics.

    A ``DynamicGraph`` argument is used as given (its own seed fixes the frames).
    Results come back in trial order whatever ``jobs`` is.
    """
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    tasks = [(graph, tau, dynamics, source, spec, seed_base + i, max_rounds, trace)
             for i in range(trials)]
    if jobs <= 1:
        return [_one_trial(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_one_trial, tasks))


def summarize(records: Sequence[TrialRecord]) -> dict:
    rounds = np.array([r.rounds for r in records], dtype=float)
    return {
        "n": records[0].n,
        "median": float(np.median(rounds)),
        "p90": float(np.percentile(rounds, 90)),
        "mean": float(rounds.mean()),
        "min": int(rounds.min()),
        "max": int(rounds.max()),
        "timeouts": sum(not r.completed for r in records),
        "completion_rate": sum(r.completed for r in records) / len(records),
    }


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[PointResult]:
    out = []
    for size in spec.sizes:
        g = spec.graph(size)
        max_rounds = spec.max_rounds or default_max_rounds(g.n)
        records = run_trials(g, spec.protocol, spec.trials, spec.seed_base, tau=spec.tau,
                             dynamics=spec.dynamics, source=spec.source,
                             max_rounds=max_rounds, jobs=jobs)
        out.append(PointResult(spec.family, g.n, records, summarize(records)))
    return out


def csv_rows(family: str, tau: Tau, protocol: ProtocolSpec,
             records: Iterable[TrialRecord]) -> list[dict]:
    return [
        {
            "family": family,
            "n": r.n,
            "tau": str(tau),
            "protocol": protocol.strategy.value,
            "b": protocol.tag_bits,
            "resolution": protocol.resolution.value,
            "seed": r.seed,
            "rounds": r.rounds,
            "completed": int(r.completed),
        }
        for r in records
    ]


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# -- phase auditing ---------------------------------------------------------

def f_tau(tau: int, Delta: int, n: int) -> float:
    """Per-phase matching approximation factor tau * Delta**(1/tau) * log2(n)."""
    return tau * Delta ** (1.0 / tau) * math.log2(n)


@dataclass(frozen=True)
class PhaseReport:
    tau: int
    f_tau: float
    flags: tuple[bool, ...]

    @property
    def good(self) -> int:
        return sum(self.flags)

    @property
    def fraction_good(self) -> float:
        return self.good / len(self.flags)


def _trajectory(trace) -> list[int]:
    if isinstance(trace, TrialRecord):
        return list(trace.counts)
    trace = list(trace)
    if trace and isinstance(trace[0], dict):
        return [1] + [int(line["informed"]) for line in trace]
    return [int(c) for c in trace]


def audit_phases(trace, tau: int, Delta: int, n: int, alpha: Fraction | float) -> PhaseReport:
    """Classify each length-``tau`` phase of a run as good or bad.

    ``trace`` is a TrialRecord, a list of per-round trace dicts, or the informed-count
    trajectory ``[|S| after 0 rounds, after 1 round, ...]``. A finished run is padded
    with ``n`` so its last partial phase counts; an unfinished run keeps whole phases only.
    With ``eps = alpha / (4 f(tau))``, a phase starting from ``s`` informed nodes is good
    when ``s <= n/2`` and it ends with at least ``(1 + eps) s``, or when ``s > n/2`` and the
    uninformed count ends at most ``(1 - eps)`` times its starting value.
    """
    if tau is UNBOUNDED or not isinstance(tau, int) or tau < 1:
        raise InvalidParams("phase audit needs a finite tau >= 1")
    counts = _trajectory(trace)
    rounds = len(counts) - 1
    finished = counts[-1] >= n
    phases = -(-rounds // tau) if finished else rounds // tau
    if phases < 1:
        raise TraceIncomplete(f"trace covers {rounds} rounds, shorter than one phase of {tau}")
    counts = counts + [n] * (phases * tau - rounds)
    f = f_tau(tau, Delta, n)
    eps = float(alpha) / (4 * f)
    slack = 1e-12 * n
    flags = []
    for t in range(phases):
        s0, s1 = counts[t * tau], counts[(t + 1) * tau]
        if 2 * s0 <= n:
            flags.append(s1 + slack >= (1 + eps) * s0)
        else:
            flags.append((n - s1) <= (1 - eps) * (n - s0) + slack)
    return PhaseReport(tau, f, tuple(flags))


def fit_power_law(sizes: Sequence[float], medians: Sequence[float]) -> float:
    """Least-squares slope of log(median) against log(size)."""
    x = np.asarray(sizes, dtype=float)
    y = np.asarray(medians, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise InvalidParams("need at least two (size, median) points")
    if (x <= 0).any() or (y <= 0).any():
        raise InvalidParams("sizes and medians must be positive")
    if np.ptp(x) == 0:
        raise InvalidParams("sizes must not all be equal")
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)
