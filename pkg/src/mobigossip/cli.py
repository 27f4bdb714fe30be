"""``mgs`` command line: gen, analyze, simulate, sweep.

Exit codes: 0 success, 1 runtime failure, 2 invalid usage or parameters.
Every subcommand accepts ``--config FILE``, a JSON object whose keys are flag
names (dashes or underscores); explicit flags override it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import graphio
from .dynamic import UNBOUNDED, DynamicGraph, make_dynamic, parse_tau
from .errors import (
    GossipError,
    InvalidParams,
    InvalidSpec,
    TooLargeForExact,
)
from .experiments import ExperimentSpec, csv_rows, fit_power_law, rows_to_csv, run_experiment, run_trials
from .generators import FAMILIES, gen_family
from .graph import Graph
from .matching import GAMMA_EXACT_CAP, gamma
from .metrics import EXACT_CAP, conductance, dynamic_metrics, vertex_expansion
from .sim import Cap, ProtocolSpec, Resolution, Strategy

USAGE_ERRORS = (InvalidParams, InvalidSpec, TooLargeForExact)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("MGS_JOBS", "1")))
    except ValueError:
        return 1


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _sizes(text: str) -> list[int]:
    parts = [p for p in text.split(",") if p.strip()]
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _add_protocol_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", required=True, choices=[s.value for s in Strategy])
    p.add_argument("--b", type=int, default=None, help="tag width (default: 1 for ppush, else 0)")
    p.add_argument("--resolution", default="random", choices=[r.value for r in Resolution])
    p.add_argument("--cap", default="one", choices=[c.value for c in Cap])
    p.add_argument("--tau", default=None, help="stability: positive integer or 'inf'")
    p.add_argument("--dynamics", default=None, choices=["static", "permute"],
                   help="default: permute when --tau is given, else static")
    p.add_argument("--trials", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--max-rounds", type=_positive, default=None)
    p.add_argument("--jobs", type=_positive, default=_default_jobs())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mgs", description="Rumor spreading in the mobile telephone model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("--config")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--Delta", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tau", default=None, help="write a dynamic-graph file with this stability")
    g.add_argument("--dynamics", default=None, choices=["static", "permute"])
    g.add_argument("--out")

    a = sub.add_parser("analyze", help="expansion, conductance and gamma of a graph")
    a.add_argument("--config")
    a.add_argument("graph")
    a.add_argument("--alpha", action="store_true")
    a.add_argument("--phi", action="store_true")
    a.add_argument("--gamma", action="store_true")
    mode = a.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sample", type=_positive, metavar="K")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--horizon", type=_positive, default=1, help="rounds inspected for a dynamic graph")

    s = sub.add_parser("simulate", help="run trials of a protocol on a graph file")
    s.add_argument("--config")
    s.add_argument("graph")
    _add_protocol_flags(s)
    s.add_argument("--trace")
    s.add_argument("--out")

    w = sub.add_parser("sweep", help="run a protocol across graph sizes")
    w.add_argument("--config")
    w.add_argument("--family", required=True, choices=FAMILIES)
    w.add_argument("--sizes", required=True, type=_sizes)
    w.add_argument("--delta", type=int, help="centre count for gstar (sizes give Delta)")
    w.add_argument("--p", type=float)
    w.add_argument("--graph-seed", type=int, default=0)
    _add_protocol_flags(w)
    w.set_defaults(trials=20)
    w.add_argument("--fit", action="store_true")
    w.add_argument("--summary", help="write per-point summary JSON lines here instead of stdout")
    w.add_argument("--out")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # find --config before a full parse, since the file may supply required flags
    command = next((a for a in argv if not a.startswith("-")), None)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known_args, _ = pre.parse_known_args(argv)
    subs = parser._subparsers._group_actions[0].choices
    if not known_args.config or command not in subs:
        return parser.parse_args(argv)
    try:
        with open(known_args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known_args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    sub = subs[command]
    known = {act.dest for act in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    # positional arguments may come from the config file
    for act in sub._actions:
        if not act.option_strings and act.dest in defaults:
            act.nargs = "?"
        if act.required and act.dest in defaults:
            act.required = False
    return parser.parse_args(argv)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------

def cmd_gen(args) -> int:
    g = gen_family(args.family, args.n, delta=args.delta, Delta=args.Delta, p=args.p, seed=args.seed)
    if args.tau is None and args.dynamics is None:
        obj = graphio.graph_to_dict(g)
    else:
        tau = parse_tau(args.tau) if args.tau is not None else UNBOUNDED
        dg = make_dynamic(g, tau, args.dynamics or "permute", seed=args.seed)
        obj = graphio.dynamic_to_dict(dg)
    _emit(json.dumps(obj, separators=(",", ":")) + "\n", args.out)
    return 0


def cmd_analyze(args) -> int:
    obj = graphio.load(args.graph)
    wanted = [m for m in ("alpha", "phi", "gamma") if getattr(args, m)] or ["alpha", "phi", "gamma"]
    n = obj.n
    caps = {"alpha": EXACT_CAP, "phi": EXACT_CAP, "gamma": GAMMA_EXACT_CAP}
    if args.exact:
        for m in wanted:
            if n > caps[m]:
                raise TooLargeForExact(f"--exact {m} supports n <= {caps[m]}, got n={n}")
    report: dict = {"n": n}
    if isinstance(obj, DynamicGraph):
        dyn_mode = "sampled" if args.sample else "exact"
        res = dynamic_metrics(obj, args.horizon, dyn_mode, args.sample or 1000, args.seed)
        for m in ("alpha", "phi"):
            if m in wanted:
                report[m] = res[m].to_json()
        if "gamma" in wanted:
            frame = obj.frame(1)
            report["gamma"] = _metric(gamma, frame, caps["gamma"], args).to_json()
        report["Delta"], report["delta"] = res["Delta"], res["delta"]
    else:
        funcs = {"alpha": vertex_expansion, "phi": conductance, "gamma": gamma}
        for m in wanted:
            report[m] = _metric(funcs[m], obj, caps[m], args).to_json()
        report["Delta"], report["delta"] = obj.Delta, obj.delta
    print(json.dumps(report))
    return 0


def _metric(func, g: Graph, cap: int, args):
    if args.sample:
        return func(g, "sampled", args.sample, args.seed)
    if args.exact or g.n <= cap:
        return func(g, "exact")
    return func(g, "sampled", 1000, args.seed)


def _protocol(args) -> ProtocolSpec:
    return ProtocolSpec(args.protocol, args.b, args.resolution, args.cap)


def _dynamics(args):
    tau = parse_tau(args.tau) if args.tau is not None else UNBOUNDED
    model = args.dynamics or ("permute" if args.tau is not None else "static")
    return tau, model


def cmd_simulate(args) -> int:
    spec = _protocol(args)
    obj = graphio.load(args.graph)
    if isinstance(obj, DynamicGraph):
        if args.tau is not None or args.dynamics is not None:
            raise InvalidParams("the graph file already fixes tau and dynamics")
        tau = obj.tau
        base: Graph | DynamicGraph = obj
        model = obj.model
    else:
        tau, model = _dynamics(args)
        base = obj
    if not 0 <= args.source < obj.n:
        raise InvalidParams(f"source {args.source} outside 0..{obj.n - 1}")
    records = run_trials(base, spec, args.trials, args.seed, tau=tau, dynamics=model,
                         source=args.source, max_rounds=args.max_rounds, jobs=args.jobs,
                         trace=bool(args.trace))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for i, rec in enumerate(records):
                for line in rec.trace:
                    fh.write(json.dumps({"trial": i, **line}, separators=(",", ":")) + "\n")
    family = Path(args.graph).stem
    _emit(rows_to_csv(csv_rows(family, tau, spec, records)), args.out)
    return 0


def cmd_sweep(args) -> int:
    if not args.sizes:
        raise InvalidParams("size list is empty")
    tau, model = _dynamics(args)
    exp = ExperimentSpec(
        family=args.family, sizes=tuple(args.sizes), protocol=_protocol(args), trials=args.trials,
        seed_base=args.seed, max_rounds=args.max_rounds, tau=tau, dynamics=model,
        source=args.source, delta=args.delta, p=args.p, graph_seed=args.graph_seed,
    )
    points = run_experiment(exp, jobs=args.jobs)
    rows = [row for pt in points for row in csv_rows(pt.family, tau, exp.protocol, pt.records)]
    csv_text = rows_to_csv(rows)
    lines = [json.dumps(pt.summary) for pt in points]
    if args.fit:
        ns = [pt.n for pt in points]
        meds = [pt.summary["median"] for pt in points]
        lines.append(json.dumps({"fit_exponent": fit_power_law(ns, meds)}))
    summary = "\n".join(lines) + "\n"
    _emit(csv_text, args.out)
    if args.out or args.summary:
        _emit(summary, args.summary)
    else:
        sys.stderr.write(summary)
    return 0


COMMANDS = {"gen": cmd_gen, "analyze": cmd_analyze, "simulate": cmd_simulate, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except USAGE_ERRORS as exc:
        print(f"mgs: error: {exc}", file=sys.stderr)
        return 2
    except (GossipError, OSError) as exc:
        print(f"mgs: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
