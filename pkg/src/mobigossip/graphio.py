"""JSON reading/writing for graphs and dynamic graphs.

Graph file::

    {"n": 4, "edges": [[0, 1], [0, 2], ...]}

Dynamic file::

    {"n": 4, "tau": 2 | "inf", "model": "static" | "permute" | "explicit",
     "seed": 0, "base": <graph> | null, "frames": [<graph>, ...] | null}

Edges are always written with ``u < v`` in lexicographic order.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .dynamic import MODELS, UNBOUNDED, DynamicGraph, make_dynamic, parse_tau
from .errors import DisconnectedFrame, DisconnectedGraph, InvalidEdge, InvalidParams, ParseError, SchemaError
from .graph import Graph, make_graph

__all__ = [
    "dynamic_to_dict",
    "dynamic_from_dict",
    "graph_from_dict",
    "graph_to_dict",
    "load",
    "read_dynamic",
    "read_graph",
    "write_dynamic",
    "write_graph",
]

PathLike = Union[str, Path]


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def graph_from_dict(obj: Any, *, frame: bool = False) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise SchemaError("graph object needs keys 'n' and 'edges'")
    n, edges = obj["n"], obj["edges"]
    if not _is_int(n) or n < 1:
        raise SchemaError(f"'n' must be a positive integer, got {n!r}")
    if not isinstance(edges, list):
        raise SchemaError("'edges' must be a list")
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(_is_int(x) for x in e)):
            raise SchemaError(f"edge {e!r} is not a pair of integers")
    try:
        return make_graph(n, edges)
    except InvalidEdge as exc:
        raise SchemaError(str(exc)) from exc
    except DisconnectedGraph as exc:
        if frame:
            raise DisconnectedFrame(str(exc)) from exc
        raise


def dynamic_to_dict(dg: DynamicGraph) -> dict:
    return {
        "n": dg.n,
        "tau": "inf" if dg.tau is UNBOUNDED else dg.tau,
        "model": dg.model,
        "seed": dg.seed,
        "base": graph_to_dict(dg.base) if dg.base is not None else None,
        "frames": [graph_to_dict(g) for g in dg.frames] if dg.frames is not None else None,
    }


def dynamic_from_dict(obj: Any) -> DynamicGraph:
    if not isinstance(obj, dict):
        raise SchemaError("dynamic graph file must hold a JSON object")
    missing = {"n", "tau", "model"} - obj.keys()
    if missing:
        raise SchemaError(f"dynamic graph is missing keys: {', '.join(sorted(missing))}")
    n = obj["n"]
    if not _is_int(n) or n < 1:
        raise SchemaError(f"'n' must be a positive integer, got {n!r}")
    if obj["model"] not in MODELS:
        raise SchemaError(f"unknown model {obj['model']!r}")
    seed = obj.get("seed", 0)
    if not _is_int(seed):
        raise SchemaError(f"'seed' must be an integer, got {seed!r}")
    try:
        tau = parse_tau(obj["tau"])
    except InvalidParams as exc:
        raise SchemaError(str(exc)) from exc
    base = obj.get("base")
    frames = obj.get("frames")
    base_g = graph_from_dict(base) if base is not None else None
    frame_gs = None
    if frames is not None:
        if not isinstance(frames, list):
            raise SchemaError("'frames' must be a list or null")
        frame_gs = [graph_from_dict(f, frame=True) for f in frames]
    for g in ([base_g] if base_g else []) + (frame_gs or []):
        if g.n != n:
            raise SchemaError(f"frame has n={g.n} but file declares n={n}")
    try:
        return make_dynamic(base_g, tau, obj["model"], seed, frames=frame_gs)
    except InvalidParams as exc:
        raise SchemaError(str(exc)) from exc


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _write_json(obj: dict, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, separators=(",", ":"))
        fh.write("\n")


def write_graph(g: Graph, path: PathLike) -> None:
    _write_json(graph_to_dict(g), path)


def read_graph(path: PathLike) -> Graph:
    return graph_from_dict(_read_json(path))


def write_dynamic(dg: DynamicGraph, path: PathLike) -> None:
    _write_json(dynamic_to_dict(dg), path)


def read_dynamic(path: PathLike) -> DynamicGraph:
    return dynamic_from_dict(_read_json(path))


def load(path: PathLike) -> Graph | DynamicGraph:
    """Read either file kind; a ``tau`` key marks a dynamic graph."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "tau" in obj:
        return dynamic_from_dict(obj)
    return graph_from_dict(obj)
