"""Canonical JSON for graphs, paths, shifts, diagrams, move logs and certificates.

Output is deterministic: sorted keys, paths in canonical order, integers
only. Loaders rebuild and revalidate the objects they read.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .diagram import (GluingDiagram, SplittingWitness, SurjectivityReport, require_valid)
from .enabling import EnablingWitness, ShiftSurjectivityReport
from .graphs import Graph, make_graph
from .monoid import MonoidElement
from .moves import MoveRecord
from .paths import PathError, PathSpace, TaggedPath, parse_path
from .shifts import Shift, reduce


class FormatError(ValueError):
    """Well-formed JSON that does not describe the expected object."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{what} must be an integer, got {v!r}")
    return v


def _get(obj: Mapping, key: str):
    if not isinstance(obj, Mapping):
        raise FormatError(f"expected an object with key {key!r}")
    if key not in obj:
        raise FormatError(f"missing key {key!r}")
    return obj[key]


# -- graphs and paths -----------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    return {"vertices": g.vertex_count, "edges": [[o, t] for o, t in g.edges], "root": g.root}


def graph_from_json(obj) -> Graph:
    n = _int(_get(obj, "vertices"), "vertices")
    edges = _get(obj, "edges")
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise FormatError("edges must be a list of [origin, terminus] pairs")
    root = obj.get("root")
    return make_graph(n, [(_int(o, "edge origin"), _int(t, "edge terminus")) for o, t in edges],
                      None if root is None else _int(root, "root"))


def path_to_json(p: TaggedPath) -> str:
    return str(p)


def path_from_json(text) -> TaggedPath:
    if not isinstance(text, str):
        raise FormatError(f"path must be a string, got {text!r}")
    try:
        return parse_path(text)
    except PathError as exc:
        raise FormatError(str(exc)) from exc


def paths_to_json(paths: Iterable[TaggedPath]) -> list[str]:
    return [str(p) for p in sorted(paths)]


def paths_from_json(obj) -> list[TaggedPath]:
    if not isinstance(obj, list):
        raise FormatError("path set must be a list")
    return sorted(path_from_json(t) for t in obj)


def space_to_json(space: PathSpace) -> dict:
    return {"graph": graph_to_json(space.graph), "members": list(space.members)}


def space_from_json(obj) -> PathSpace:
    members = _get(obj, "members")
    if not isinstance(members, list):
        raise FormatError("members must be a list")
    return PathSpace(graph_from_json(_get(obj, "graph")), tuple(_int(m, "member") for m in members))


# -- monoid elements and shifts -----------------------------------------------------

def monoid_to_json(x: MonoidElement) -> list[dict]:
    return [{"path": str(p), "mult": k} for p, k in x.terms]


def monoid_from_json(obj, space: PathSpace) -> MonoidElement:
    if not isinstance(obj, list):
        raise FormatError("monoid element must be a list of terms")
    counts: dict[TaggedPath, int] = {}
    for term in obj:
        p = path_from_json(_get(term, "path"))
        counts[p] = counts.get(p, 0) + _int(_get(term, "mult"), "mult")
    return MonoidElement.of(space, counts)


def shift_to_json(s: Shift, with_space: bool = True) -> dict:
    out: dict = {"pairs": [[str(p), str(q)] for p, q in s.pairs()]}
    if with_space:
        out["space"] = space_to_json(s.space)
    return out


def shift_from_json(obj, space: PathSpace | None = None) -> Shift:
    """Load and reduce a shift; ``space`` is needed when the file does not carry one."""
    if not isinstance(obj, Mapping):
        raise FormatError("shift must be a JSON object")
    if space is None:
        if "space" not in obj:
            raise FormatError("shift file has no space and none was given")
        space = space_from_json(obj["space"])
    pairs = _get(obj, "pairs")
    if not isinstance(pairs, list) or not all(isinstance(pq, list) and len(pq) == 2 for pq in pairs):
        raise FormatError("pairs must be a list of [p, q]")
    mapping = {}
    for p, q in pairs:
        p = path_from_json(p)
        if p in mapping:
            raise FormatError(f"{p} appears twice in the domain")
        mapping[p] = path_from_json(q)
    return reduce(Shift(space, mapping))


# -- diagrams -------------------------------------------------------------------------

def _labelled_to_json(blk: Mapping[TaggedPath, int]) -> dict:
    items = sorted(blk.items())
    return {"paths": [str(p) for p, _ in items], "gamma": [t for _, t in items]}


def _labelled_from_json(obj) -> dict[TaggedPath, int]:
    paths = _get(obj, "paths")
    gamma = _get(obj, "gamma")
    if not isinstance(paths, list) or not isinstance(gamma, list) or len(paths) != len(gamma):
        raise FormatError("a block needs equally long 'paths' and 'gamma' lists")
    out = {}
    for p, t in zip(paths, gamma):
        p = path_from_json(p)
        if p in out:
            raise FormatError(f"{p} appears twice in one block")
        out[p] = _int(t, "gamma label")
    return out


def diagram_to_json(d: GluingDiagram) -> dict:
    return {
        "source": graph_to_json(d.source),
        "target": graph_to_json(d.target),
        "x": {str(v): list(xv) for v, xv in enumerate(d.x)},
        "blocks": {str(e): _labelled_to_json(b) for e, b in enumerate(d.blocks)},
        "start": None if d.start is None else _labelled_to_json(d.start),
    }


def _indexed(obj, count: int, what: str) -> list:
    if not isinstance(obj, Mapping):
        raise FormatError(f"{what} must be an object keyed by index")
    keys = {str(i) for i in range(count)}
    if set(obj) != keys:
        raise FormatError(f"{what} must have exactly the keys 0..{count - 1}")
    return [obj[str(i)] for i in range(count)]


def diagram_from_json(obj, validate: bool = True) -> GluingDiagram:
    """Load a diagram; with ``validate`` it must also pass every structural check."""
    source = graph_from_json(_get(obj, "source"))
    target = graph_from_json(_get(obj, "target"))
    xs = _indexed(_get(obj, "x"), source.vertex_count, "x")
    if not all(isinstance(xv, list) for xv in xs):
        raise FormatError("each x_v must be a list of target vertices")
    x = tuple(tuple(_int(w, "x member") for w in xv) for xv in xs)
    blocks = tuple(_labelled_from_json(b) for b in _indexed(_get(obj, "blocks"), source.edge_count, "blocks"))
    start = obj.get("start")
    d = GluingDiagram(source, target, x, blocks, None if start is None else _labelled_from_json(start))
    return require_valid(d) if validate else d


# -- moves, traces and certificates --------------------------------------------------------

def move_to_json(m: MoveRecord) -> dict:
    if m.kind == "expand":
        return {"move": "expand", "vertex": m.vertex, "member": m.member}
    return {"move": "add", "rho": [str(p) for p in m.rho], "gammaPlus": list(m.gamma_plus)}


def move_from_json(obj) -> MoveRecord:
    kind = _get(obj, "move")
    if kind == "expand":
        return MoveRecord("expand", vertex=_int(_get(obj, "vertex"), "vertex"),
                          member=_int(_get(obj, "member"), "member"))
    if kind == "add":
        rho = tuple(path_from_json(p) for p in obj.get("rho", []))
        gp = tuple(_int(t, "gammaPlus") for t in obj.get("gammaPlus", []))
        return MoveRecord("add", rho=rho, gamma_plus=gp)
    raise FormatError(f"unknown move {kind!r}")


def moves_to_json(log: Iterable[MoveRecord]) -> list[dict]:
    return [move_to_json(m) for m in log]


def moves_from_json(obj) -> list[MoveRecord]:
    if not isinstance(obj, list):
        raise FormatError("move log must be a list")
    return [move_from_json(m) for m in obj]


def trace_to_json(trace, moves: Iterable[MoveRecord] = ()) -> dict:
    return {"steps": [{"l": s.l, "n": s.n, "move": s.move} for s in trace], "moves": moves_to_json(moves)}


def trace_from_json(obj):
    from .euclid import TraceStep
    steps = _get(obj, "steps")
    if not isinstance(steps, list):
        raise FormatError("trace steps must be a list")
    trace = [TraceStep(_int(_get(s, "l"), "l"), _int(_get(s, "n"), "n"), _get(s, "move")) for s in steps]
    return trace, moves_from_json(obj.get("moves", []))


def _origin(v: int | None):
    return "root" if v is None else v


def _origin_from(v) -> int | None:
    return None if v == "root" else _int(v, "origin")


def splitting_to_json(w: SplittingWitness) -> dict:
    return {"vertex": w.vertex, "member": w.member, "basis": paths_to_json(w.basis), "family": paths_to_json(w.family)}


def splitting_from_json(obj) -> SplittingWitness:
    return SplittingWitness(_int(_get(obj, "vertex"), "vertex"), _int(_get(obj, "member"), "member"),
                            tuple(paths_from_json(_get(obj, "basis"))), tuple(paths_from_json(_get(obj, "family"))))


def enabling_to_json(w: EnablingWitness) -> dict:
    return {"p": str(w.p), "q": str(w.q), "pOrigin": _origin(w.p_origin), "qOrigin": _origin(w.q_origin),
            "nu": [[str(s), str(t)] for s, t in sorted(w.nu.items())], "searchDepth": w.search_depth}


def enabling_from_json(obj) -> EnablingWitness:
    nu = {path_from_json(s): path_from_json(t) for s, t in _get(obj, "nu")}
    return EnablingWitness(path_from_json(_get(obj, "p")), path_from_json(_get(obj, "q")),
                           _origin_from(_get(obj, "pOrigin")), _origin_from(_get(obj, "qOrigin")), nu,
                           _int(obj.get("searchDepth", 0), "searchDepth"))


def certificate_to_json(injective: bool, surj: SurjectivityReport, shift: ShiftSurjectivityReport,
                        depth_bound: int, node_budget: int, extra: Mapping | None = None) -> dict:
    out = {
        "injective": injective,
        "surjective": {
            "status": surj.status,
            "unblocked": surj.unblocked,
            "witnesses": [splitting_to_json(w) for w in surj.witnesses],
            "missing": [list(m) for m in surj.missing],
        },
        "shiftSurjective": {
            "status": shift.status,
            "depthBound": depth_bound,
            "witnesses": [enabling_to_json(w) for w in shift.witnesses],
            "missing": [[[_origin(v), str(p)], [_origin(w), str(q)]] for (v, p), (w, q) in shift.missing],
        },
        "nodeBudget": node_budget,
    }
    if extra:
        out.update(extra)
    return out


def isomorphism_certificate(iso, node_budget: int) -> dict:
    extra = {"a": iso.a, "n": iso.n, "b": iso.b, "l": iso.solution.l, "k": iso.solution.k}
    return certificate_to_json(iso.injective, iso.surjectivity, iso.shift_surjectivity,
                               iso.depth_bound, node_budget, extra)


# -- files -----------------------------------------------------------------------------------

def read_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


_KINDS = {
    "graph": (graph_to_json, graph_from_json),
    "diagram": (diagram_to_json, diagram_from_json),
    "shift": (shift_to_json, shift_from_json),
    "trace": (lambda t: trace_to_json(*t), trace_from_json),
}


class Workspace:
    """A directory of named JSON objects, one subdirectory per kind.

    Objects are revalidated when loaded, so a hand-edited file that no longer
    describes a valid object fails on load rather than later.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _file(self, kind: str, name: str) -> Path:
        if kind not in _KINDS:
            raise FormatError(f"unknown kind {kind!r}")
        return self.root / kind / f"{name}.json"

    def save(self, kind: str, name: str, obj) -> Path:
        path = self._file(kind, name)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_json(path, _KINDS[kind][0](obj))
        return path

    def load(self, kind: str, name: str):
        return _KINDS[kind][1](read_json(self._file(kind, name)))

    def names(self, kind: str) -> list[str]:
        folder = self.root / kind
        if kind not in _KINDS:
            raise FormatError(f"unknown kind {kind!r}")
        return sorted(p.stem for p in folder.glob("*.json")) if folder.is_dir() else []
