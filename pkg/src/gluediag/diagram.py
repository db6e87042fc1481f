"""Gluing diagrams and the homomorphisms they describe.

A diagram from G to H assigns to each vertex v of G a multiset x_v of
vertices of H, and to each edge e a block: a labelled prefix-free set
C_e ⊆ P(H, x_{o(e)}) whose labels form a terminus-maintaining bijection onto
the members of x_{t(e)}. Blocks are stored as dicts path -> member tag.

Blocks along longer paths come from gluing: C_{pe} is C_e pulled back along
the labels of C_p. A rooted diagram starts from a labelled basis of P(H, S);
a floating table at v starts from the empty paths of x_v.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .graphs import Graph
from .monoid import MonoidElement
from .paths import (PathSpace, TaggedPath, check_terminus_maintaining, covers_exactly, eps,
                    glue_labelled, invert_labels, is_basis, is_independent)
from .shifts import Shift, reduce

DEFAULT_NODE_BUDGET = 10_000

Block = Mapping[TaggedPath, int]
Member = tuple[int, int]  # (source vertex, member tag)


class DiagramError(ValueError):
    pass


def _freeze_block(block: Block) -> dict[TaggedPath, int]:
    return {TaggedPath(p.tag, tuple(p.edges)): int(t) for p, t in sorted(block.items())}


@dataclass(frozen=True, eq=True)
class GluingDiagram:
    source: Graph
    target: Graph
    x: tuple[tuple[int, ...], ...]
    blocks: tuple[dict[TaggedPath, int], ...] = field(hash=False)
    start: dict[TaggedPath, int] | None = field(default=None, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(tuple(int(v) for v in xv) for xv in self.x))
        object.__setattr__(self, "blocks", tuple(_freeze_block(b) for b in self.blocks))
        if self.start is not None:
            object.__setattr__(self, "start", _freeze_block(self.start))
        if len(self.x) != self.source.vertex_count:
            raise DiagramError("x needs one multiset per source vertex")
        if len(self.blocks) != self.source.edge_count:
            raise DiagramError("blocks need one entry per source edge")
        for xv in self.x:
            for w in xv:
                if not 0 <= w < self.target.vertex_count:
                    raise DiagramError(f"multiset member {w} is not a target vertex")
        if self.start is not None and (self.source.root is None or self.target.root is None):
            raise DiagramError("a starting basis needs roots on both graphs")

    __hash__ = None  # type: ignore[assignment]

    @property
    def rooted(self) -> bool:
        return self.start is not None

    def member_space(self, v: int) -> PathSpace:
        return PathSpace(self.target, self.x[v])

    @cached_property
    def root_space(self) -> PathSpace:
        if self.target.root is None:
            raise DiagramError("target has no root")
        return PathSpace.rooted(self.target)

    @cached_property
    def source_root_space(self) -> PathSpace:
        if self.source.root is None:
            raise DiagramError("source has no root")
        return PathSpace.rooted(self.source)

    def basis_at(self, v: int) -> dict[TaggedPath, int]:
        out: dict[TaggedPath, int] = {}
        for e in self.source.out_edges[v]:
            out.update(self.blocks[e])
        return dict(sorted(out.items()))

    def block_edge_of(self, v: int) -> dict[TaggedPath, int]:
        """Which out-edge of v owns each element of B_v."""
        return {p: e for e in self.source.out_edges[v] for p in self.blocks[e]}

    @cached_property
    def _tables(self) -> dict:
        return {}

    def table(self, origin: int | None = None) -> BlockTable:
        """Block table of the rooted diagram (origin None) or floating at a source vertex."""
        if origin not in self._tables:
            self._tables[origin] = BlockTable(self, origin)
        return self._tables[origin]

    def block_of(self, p: TaggedPath | Iterable[int], origin: int | None = None) -> dict[TaggedPath, int]:
        return self.table(origin).block(p)


class BlockTable:
    """Memoised C_p for source paths p starting at a fixed place."""

    def __init__(self, d: GluingDiagram, origin: int | None):
        self.diagram = d
        self.origin = origin
        if origin is None:
            if d.start is None:
                raise DiagramError("rooted blocks need a starting basis")
            self.source_space = d.source_root_space
            self.target_space = d.root_space
            first = dict(d.start)
        else:
            self.source_space = PathSpace(d.source, (origin,))
            self.target_space = d.member_space(origin)
            first = {eps(t): t for t in range(len(d.x[origin]))}
        self._cache: dict[tuple[int, ...], dict[TaggedPath, int]] = {(): first}

    def block(self, r: TaggedPath | Iterable[int]) -> dict[TaggedPath, int]:
        if isinstance(r, TaggedPath):
            if r.tag != 0:
                raise DiagramError("source paths carry tag 0")
            key = r.edges
        else:
            key = tuple(r)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        k = len(key)
        while key[:k] not in self._cache:
            k -= 1
        g = self.diagram.source
        at = self.source_space.terminus(TaggedPath(0, key[:k]))
        cur = self._cache[key[:k]]
        for i in range(k, len(key)):
            e = key[i]
            if not 0 <= e < g.edge_count or g.origin(e) != at:
                raise DiagramError(f"{key} is not a source path from here")
            at = g.terminus(e)
            cur = glue_labelled(cur, self.diagram.blocks[e])
            self._cache[key[:i + 1]] = cur
        return cur

    def source_terminus(self, r: TaggedPath) -> int:
        return self.source_space.terminus(r)


# -- validation ---------------------------------------------------------------

def _check_labelled_basis(space: PathSpace, labelled: Block, members: tuple[int, ...], what: str) -> list[str]:
    problems = []
    bad = [p for p in labelled if not space.is_valid(p)]
    if bad:
        return [f"{what}: {bad[0]} is not a path of P(H, x)"]
    if sorted(labelled.values()) != list(range(len(members))):
        problems.append(f"{what}: labels are not a bijection onto the {len(members)} members")
    problems += [f"{what}: not terminus-maintaining, {msg}"
                 for msg in check_terminus_maintaining(space, labelled, members)]
    return problems


def validate(d: GluingDiagram) -> list[str]:
    problems: list[str] = []
    g = d.source
    for e in range(g.edge_count):
        o, t = g.edges[e]
        space = d.member_space(o)
        blk = d.blocks[e]
        problems += _check_labelled_basis(space, blk, d.x[t], f"edge {e}")
        if all(space.is_valid(p) for p in blk) and not is_independent(blk):
            problems.append(f"edge {e}: block is not independent")
    for v in range(g.vertex_count):
        space = d.member_space(v)
        owned = [p for e in g.out_edges[v] for p in d.blocks[e]]
        if len(set(owned)) != len(owned):
            problems.append(f"vertex {v}: B_v not disjoint")
            continue
        if not all(space.is_valid(p) for p in owned):
            continue
        if not is_basis(space, owned):
            problems.append(f"vertex {v}: B_v is not a basis of P(H, x_v)")
    if d.start is not None:
        space = d.root_space
        root = g.root
        problems += _check_labelled_basis(space, d.start, d.x[root], "start")
        if all(space.is_valid(p) for p in d.start) and not is_basis(space, d.start):
            problems.append("start: not a basis of P(H, S)")
    return problems


def require_valid(d: GluingDiagram) -> GluingDiagram:
    problems = validate(d)
    if problems:
        raise DiagramError("invalid diagram: " + "; ".join(problems))
    return d


# -- the homomorphism -----------------------------------------------------------

def gamma_path(d: GluingDiagram, p: TaggedPath) -> MonoidElement:
    return MonoidElement.of(d.root_space, list(d.table().block(p)))


def gamma_apply(d: GluingDiagram, x: MonoidElement) -> MonoidElement:
    if x.space != d.source_root_space:
        raise DiagramError("element does not live over the rooted source")
    table = d.table()
    counts: dict[TaggedPath, int] = {}
    for p, k in x.terms:
        for c in table.block(p):
            counts[c] = counts.get(c, 0) + k
    return MonoidElement.of(d.root_space, counts)


def is_injective(d: GluingDiagram) -> bool:
    return all(len(xv) > 0 for xv in d.x)


def gamma_shift(d: GluingDiagram, s: Shift) -> Shift:
    if s.space != d.source_root_space:
        raise DiagramError("shift does not live over the rooted source")
    table = d.table()
    pairs: dict[TaggedPath, TaggedPath] = {}
    for p, q in s.mapping.items():
        target = invert_labels(table.block(q))
        for c, tag in table.block(p).items():
            pairs[c] = target[tag]
    return reduce(Shift(d.root_space, pairs))


# -- blocking -------------------------------------------------------------------

def blocking_relation(d: GluingDiagram) -> dict[Member, Member]:
    """Map each blocked member w to the member u that blocks it."""
    rel: dict[Member, Member] = {}
    for e, (o, t) in enumerate(d.source.edges):
        for p, tag in d.blocks[e].items():
            if not p.edges:
                rel[(o, p.tag)] = (t, tag)
    return rel


def blocking_cycles(d: GluingDiagram) -> list[list[Member]]:
    # every member is blocked by at most one other, so the relation is functional
    rel = blocking_relation(d)
    cycles = []
    state: dict[Member, int] = {}
    for start in sorted(rel):
        path = []
        w = start
        while w in rel and w not in state:
            state[w] = 1
            path.append(w)
            w = rel[w]
        if w in state and state[w] == 1:
            cycles.append(path[path.index(w):])
        for m in path:
            state[m] = 2
    return cycles


def is_unblocked(d: GluingDiagram) -> bool:
    for cyc in blocking_cycles(d):
        if any(not d.target.is_sink(d.x[v][tag]) for v, tag in cyc):
            return False
    return True


def is_member_unblocked(d: GluingDiagram, v: int, u: int) -> bool:
    """True when ε_u is not an element of B_v, i.e. no member blocks u."""
    return (v, u) not in blocking_relation(d)


def unblocked_members(d: GluingDiagram, v: int) -> list[int]:
    rel = blocking_relation(d)
    return [u for u in range(len(d.x[v])) if (v, u) not in rel]


# -- surjectivity ---------------------------------------------------------------

@dataclass(frozen=True)
class SplittingWitness:
    vertex: int
    member: int
    basis: tuple[TaggedPath, ...]
    family: tuple[TaggedPath, ...]


def find_splitting_basis(d: GluingDiagram, v: int, u: int,
                         node_budget: int = DEFAULT_NODE_BUDGET) -> SplittingWitness | None:
    """Search expansions of {ε_v} for a basis whose blocks separate member u.

    A block glued below a block that lies entirely at tag u (or avoids u)
    keeps that property, so only mixed blocks are worth expanding. If any
    splitting basis exists, this walk stays inside it and therefore ends.
    """
    table = d.table(v)
    queue = deque([eps(0)])
    basis: list[TaggedPath] = []
    family: list[TaggedPath] = []
    nodes = 0
    while queue:
        r = queue.popleft()
        nodes += 1
        if nodes > node_budget:
            return None
        tags = {c.tag for c in table.block(r)}
        if tags == {u}:
            family.append(r)
            basis.append(r)
        elif u not in tags:
            basis.append(r)
        else:
            kids = table.source_space.children(r)
            if not kids:
                return None
            queue.extend(kids)
    return SplittingWitness(v, u, tuple(sorted(basis)), tuple(sorted(family)))


def check_splitting_witness(d: GluingDiagram, w: SplittingWitness) -> list[str]:
    table = d.table(w.vertex)
    problems = []
    if not is_basis(table.source_space, w.basis):
        problems.append("B' is not a basis of P(G, v)")
    if not set(w.family) <= set(w.basis):
        problems.append("family is not a sub-family of B'")
    union = [c for r in w.family for c in table.block(r)]
    if len(set(union)) != len(union) or not covers_exactly(table.target_space, union, [eps(w.member)]):
        problems.append(f"family does not exactly cover ε_{w.member}")
    return problems


@dataclass(frozen=True)
class SurjectivityReport:
    status: str  # "yes" or "unknown"
    unblocked: bool
    witnesses: tuple[SplittingWitness, ...] = ()
    missing: tuple[Member, ...] = ()

    def __bool__(self) -> bool:
        return self.status == "yes"


def is_surjective(d: GluingDiagram, node_budget: int = DEFAULT_NODE_BUDGET) -> SurjectivityReport:
    unblocked = is_unblocked(d)
    witnesses = []
    missing = []
    for v in range(d.source.vertex_count):
        for u in range(len(d.x[v])):
            w = find_splitting_basis(d, v, u, node_budget)
            if w is None:
                missing.append((v, u))
            else:
                witnesses.append(w)
    ok = unblocked and not missing
    return SurjectivityReport("yes" if ok else "unknown", unblocked, tuple(witnesses), tuple(missing))
