"""Diagram moves: expansion at an unblocked member, and addition of loops.

Member tags after expanding x at member u: the surviving members keep their
relative order (tags above u shift down by one), then one new member per
out-edge of the underlying vertex of u is appended in edge order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .diagram import GluingDiagram, blocking_relation, gamma_path
from .graphs import Graph, family_shape, make_G_n
from .monoid import monoid_equal
from .paths import PathSpace, TaggedPath, internal_paths, invert_labels, is_basis


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class KappaMap:
    graph: Graph
    base: tuple[int, ...]
    member: int

    def __post_init__(self):
        if not 0 <= self.member < len(self.base):
            raise MoveError(f"member {self.member} not in multiset")

    @cached_property
    def out_edges(self) -> tuple[int, ...]:
        return self.graph.out_edges[self.base[self.member]]

    @cached_property
    def expanded(self) -> tuple[int, ...]:
        kept = self.base[:self.member] + self.base[self.member + 1:]
        return kept + tuple(self.graph.terminus(e) for e in self.out_edges)

    def old_to_new(self, tag: int) -> int:
        if tag == self.member:
            raise MoveError(f"member {tag} is the one being expanded")
        return tag if tag < self.member else tag - 1

    def edge_tag(self, e: int) -> int:
        return len(self.base) - 1 + self.out_edges.index(e)

    def kappa(self, p: TaggedPath) -> TaggedPath:
        """P(G, x^u) -> P(G, x) minus ε_u."""
        first_new = len(self.base) - 1
        if p.tag >= first_new:
            e = self.out_edges[p.tag - first_new]
            return TaggedPath(self.member, (e,) + p.edges)
        return TaggedPath(p.tag if p.tag < self.member else p.tag + 1, p.edges)

    def kappa_inverse(self, p: TaggedPath) -> TaggedPath:
        if p.tag == self.member:
            if not p.edges:
                raise MoveError(f"ε_{self.member} has no preimage under κ")
            return TaggedPath(self.edge_tag(p.edges[0]), p.edges[1:])
        return TaggedPath(self.old_to_new(p.tag), p.edges)


def kappa(graph: Graph, x: tuple[int, ...], u: int, p: TaggedPath) -> TaggedPath:
    return KappaMap(graph, tuple(x), u).kappa(p)


def kappa_inverse(graph: Graph, x: tuple[int, ...], u: int, p: TaggedPath) -> TaggedPath:
    return KappaMap(graph, tuple(x), u).kappa_inverse(p)


@dataclass(frozen=True)
class MoveRecord:
    kind: str  # "expand" or "add"
    vertex: int | None = None
    member: int | None = None
    rho: tuple[TaggedPath, ...] = ()
    gamma_plus: tuple[int, ...] = ()


def _expand_labels(space: PathSpace, blk: dict[TaggedPath, int], km: KappaMap) -> dict[TaggedPath, int]:
    """Expand a labelled set at the element labelled u, relabelling into x^u."""
    c = invert_labels(blk)[km.member]
    out = {p: km.old_to_new(lab) for p, lab in blk.items() if p != c}
    for e in space.out_edges(c):
        out[c.extend(e)] = km.edge_tag(e)
    return out


def expand_diagram(d: GluingDiagram, w: int, u: int) -> GluingDiagram:
    if not 0 <= w < d.source.vertex_count or not 0 <= u < len(d.x[w]):
        raise MoveError(f"no member {u} at vertex {w}")
    blocker = blocking_relation(d).get((w, u))
    if blocker is not None:
        raise MoveError(f"member {u} of x_{w} is blocked by {blocker}")
    km = KappaMap(d.target, d.x[w], u)
    if not km.out_edges:
        raise MoveError(f"member {u} of x_{w} sits at a sink")
    new_x = list(d.x)
    new_x[w] = km.expanded
    blocks = []
    for e, (o, t) in enumerate(d.source.edges):
        blk = dict(d.blocks[e])
        if t == w:
            blk = _expand_labels(d.member_space(o), blk, km)
        if o == w:
            blk = {km.kappa_inverse(p): lab for p, lab in blk.items()}
        blocks.append(blk)
    start = d.start
    if start is not None and d.source.root == w:
        start = _expand_labels(d.root_space, dict(start), km)
    return GluingDiagram(d.source, d.target, tuple(new_x), tuple(blocks), start)


def same_homomorphism_upto(d1: GluingDiagram, d2: GluingDiagram, depth: int) -> bool:
    if d1.source != d2.source or d1.target != d2.target:
        raise MoveError("diagrams connect different graphs")
    for p in d1.source_root_space.all_paths(depth):
        if not monoid_equal(gamma_path(d1, p), gamma_path(d2, p)):
            return False
    return True


def b_plus(space: PathSpace, B: Iterable[TaggedPath], n_plus_l: int) -> list[TaggedPath]:
    """B ∪ {p·e_j : p internal in B, n <= j < n_plus_l} inside G_{n_plus_l}."""
    B = sorted(B)
    shape = family_shape(space.graph)
    if shape is None or shape.a != 0:
        raise MoveError("b_plus needs a basis over a one-vertex graph G_n")
    if not is_basis(space, B):
        raise MoveError("input is not a basis")
    n = shape.n
    extra = [p.extend(j) for p in internal_paths(B) for j in range(n, n_plus_l)]
    return sorted(B + extra)


def add_diagram(d: GluingDiagram) -> tuple[GluingDiagram, MoveRecord]:
    g = d.source
    if g.vertex_count != 1 or d.target != g or any(o != 0 or t != 0 for o, t in g.edges):
        raise MoveError("the addition move needs a floating diagram from G_n to itself")
    if d.start is not None:
        raise MoveError("the addition move needs a floating diagram")
    n = g.edge_count
    l = len(d.x[0])
    if l == 0 or any(v != 0 for v in d.x[0]):
        raise MoveError("the addition move needs x_v = l·v with l >= 1")
    internal = internal_paths(d.basis_at(0))
    if len(internal) != l:
        raise MoveError(f"B_v has {len(internal)} internal paths, expected {l}")
    bigger = make_G_n(n + l)
    blocks = list(d.blocks)
    for rho in internal:
        blocks.append({rho.extend(n + j): j for j in range(l)})
    record = MoveRecord("add", rho=tuple(internal), gamma_plus=tuple(range(l)))
    return GluingDiagram(bigger, bigger, d.x, tuple(blocks), None), record


def apply_move(d: GluingDiagram, record: MoveRecord) -> GluingDiagram:
    if record.kind == "expand":
        return expand_diagram(d, record.vertex, record.member)
    if record.kind == "add":
        out, rec = add_diagram(d)
        if record.rho and tuple(record.rho) != rec.rho:
            raise MoveError("recorded ρ pairing does not match the canonical one")
        return out
    raise MoveError(f"unknown move {record.kind!r}")


def canonical_member(d: GluingDiagram, w: int) -> int:
    rel = blocking_relation(d)
    for u in range(len(d.x[w])):
        if (w, u) not in rel and d.target.out_edges[d.x[w][u]]:
            return u
    raise MoveError(f"no unblocked member at vertex {w}")
