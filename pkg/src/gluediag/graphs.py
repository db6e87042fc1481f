"""Finite directed multigraphs and the two-vertex family G_{a,n}.

Vertices and edges are dense integer indices. Edge order is the order of
construction and doubles as the canonical child order for path expansion.

Layout of G_{a,n}: vertex 0 is the loop vertex v and vertex 1 is the root R.
The loops e_0..e_{n-1} are edges 0..n-1 and the root edges d_0..d_{a-1} are
edges n..n+a-1, so G_n sits inside G_{a,n} with identical indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class VertexClass:
    kind: str  # "regular" or "singular"
    sink: bool
    source: bool


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    root: int | None = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex count must be non-negative")
        for idx, (o, t) in enumerate(self.edges):
            if not (0 <= o < self.vertex_count and 0 <= t < self.vertex_count):
                raise GraphError(f"edge {idx} = ({o}, {t}) has an endpoint out of range")
        if self.root is not None:
            if not 0 <= self.root < self.vertex_count:
                raise GraphError(f"root {self.root} out of range")
            missing = set(range(self.vertex_count)) - self.reachable_from(self.root)
            if missing:
                raise GraphError(f"vertices {sorted(missing)} are unreachable from root {self.root}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def origin(self, e: int) -> int:
        return self.edges[e][0]

    def terminus(self, e: int) -> int:
        return self.edges[e][1]

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for idx, (o, _) in enumerate(self.edges):
            out[o].append(idx)
        return tuple(tuple(es) for es in out)

    @cached_property
    def in_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for _, t in self.edges:
            deg[t] += 1
        return tuple(deg)

    def is_sink(self, v: int) -> bool:
        return not self.out_edges[v]

    def reachable_from(self, start: int) -> set[int]:
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for e in self.out_edges[u]:
                t = self.edges[e][1]
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return seen

    def with_root(self, root: int | None) -> Graph:
        return Graph(self.vertex_count, self.edges, root)

    @property
    def has_sinks(self) -> bool:
        return any(self.is_sink(v) for v in range(self.vertex_count))


def make_graph(vertex_count: int, edges, root: int | None = None) -> Graph:
    return Graph(vertex_count, tuple((int(o), int(t)) for o, t in edges), root)


def classify(g: Graph, v: int) -> VertexClass:
    if not 0 <= v < g.vertex_count:
        raise GraphError(f"vertex {v} out of range")
    out = len(g.out_edges[v])
    return VertexClass(
        kind="regular" if out > 0 else "singular",
        sink=out == 0,
        source=g.in_degrees[v] == 0,
    )


V = 0
R = 1


def make_G_n(n: int) -> Graph:
    if n < 1:
        raise GraphError("G_n needs at least one loop")
    return make_graph(1, [(V, V)] * n, root=V)


def make_G_an(a: int, n: int) -> Graph:
    if a < 1:
        raise GraphError("G_{a,n} needs a >= 1")
    if n < 2:
        raise GraphError("G_{a,n} needs n >= 2")
    return make_graph(2, [(V, V)] * n + [(R, V)] * a, root=R)


def loop_edge(i: int) -> int:
    return i


def root_edge(n: int, j: int) -> int:
    """Index of d_j in G_{a,n}."""
    return n + j


@dataclass(frozen=True)
class FamilyShape:
    """Recognised shape of a graph in the G_{a,n} / G_n family.

    ``a`` is 0 for the one-vertex graph G_n.
    """

    a: int
    n: int
    loop_vertex: int
    root_vertex: int | None


def family_shape(g: Graph) -> FamilyShape | None:
    if g.vertex_count == 1:
        n = len(g.edges)
        return FamilyShape(0, n, 0, None) if n >= 2 else None
    if g.vertex_count != 2:
        return None
    for v, r in ((0, 1), (1, 0)):
        loops = sum(1 for o, t in g.edges if o == v and t == v)
        down = sum(1 for o, t in g.edges if o == r and t == v)
        if loops >= 2 and down >= 1 and loops + down == len(g.edges):
            return FamilyShape(down, loops, v, r)
    return None
