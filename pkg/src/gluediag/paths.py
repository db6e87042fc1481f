"""Tagged paths over a vertex multiset, prefix order, covers and bases.

A path space P(G, x) is a graph together with a multiset x of vertices. The
multiset is a tuple: member tag = position, underlying vertex = entry. A
TaggedPath is a member tag plus an edge sequence starting at that member.

Prefix-free sets are kept as plain collections of TaggedPath. Sorting them
in canonical order places every extension of p in a contiguous run right
after p, which is all the independence check needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple

from .graphs import Graph


class PathError(ValueError):
    pass


class TaggedPath(NamedTuple):
    tag: int
    edges: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.tag}:" + ".".join(f"e{e}" for e in self.edges)

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.edges)

    def extend(self, *edges: int) -> TaggedPath:
        return TaggedPath(self.tag, self.edges + tuple(edges))

    def concat(self, rest: Iterable[int]) -> TaggedPath:
        return TaggedPath(self.tag, self.edges + tuple(rest))

    def is_prefix_of(self, other: TaggedPath) -> bool:
        k = len(self.edges)
        return self.tag == other.tag and other.edges[:k] == self.edges

    def is_strict_prefix_of(self, other: TaggedPath) -> bool:
        return len(self.edges) < len(other.edges) and self.is_prefix_of(other)

    def prefixes(self) -> Iterator[TaggedPath]:
        """All prefixes, shortest first, including the path itself."""
        for k in range(len(self.edges) + 1):
            yield TaggedPath(self.tag, self.edges[:k])

    @property
    def parent(self) -> TaggedPath:
        if not self.edges:
            raise PathError("empty path has no parent")
        return TaggedPath(self.tag, self.edges[:-1])

    def strip(self, prefix: TaggedPath) -> tuple[int, ...]:
        if not prefix.is_prefix_of(self):
            raise PathError(f"{prefix} is not a prefix of {self}")
        return self.edges[len(prefix.edges):]


def eps(tag: int = 0) -> TaggedPath:
    return TaggedPath(tag, ())


def parse_path(text: str) -> TaggedPath:
    tag, sep, rest = text.strip().partition(":")
    if not sep:
        raise PathError(f"path {text!r} lacks a ':' separator")
    try:
        edges = tuple(int(tok[1:] if tok.startswith("e") else tok) for tok in rest.split(".")) if rest else ()
        return TaggedPath(int(tag), edges)
    except ValueError as exc:
        raise PathError(f"malformed path {text!r}") from exc


class Relation(Enum):
    EQUAL = "equal"
    P_PREFIX_OF_Q = "p_prefix_of_q"
    Q_PREFIX_OF_P = "q_prefix_of_p"
    INDEPENDENT = "independent"


def prefix_compare(p: TaggedPath, q: TaggedPath) -> Relation:
    if p == q:
        return Relation.EQUAL
    if p.is_prefix_of(q):
        return Relation.P_PREFIX_OF_Q
    if q.is_prefix_of(p):
        return Relation.Q_PREFIX_OF_P
    return Relation.INDEPENDENT


def comparable(p: TaggedPath, q: TaggedPath) -> bool:
    return p.is_prefix_of(q) or q.is_prefix_of(p)


@dataclass(frozen=True)
class PathSpace:
    graph: Graph
    members: tuple[int, ...]

    def __post_init__(self):
        for v in self.members:
            if not 0 <= v < self.graph.vertex_count:
                raise PathError(f"member vertex {v} not in graph")

    @classmethod
    def rooted(cls, graph: Graph, root: int | None = None) -> PathSpace:
        root = graph.root if root is None else root
        if root is None:
            raise PathError("graph has no root")
        return cls(graph, (root,))

    def terminus(self, p: TaggedPath) -> int:
        if p.edges:
            return self.graph.edges[p.edges[-1]][1]
        return self.members[p.tag]

    def is_valid(self, p: TaggedPath) -> bool:
        if not 0 <= p.tag < len(self.members):
            return False
        at = self.members[p.tag]
        for e in p.edges:
            if not 0 <= e < self.graph.edge_count or self.graph.edges[e][0] != at:
                return False
            at = self.graph.edges[e][1]
        return True

    def check(self, p: TaggedPath) -> TaggedPath:
        if not self.is_valid(p):
            raise PathError(f"{p} is not a path of this space")
        return p

    def out_edges(self, p: TaggedPath) -> tuple[int, ...]:
        return self.graph.out_edges[self.terminus(p)]

    def is_regular(self, p: TaggedPath) -> bool:
        return bool(self.out_edges(p))

    def children(self, p: TaggedPath) -> list[TaggedPath]:
        return [p.extend(e) for e in self.out_edges(p)]

    def trivial_basis(self) -> list[TaggedPath]:
        return [eps(t) for t in range(len(self.members))]

    def paths_below(self, p: TaggedPath, max_length: int) -> Iterator[TaggedPath]:
        """Every extension of p with total length at most max_length."""
        stack = [p]
        while stack:
            q = stack.pop()
            yield q
            if len(q.edges) < max_length:
                stack.extend(reversed(self.children(q)))

    def all_paths(self, max_length: int) -> Iterator[TaggedPath]:
        for t in range(len(self.members)):
            yield from self.paths_below(eps(t), max_length)


def canonical(paths: Iterable[TaggedPath]) -> list[TaggedPath]:
    return sorted(set(paths))


def is_independent(paths: Iterable[TaggedPath]) -> bool:
    ordered = sorted(paths)
    for a, b in zip(ordered, ordered[1:]):
        if a.is_prefix_of(b):
            return False
    return True


def prefix_in(p: TaggedPath, paths: set | frozenset | Mapping) -> TaggedPath | None:
    """The element of ``paths`` that is a prefix of p, if any (shortest first)."""
    for q in p.prefixes():
        if q in paths:
            return q
    return None


def strict_prefix_closure(paths: Iterable[TaggedPath]) -> set[TaggedPath]:
    out: set[TaggedPath] = set()
    for p in paths:
        for k in range(len(p.edges)):
            out.add(TaggedPath(p.tag, p.edges[:k]))
    return out


def expand_at(space: PathSpace, paths: Iterable[TaggedPath], q: TaggedPath) -> list[TaggedPath]:
    ms = set(paths)
    if q not in ms:
        raise PathError(f"{q} is not in the set")
    kids = space.children(q)
    if not kids:
        raise PathError(f"cannot expand at {q}: its terminus is a sink")
    ms.remove(q)
    ms.update(kids)
    return sorted(ms)


def lies_under(M: Iterable[TaggedPath], N: Iterable[TaggedPath]) -> bool:
    """N ⪯ M: every element of M has a prefix in N."""
    ns = set(N)
    return all(prefix_in(m, ns) is not None for m in M)


class CoverResult(NamedTuple):
    status: str  # "yes", "no" or "unknown"
    counterexample: TaggedPath | None = None

    def __bool__(self) -> bool:
        return self.status == "yes"


def covers_exactly(space: PathSpace, M: Iterable[TaggedPath], N: Iterable[TaggedPath],
                   depth_bound: int | None = None) -> CoverResult:
    """Decide whether M exactly covers N.

    A path below N is fine when it is comparable with some element of M; once
    a path has a prefix in M its whole subtree is fine, and a path with no
    comparable element is a counterexample. The walk stops at the longest
    element of M, so without a ``depth_bound`` the answer is always definite.
    """
    ms = set(M)
    ns = set(N)
    for m in sorted(ms):
        if prefix_in(m, ns) is None:
            return CoverResult("no", m)
    inner = strict_prefix_closure(ms)
    stack = sorted(ns, reverse=True)
    unknown = False
    while stack:
        p = stack.pop()
        if prefix_in(p, ms) is not None:
            continue
        if p not in inner:
            return CoverResult("no", p)
        if depth_bound is not None and len(p.edges) >= depth_bound:
            unknown = True
            continue
        stack.extend(reversed(space.children(p)))
    return CoverResult("unknown") if unknown else CoverResult("yes")


def covers(space: PathSpace, M: Iterable[TaggedPath], N: Iterable[TaggedPath]) -> bool:
    """Plain covering: the part of M lying under N covers N exactly."""
    ns = set(N)
    below = [m for m in M if prefix_in(m, ns) is not None]
    return bool(covers_exactly(space, below, ns))


def is_basis(space: PathSpace, M: Iterable[TaggedPath]) -> bool:
    ms = list(M)
    if len(set(ms)) != len(ms):
        return False
    if not all(space.is_valid(m) for m in ms) or not is_independent(ms):
        return False
    return bool(covers_exactly(space, ms, space.trivial_basis()))


def internal_paths(B: Iterable[TaggedPath]) -> list[TaggedPath]:
    return sorted(strict_prefix_closure(B))


def check_terminus_maintaining(space: PathSpace, f: Mapping[TaggedPath, int],
                               members: tuple[int, ...]) -> list[str]:
    problems = []
    for m, tag in f.items():
        if not 0 <= tag < len(members):
            problems.append(f"{m} maps to missing member {tag}")
        elif space.terminus(m) != members[tag]:
            problems.append(f"{m} ends at {space.terminus(m)} but member {tag} is vertex {members[tag]}")
    return problems


def glue_path(inverse: Mapping[int, TaggedPath], n: TaggedPath) -> TaggedPath:
    m = inverse[n.tag]
    return TaggedPath(m.tag, m.edges + n.edges)


def glue(f: Mapping[TaggedPath, int], N: Iterable[TaggedPath]) -> list[TaggedPath]:
    """M ∘_f N: pull N back along f, sending (tag f(m), r) to m·r."""
    inverse = invert_labels(f)
    return sorted(glue_path(inverse, n) for n in N)


def glue_labelled(f: Mapping[TaggedPath, int], N: Mapping[TaggedPath, int]) -> dict[TaggedPath, int]:
    """Glue a labelled set: the labels of N ride along unchanged."""
    inverse = invert_labels(f)
    return {glue_path(inverse, n): lab for n, lab in sorted(N.items())}


def invert_labels(f: Mapping[TaggedPath, int]) -> dict[int, TaggedPath]:
    inverse: dict[int, TaggedPath] = {}
    for m, tag in f.items():
        if tag in inverse:
            raise PathError(f"labelling is not injective at member {tag}")
        inverse[tag] = m
    return inverse


def enumerate_bases(space: PathSpace, max_length: int) -> Iterator[list[TaggedPath]]:
    """Every basis whose elements have length at most max_length."""

    def below(p: TaggedPath) -> Iterator[list[TaggedPath]]:
        yield [p]
        if len(p.edges) < max_length and space.is_regular(p):
            for combo in product(*(list(below(c)) for c in space.children(p))):
                yield [x for part in combo for x in part]

    for combo in product(*(list(below(e)) for e in space.trivial_basis())):
        yield sorted(x for part in combo for x in part)
