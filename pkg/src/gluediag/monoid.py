"""Path monoid elements and the graph monoid of the G_{a,n} family.

An element is a finite multiset of tagged paths, read modulo the relation
p = sum of p·e over the out-edges of T(p). Two routes decide equality:
``normalize`` expands everything to a common depth (the textbook normal
form), while ``monoid_equal`` cancels common terms and refines only where
the two sides disagree, which stays small even when the paths are long.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping

from .graphs import family_shape
from .paths import PathSpace, TaggedPath, strict_prefix_closure

DEFAULT_DEPTH_CAP = 8


class ResourceError(RuntimeError):
    pass


class MonoidError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidElement:
    space: PathSpace
    terms: tuple[tuple[TaggedPath, int], ...]

    @classmethod
    def of(cls, space: PathSpace, paths: Iterable[TaggedPath] | Mapping[TaggedPath, int] = ()) -> MonoidElement:
        counts = Counter(paths) if not isinstance(paths, Mapping) else Counter(dict(paths))
        for p, k in counts.items():
            if k < 0:
                raise MonoidError("multiplicities must be non-negative")
            space.check(p)
        return cls(space, tuple(sorted((p, k) for p, k in counts.items() if k > 0)))

    @classmethod
    def zero(cls, space: PathSpace) -> MonoidElement:
        return cls(space, ())

    def counter(self) -> Counter:
        return Counter(dict(self.terms))

    def __add__(self, other: MonoidElement) -> MonoidElement:
        _same_space(self, other)
        return MonoidElement.of(self.space, self.counter() + other.counter())

    def scale(self, k: int) -> MonoidElement:
        return MonoidElement.of(self.space, {p: m * k for p, m in self.terms})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def max_length(self) -> int:
        return max((len(p.edges) for p, _ in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(p) if k == 1 else f"{k}·{p}" for p, k in self.terms)


def _same_space(x: MonoidElement, y: MonoidElement) -> None:
    if x.space != y.space:
        raise MonoidError("elements live in different path spaces")


def normalize(x: MonoidElement, depth: int, cap: int = DEFAULT_DEPTH_CAP) -> MonoidElement:
    if depth > cap:
        raise ResourceError(f"normalize depth {depth} exceeds cap {cap}")
    if depth < x.max_length:
        raise MonoidError(f"depth {depth} is below the longest term ({x.max_length})")
    space = x.space
    current = x.counter()
    for _ in range(depth):
        nxt: Counter = Counter()
        changed = False
        for p, k in current.items():
            kids = space.children(p) if len(p.edges) < depth else []
            if kids:
                changed = True
                for c in kids:
                    nxt[c] += k
            else:
                nxt[p] += k
        current = nxt
        if not changed:
            break
    return MonoidElement.of(space, current)


def _settle(x: Counter, y: Counter, space: PathSpace) -> tuple[Counter, Counter]:
    """Cancel and refine until no term of one side is comparable with a term of the other.

    Returns the leftovers. Path monoids of finite graphs are cancellative, so
    x = y exactly when both leftovers are empty.
    """
    x, y = Counter(x), Counter(y)
    rest_x: Counter = Counter()
    rest_y: Counter = Counter()
    while True:
        common = x & y
        x -= common
        y -= common
        if not x or not y:
            return rest_x + x, rest_y + y
        inner_x = strict_prefix_closure(x)
        inner_y = strict_prefix_closure(y)
        t = min(list(x) + list(y), key=lambda p: (len(p.edges), p))
        side, other_inner, rest = (x, inner_y, rest_x) if t in x else (y, inner_x, rest_y)
        k = side.pop(t)
        if t in other_inner:
            for c in space.children(t):
                side[c] += k
        else:
            # nothing on the other side reaches below t, now or after refinement
            rest[t] += k


def monoid_equal(x: MonoidElement, y: MonoidElement) -> bool:
    _same_space(x, y)
    rx, ry = _settle(x.counter(), y.counter(), x.space)
    return not rx and not ry


def monoid_equal_by_normal_form(x: MonoidElement, y: MonoidElement, cap: int = DEFAULT_DEPTH_CAP) -> bool:
    _same_space(x, y)
    depth = max(x.max_length, y.max_length)
    return normalize(x, depth, cap) == normalize(y, depth, cap)


def prefix_leq_M(x: MonoidElement, y: MonoidElement) -> bool:
    """x ⪯_M y, i.e. x = y + a for some a."""
    _same_space(x, y)
    _, ry = _settle(x.counter(), y.counter(), x.space)
    return not ry


def independent_M(x: MonoidElement, y: MonoidElement) -> bool:
    """No nonzero z lies below both, i.e. no term of x is comparable with a term of y."""
    _same_space(x, y)
    ys = {p for p, _ in y.terms}
    inner_y = strict_prefix_closure(ys)
    for p, _ in x.terms:
        if p in inner_y or any(q in ys for q in p.prefixes()):
            return False
    return True


def is_faithful(space: PathSpace, p: TaggedPath) -> bool:
    """A path is faithful unless it ends in a corridor step (an edge whose origin has out-degree one)."""
    if not p.edges:
        return True
    return len(space.graph.out_edges[space.graph.origin(p.edges[-1])]) != 1


@dataclass(frozen=True)
class GraphMonoidElement:
    """Element of {0} ∪ Z/(n-1) for the G_{a,n} family; ``value`` 0 is zero, else 1..n-1."""

    modulus: int
    value: int

    @classmethod
    def from_count(cls, modulus: int, count: int) -> GraphMonoidElement:
        if count < 0:
            raise MonoidError("negative vertex count")
        return cls(modulus, 0 if count == 0 else (count - 1) % modulus + 1)

    def __add__(self, other: GraphMonoidElement) -> GraphMonoidElement:
        if self.modulus != other.modulus:
            raise MonoidError("different graph monoids")
        if self.value == 0:
            return other
        if other.value == 0:
            return self
        return GraphMonoidElement.from_count(self.modulus, self.value + other.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def order(self) -> int:
        """Additive order in the cyclic group; zero has order 1 by convention."""
        if self.value == 0:
            return 1
        return self.modulus // gcd(self.value, self.modulus)


def vertex_class(graph, v: int) -> GraphMonoidElement:
    shape = family_shape(graph)
    if shape is None:
        raise MonoidError("terminus_of only supports G_{a,n} and G_n graphs")
    weight = shape.a if v == shape.root_vertex else 1
    return GraphMonoidElement.from_count(shape.n - 1, weight)


def terminus_of(x: MonoidElement) -> GraphMonoidElement:
    shape = family_shape(x.space.graph)
    if shape is None:
        raise MonoidError("terminus_of only supports G_{a,n} and G_n graphs")
    total = 0
    for p, k in x.terms:
        t = x.space.terminus(p)
        total += k * (shape.a if t == shape.root_vertex else 1)
    return GraphMonoidElement.from_count(shape.n - 1, total)
