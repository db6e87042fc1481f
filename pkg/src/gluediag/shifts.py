"""Shifts: terminus-maintaining bijections between prefix-free sets.

A shift acts on every path below its domain by prefix replacement,
p·r ↦ map(p)·r. The reduced form collapses sibling families until none
remain; two shifts act identically exactly when their reduced forms agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .paths import (PathSpace, TaggedPath, is_basis, is_independent, prefix_in,
                    strict_prefix_closure)


class ShiftError(ValueError):
    pass


@dataclass(frozen=True)
class Shift:
    space: PathSpace
    mapping: Mapping[TaggedPath, TaggedPath] = field(hash=False)

    def __post_init__(self):
        pairs = dict(sorted(self.mapping.items()))
        object.__setattr__(self, "mapping", pairs)
        for p, q in pairs.items():
            self.space.check(p)
            self.space.check(q)
            if self.space.terminus(p) != self.space.terminus(q):
                raise ShiftError(f"{p} and {q} have different termini")
        if len(set(pairs.values())) != len(pairs):
            raise ShiftError("shift map is not injective")
        if not is_independent(pairs) or not is_independent(pairs.values()):
            raise ShiftError("domain and codomain must be independent")

    @property
    def domain(self) -> list[TaggedPath]:
        return list(self.mapping)

    @property
    def codomain(self) -> list[TaggedPath]:
        return sorted(self.mapping.values())

    def __len__(self) -> int:
        return len(self.mapping)

    def apply(self, x: TaggedPath) -> TaggedPath | None:
        """Image of a path below the domain, or None when x is not below it."""
        p = prefix_in(x, self.mapping)
        if p is None:
            return None
        return self.mapping[p].concat(x.strip(p))

    def inverse(self) -> Shift:
        return Shift(self.space, {q: p for p, q in self.mapping.items()})

    def is_full(self) -> bool:
        return is_basis(self.space, self.domain) and is_basis(self.space, self.codomain)

    def pairs(self) -> list[tuple[TaggedPath, TaggedPath]]:
        return list(self.mapping.items())


def elementary(space: PathSpace, p: TaggedPath, q: TaggedPath) -> Shift:
    return Shift(space, {p: q})


def identity(space: PathSpace, paths: Iterable[TaggedPath] | None = None) -> Shift:
    paths = space.trivial_basis() if paths is None else list(paths)
    return Shift(space, {p: p for p in paths})


def refine(s: Shift, p: TaggedPath) -> Shift:
    if p not in s.mapping:
        raise ShiftError(f"{p} is not in the domain")
    edges = s.space.out_edges(p)
    if not edges:
        raise ShiftError(f"cannot refine at {p}: sink terminus")
    q = s.mapping[p]
    pairs = {a: b for a, b in s.mapping.items() if a != p}
    for e in edges:
        pairs[p.extend(e)] = q.extend(e)
    return Shift(s.space, pairs)


def reduce(s: Shift) -> Shift:
    space = s.space
    pairs = dict(s.mapping)
    changed = True
    while changed:
        changed = False
        parents = sorted({p.parent for p in pairs if p.edges}, key=lambda p: (-len(p.edges), p))
        for par in parents:
            kids = space.children(par)
            if not all(k in pairs for k in kids):
                continue
            images = [pairs[k] for k in kids]
            if not all(img.edges and img.edges[-1] == k.edges[-1] for img, k in zip(images, kids)):
                continue
            heads = {img.parent for img in images}
            if len(heads) != 1:
                continue
            for k in kids:
                del pairs[k]
            pairs[par] = heads.pop()
            changed = True
    return Shift(space, pairs)


def shifts_equal(s: Shift, t: Shift) -> bool:
    if s.space != t.space:
        return False
    return reduce(s).mapping == reduce(t).mapping


def compose(s: Shift, t: Shift) -> Shift:
    """s ∘ t (apply t first) on the common refinement, restricted to the overlap."""
    if s.space != t.space:
        raise ShiftError("shifts over different path spaces")
    space = s.space
    inner = strict_prefix_closure(s.mapping)
    out: dict[TaggedPath, TaggedPath] = {}
    pending = list(t.mapping.items())
    while pending:
        a, b = pending.pop()
        c = prefix_in(b, s.mapping)
        if c is not None:
            out[a] = s.mapping[c].concat(b.strip(c))
        elif b in inner:
            for e in space.out_edges(b):
                pending.append((a.extend(e), b.extend(e)))
        # otherwise b's cylinder misses the domain of s and is dropped
    if not out:
        raise ShiftError("shifts have disjoint cylinders and do not compose")
    return reduce(Shift(space, out))

