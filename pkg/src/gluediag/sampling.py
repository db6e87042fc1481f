"""Random bases, shifts and diagrams for property tests.

Every sampler takes an explicit ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from collections import defaultdict

from .diagram import GluingDiagram, blocking_relation
from .graphs import R, V, make_G_an, make_graph
from .paths import PathSpace, TaggedPath, eps, expand_at
from .shifts import Shift


def random_basis(space: PathSpace, rng: random.Random, expansions: int,
                 max_length: int | None = None) -> tuple[list[TaggedPath], int]:
    """Expand the trivial basis at random places; returns (basis, number of expansions done).

    Stops early when no element can be expanded within ``max_length``.
    """
    basis = space.trivial_basis()
    done = 0
    for _ in range(expansions):
        options = [p for p in basis if space.is_regular(p)
                   and (max_length is None or len(p.edges) < max_length)]
        if not options:
            break
        basis = expand_at(space, basis, rng.choice(options))
        done += 1
    return basis, done


def random_bijection(space: PathSpace, dom: list[TaggedPath], cod: list[TaggedPath],
                     rng: random.Random) -> dict[TaggedPath, TaggedPath] | None:
    """A random terminus-maintaining bijection, or None if the termini do not match up."""
    groups: dict[int, list[TaggedPath]] = defaultdict(list)
    for q in cod:
        groups[space.terminus(q)].append(q)
    for g in groups.values():
        rng.shuffle(g)
    out = {}
    for p in dom:
        g = groups.get(space.terminus(p))
        if not g:
            return None
        out[p] = g.pop()
    if any(groups.values()):
        return None
    return out


def random_full_shift(space: PathSpace, rng: random.Random, max_length: int = 2,
                      max_expansions: int = 6) -> Shift:
    """A random element of the full group: two equally big bases and a bijection."""
    while True:
        k = rng.randint(0, max_expansions)
        dom, kd = random_basis(space, rng, k, max_length)
        cod, kc = random_basis(space, rng, kd, max_length)
        if kc != kd:
            continue
        f = random_bijection(space, dom, cod, rng)
        if f is not None:
            return Shift(space, f)


def random_partition(items: list, parts: int, size: int, rng: random.Random) -> list[list]:
    items = list(items)
    rng.shuffle(items)
    return [sorted(items[i * size:(i + 1) * size]) for i in range(parts)]


def random_family_diagram(rng: random.Random, n_choices=(2, 3), ab_choices=(1, 2, 3),
                          l_max: int = 3) -> GluingDiagram:
    """A random valid rooted diagram from G_{a,n} to G_{b,n} with x_v = l·v and x_R = [R].

    B_v comes from l random expansions of the l empty paths, split into n
    blocks of l with random labels; B_R from random expansions of {ε_R}
    reaching size l·a, split into a blocks.
    """
    while True:
        n = rng.choice(n_choices)
        a = rng.choice(ab_choices)
        b = rng.choice(ab_choices)
        ls = [l for l in range(1, l_max + 1) if l * a >= b and (l * a - b) % (n - 1) == 0]
        if ls:
            break
    l = rng.choice(ls)
    k = (l * a - b) // (n - 1)
    src, tgt = make_G_an(a, n), make_G_an(b, n)
    vspace = PathSpace(tgt, (V,) * l)
    bv, _ = random_basis(vspace, rng, l)
    blocks = []
    for part in random_partition(bv, n, l, rng):
        labels = list(range(l))
        rng.shuffle(labels)
        blocks.append(dict(zip(part, labels)))
    rspace = PathSpace.rooted(tgt)
    br = expand_at(rspace, rspace.trivial_basis(), eps(0))
    for _ in range(k):
        br = expand_at(rspace, br, rng.choice(br))
    for part in random_partition(br, a, l, rng):
        labels = list(range(l))
        rng.shuffle(labels)
        blocks.append(dict(zip(part, labels)))
    return GluingDiagram(src, tgt, ((V,) * l, (R,)), tuple(blocks), {eps(0): 0})


def random_unblocked_member(d: GluingDiagram, rng: random.Random) -> tuple[int, int] | None:
    rel = blocking_relation(d)
    options = [(w, u) for w in range(d.source.vertex_count) for u in range(len(d.x[w]))
               if (w, u) not in rel and d.target.out_edges[d.x[w][u]]]
    return rng.choice(options) if options else None


def two_cycle_diagram() -> GluingDiagram:
    """A diagram whose two members at v block each other.

    Source: R -> v plus one loop at v. Target: G_{1,2}. The loop's block is
    {ε_0, ε_1} with swapped labels, so the members form a blocking 2-cycle at
    a vertex that is not a sink.
    """
    src = make_graph(2, [(V, V), (R, V)], root=R)
    tgt = make_G_an(1, 2)
    d0 = 2  # the root edge of G_{1,2}
    loop = {eps(0): 1, eps(1): 0}
    down = {TaggedPath(0, (d0, 0)): 0, TaggedPath(0, (d0, 1)): 1}
    return GluingDiagram(src, tgt, ((V, V), (R,)), (loop, down), {eps(0): 0})
