"""Enabling witnesses and the shift-surjectivity certificate.

A witness for the pair (p, q) consists of families D_p, D_q of source paths
whose blocks exactly cover p and q, plus a terminus-maintaining bijection
ν: D_p -> D_q under which every block below p, translated from p to q, is
the partner block below q with the same labels.

The search starts from the coarsest families and refines only blocks that
fail to match. A block is refined when it is coarser than (or merely
different from) an overlapping unmatched block on the other side, which is
safe because witnesses stay witnesses under expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .diagram import DEFAULT_NODE_BUDGET, BlockTable, GluingDiagram, is_surjective
from .paths import TaggedPath, comparable, covers_exactly, eps, internal_paths, is_independent

DEFAULT_DEPTH = 6


class EnablingError(ValueError):
    pass


@dataclass(frozen=True)
class EnablingWitness:
    p: TaggedPath
    q: TaggedPath
    p_origin: int | None
    q_origin: int | None
    nu: Mapping[TaggedPath, TaggedPath] = field(hash=False)
    search_depth: int = 0  # refinement levels below the coarsest cover families

    @property
    def max_length(self) -> int:
        """Longest source path used in D_p or D_q."""
        return max((len(r.edges) for r in list(self.nu) + list(self.nu.values())), default=0)

    @property
    def d_p(self) -> list[TaggedPath]:
        return sorted(self.nu)

    @property
    def d_q(self) -> list[TaggedPath]:
        return sorted(self.nu.values())


def _cover_family(table: BlockTable, p: TaggedPath, node_budget: int) -> list[TaggedPath] | None:
    """Least source paths whose (nonempty) blocks lie entirely below p."""
    family = []
    stack = [eps(0)]
    nodes = 0
    while stack:
        nodes += 1
        if nodes > node_budget:
            return None
        r = stack.pop()
        blk = table.block(r)
        if not blk:
            continue
        if all(p.is_prefix_of(c) for c in blk):
            family.append(r)
        elif any(comparable(c, p) for c in blk):
            stack.extend(table.source_space.children(r))
    return sorted(family)


def _signature(table: BlockTable, r: TaggedPath, p: TaggedPath) -> frozenset:
    return frozenset((c.strip(p), lab) for c, lab in table.block(r).items())


def _region(sig: frozenset) -> list[tuple[int, ...]]:
    return [rel for rel, _ in sig]


def _strictly_above(a: list, b: list) -> bool:
    return any(len(x) < len(y) and y[:len(x)] == x for x in a for y in b)


def _overlap(a: list, b: list) -> bool:
    return any(x == y[:len(x)] or y == x[:len(y)] for x in a for y in b)


def _refine(table: BlockTable, family: dict[TaggedPath, int], targets: set,
            depth_bound: int) -> dict[TaggedPath, int] | None:
    out = {}
    for r, level in family.items():
        if r not in targets:
            out[r] = level
            continue
        if level >= depth_bound:
            return None
        for c in table.source_space.children(r):
            if table.block(c):
                out[c] = level + 1
    return dict(sorted(out.items()))


def find_enabling_witness(d: GluingDiagram, p: TaggedPath, q: TaggedPath, depth_bound: int = DEFAULT_DEPTH,
                          p_origin: int | None = None, q_origin: int | None = None,
                          node_budget: int = DEFAULT_NODE_BUDGET) -> EnablingWitness | None:
    """Search for a witness that the shift from p to q lies in the image.

    ``p_origin``/``q_origin`` select floating tables at those source vertices;
    None means the rooted table. ``depth_bound`` limits how many levels the
    search may refine below the coarsest exact-cover families of p and q;
    ``node_budget`` limits the walk that finds those families. Returns None
    when nothing turns up within the limits.
    """
    tp, tq = d.table(p_origin), d.table(q_origin)
    tp.target_space.check(p)
    tq.target_space.check(q)
    if tp.target_space.terminus(p) != tq.target_space.terminus(q):
        raise EnablingError(f"{p} and {q} end at different vertices")
    base_p = _cover_family(tp, p, node_budget)
    base_q = _cover_family(tq, q, node_budget)
    if base_p is None or base_q is None:
        return None
    dp = dict.fromkeys(base_p, 0)
    dq = dict.fromkeys(base_q, 0)
    while True:
        sig_p = {s: _signature(tp, s, p) for s in dp}
        sig_q = {t: _signature(tq, t, q) for t in dq}
        index = {}
        for t in dq:
            index.setdefault((sig_q[t], tq.source_terminus(t)), t)
        nu: dict[TaggedPath, TaggedPath] = {}
        used = set()
        for s in dp:
            t = index.get((sig_p[s], tp.source_terminus(s)))
            if t is not None and t not in used:
                nu[s] = t
                used.add(t)
        open_p = [s for s in dp if s not in nu]
        open_q = [t for t in dq if t not in used]
        if not open_p and not open_q:
            levels = list(dp.values()) + list(dq.values())
            return EnablingWitness(p, q, p_origin, q_origin, nu, max(levels, default=0))
        grow_p: set = set()
        grow_q: set = set()
        for s in open_p:
            rs = _region(sig_p[s])
            for t in open_q:
                rt = _region(sig_q[t])
                if not _overlap(rs, rt):
                    continue
                s_coarse = _strictly_above(rs, rt)
                t_coarse = _strictly_above(rt, rs)
                if s_coarse or not t_coarse:
                    grow_p.add(s)
                if t_coarse or not s_coarse:
                    grow_q.add(t)
        if not grow_p and not grow_q:
            return None
        dp = _refine(tp, dp, grow_p, depth_bound)
        dq = _refine(tq, dq, grow_q, depth_bound)
        if dp is None or dq is None:
            return None


def check_enabling_witness(d: GluingDiagram, w: EnablingWitness) -> list[str]:
    """Re-check every clause of the definition from scratch."""
    tp, tq = d.table(w.p_origin), d.table(w.q_origin)
    problems = []
    if len(set(w.nu.values())) != len(w.nu):
        problems.append("ν is not injective")
    for fam, table, name in ((w.d_p, tp, "D_p"), (w.d_q, tq, "D_q")):
        if not all(table.source_space.is_valid(r) for r in fam):
            problems.append(f"{name} contains an invalid source path")
            return problems
        if not is_independent(fam):
            problems.append(f"{name} is not independent")
    for fam, table, target, name in ((w.d_p, tp, w.p, "p"), (w.d_q, tq, w.q, "q")):
        union = [c for r in fam for c in table.block(r)]
        if len(set(union)) != len(union) or not covers_exactly(table.target_space, union, [target]):
            problems.append(f"blocks of D_{name} do not exactly cover {name}")
    for s, t in w.nu.items():
        if tp.source_terminus(s) != tq.source_terminus(t):
            problems.append(f"ν({s}) = {t} is not terminus-maintaining")
        partner = tq.block(t)
        for c, lab in tp.block(s).items():
            if not w.p.is_prefix_of(c):
                problems.append(f"{c} in C_{s} is not below p")
                continue
            image = w.q.concat(c.strip(w.p))
            if partner.get(image) != lab:
                problems.append(f"{c} in C_{s} has no matching partner in C_{t}")
    return problems


def lift_witness(d: GluingDiagram, p1: TaggedPath, q1: TaggedPath, w: EnablingWitness,
                 p0: TaggedPath, q0: TaggedPath) -> EnablingWitness:
    """Turn a floating witness for (γ_{p1}(p0), γ_{q1}(q0)) into a rooted one for (p0, q0)."""
    nu = {p1.concat(s.edges): q1.concat(t.edges) for s, t in w.nu.items()}
    return EnablingWitness(p0, q0, None, None, nu)


def translate_down(d: GluingDiagram, p1: TaggedPath, p0: TaggedPath) -> TaggedPath:
    """γ_{p1}(p0): rewrite a path below C_{p1} as a path over x_{T(p1)}."""
    blk = d.table().block(p1)
    for c, lab in blk.items():
        if c.is_prefix_of(p0):
            return TaggedPath(lab, p0.strip(c))
    raise EnablingError(f"{p0} is not below C_{p1}")


def lower_witness(d: GluingDiagram, p1: TaggedPath, q1: TaggedPath, w: EnablingWitness) -> EnablingWitness:
    """Turn a rooted witness for (p0, q0), with D's below p1 and q1, into a floating one."""
    nu = {}
    for s, t in w.nu.items():
        if not (p1.is_prefix_of(s) and q1.is_prefix_of(t)):
            raise EnablingError("witness families are not below p1 and q1")
        nu[TaggedPath(0, s.strip(p1))] = TaggedPath(0, t.strip(q1))
    p_origin = d.source_root_space.terminus(p1)
    q_origin = d.source_root_space.terminus(q1)
    return EnablingWitness(translate_down(d, p1, w.p), translate_down(d, q1, w.q), p_origin, q_origin, nu)


@dataclass(frozen=True)
class ShiftSurjectivityReport:
    status: str  # "yes" or "unknown"
    witnesses: tuple[EnablingWitness, ...] = ()
    missing: tuple[tuple[tuple[int, TaggedPath], tuple[int, TaggedPath]], ...] = ()

    def __bool__(self) -> bool:
        return self.status == "yes"


def internal_pairs(d: GluingDiagram) -> list[tuple[tuple[int, TaggedPath], tuple[int, TaggedPath]]]:
    """Pairs of internal paths of the B_v with a common terminus in H."""
    located = []
    for v in range(d.source.vertex_count):
        space = d.member_space(v)
        for p in internal_paths(d.basis_at(v)):
            located.append((v, p, space.terminus(p)))
    return [((v, p), (w, q)) for v, p, tp in located for w, q, tq in located if tp == tq]


def is_shift_surjective(d: GluingDiagram, depth_bound: int = DEFAULT_DEPTH,
                        node_budget: int = DEFAULT_NODE_BUDGET, check_surjective: bool = True) -> ShiftSurjectivityReport:
    if check_surjective and not is_surjective(d, node_budget):
        raise EnablingError("diagram is not (certifiably) surjective")
    found = []
    missing = []
    for (v, p), (w, q) in internal_pairs(d):
        wit = find_enabling_witness(d, p, q, depth_bound, p_origin=v, q_origin=w, node_budget=node_budget)
        if wit is None:
            missing.append(((v, p), (w, q)))
        else:
            found.append(wit)
    return ShiftSurjectivityReport("yes" if not missing else "unknown", tuple(found), tuple(missing))
