"""gluediag command line.

Exit codes: 0 ok, 1 domain failure (invalid diagram, failed certificate,
impossible construction), 2 I/O or parse error. GLUE_BUDGET, when set,
replaces the default node budget of the witness searches.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import serialize as ser
from .diagram import (DEFAULT_NODE_BUDGET, check_splitting_witness, gamma_shift, is_injective,
                      is_surjective, is_unblocked, validate)
from .dot import diagram_to_dot, graph_to_dot
from .enabling import check_enabling_witness, internal_pairs, is_shift_surjective
from .euclid import build_isomorphism, default_depth, trivial_diagram
from .moves import MoveRecord, add_diagram, apply_move, expand_diagram
from .shifts import compose

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("GLUE_BUDGET")
    if env is None:
        return DEFAULT_NODE_BUDGET
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"GLUE_BUDGET must be an integer, got {env!r}") from None
    if value < 1:
        raise UsageError("GLUE_BUDGET must be positive")
    return value


def _emit(obj, out: str | None) -> None:
    if out is None:
        sys.stdout.write(ser.dumps(obj))
    else:
        ser.write_json(out, obj)


def _sibling(out: str, suffix: str) -> str:
    p = Path(out)
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    return str(p.with_name(stem + suffix))


# -- commands --------------------------------------------------------------------------

def cmd_validate(args) -> int:
    d = ser.diagram_from_json(ser.read_json(args.diagram), validate=False)
    problems = validate(d)
    for msg in problems:
        print(f"violation: {msg}")
    print("valid" if not problems else f"invalid ({len(problems)} violations)")
    return EXIT_OK if not problems else EXIT_DOMAIN


def cmd_build_euclid(args) -> int:
    budget = _budget(args)
    iso = build_isomorphism(args.a, args.n, args.b, budget, args.depth)
    ser.write_json(args.out, ser.diagram_to_json(iso.diagram))
    trace_path = args.trace or _sibling(args.out, ".trace.json")
    ser.write_json(trace_path, ser.trace_to_json(iso.trace, iso.moves))
    cert_path = args.cert or _sibling(args.out, ".cert.json")
    ser.write_json(cert_path, ser.isomorphism_certificate(iso, budget))
    if args.dot:
        Path(args.dot).write_text(diagram_to_dot(iso.diagram), encoding="utf-8")
    print(f"l={iso.solution.l} k={iso.solution.k}")
    print("trace: " + _trace_line(iso.trace))
    print(f"injective: yes, surjective: {iso.surjectivity.status}, "
          f"shift-surjective: {iso.shift_surjectivity.status} "
          f"({len(iso.shift_surjectivity.witnesses)} witnesses, depth {iso.depth_bound})")
    return EXIT_OK


def cmd_apply(args) -> int:
    d = ser.diagram_from_json(ser.read_json(args.diagram))
    obj = ser.read_json(args.shift)
    space = None if "space" in obj else d.source_root_space
    s = ser.shift_from_json(obj, space)
    if s.space != d.source_root_space:
        print("error: shift does not live over the rooted source graph of the diagram", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(ser.shift_to_json(gamma_shift(d, s)), args.out)
    return EXIT_OK


def cmd_compose(args) -> int:
    s = ser.shift_from_json(ser.read_json(args.first))
    t = ser.shift_from_json(ser.read_json(args.second))
    _emit(ser.shift_to_json(compose(s, t)), args.out)
    return EXIT_OK


def cmd_move(args) -> int:
    d = ser.diagram_from_json(ser.read_json(args.diagram))
    if args.expand is not None:
        v, u = args.expand
        out = expand_diagram(d, v, u)
        record = ser.move_to_json(MoveRecord("expand", vertex=v, member=u))
    else:
        out, rec = add_diagram(d)
        record = ser.move_to_json(rec)
    ser.write_json(args.out, ser.diagram_to_json(out))
    if args.log:
        ser.write_json(args.log, [record])
    else:
        print(json.dumps(record, sort_keys=True))
    return EXIT_OK


def _recheck(d, cert: dict) -> list[str]:
    """Re-verify a stored certificate against the diagram, trusting nothing in it."""
    problems = []
    if not is_injective(d):
        problems.append("diagram is not injective")
    surj = ser._get(cert, "surjective")
    if not surj.get("unblocked") or not is_unblocked(d):
        problems.append("diagram is blocked")
    seen = set()
    for obj in ser._get(surj, "witnesses"):
        w = ser.splitting_from_json(obj)
        problems += [f"splitting witness for ({w.vertex}, {w.member}): {m}" for m in check_splitting_witness(d, w)]
        seen.add((w.vertex, w.member))
    for v in range(d.source.vertex_count):
        for u in range(len(d.x[v])):
            if (v, u) not in seen:
                problems.append(f"no splitting witness for member {u} at vertex {v}")
    found = set()
    for obj in ser._get(ser._get(cert, "shiftSurjective"), "witnesses"):
        w = ser.enabling_from_json(obj)
        problems += [f"enabling witness for ({w.p}, {w.q}): {m}" for m in check_enabling_witness(d, w)]
        found.add(((w.p_origin, w.p), (w.q_origin, w.q)))
    for pair in internal_pairs(d):
        if pair not in found:
            (v, p), (w, q) = pair
            problems.append(f"no enabling witness for {p} at {v} and {q} at {w}")
    return problems


def cmd_certify(args) -> int:
    d = ser.diagram_from_json(ser.read_json(args.diagram))
    if args.cert:
        problems = _recheck(d, ser.read_json(args.cert))
        for msg in problems:
            print(f"failed: {msg}")
        print("certificate verified" if not problems else "certificate rejected")
        return EXIT_OK if not problems else EXIT_DOMAIN
    budget = _budget(args)
    depth = args.depth if args.depth is not None else default_depth(d)
    injective = is_injective(d)
    surj = is_surjective(d, budget)
    print(f"injective: {'yes' if injective else 'no'}")
    print(f"surjective: {surj.status}" + ("" if surj.unblocked else " (blocked)"))
    shift = None
    if surj:
        shift = is_shift_surjective(d, depth, budget, check_surjective=False)
        print(f"shift-surjective: {shift.status} ({len(shift.witnesses)} witnesses, "
              f"{len(shift.missing)} missing at depth {depth})")
    else:
        print("shift-surjective: unknown (needs surjectivity first)")
    if args.out and shift is not None:
        ser.write_json(args.out, ser.certificate_to_json(injective, surj, shift, depth, budget))
    return EXIT_OK if injective and surj and shift else EXIT_DOMAIN


def cmd_export_dot(args) -> int:
    obj = ser.read_json(args.file)
    if isinstance(obj, dict) and "blocks" in obj:
        text = diagram_to_dot(ser.diagram_from_json(obj, validate=False))
    else:
        text = graph_to_dot(ser.graph_from_json(obj))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _trace_line(trace) -> str:
    parts = [f"({trace[0].l},{trace[0].n})"]
    for step in trace[1:]:
        parts.append(f"{step.move} -> ({step.l},{step.n})")
    return " -> ".join(parts)


def cmd_show_trace(args) -> int:
    trace, moves = ser.trace_from_json(ser.read_json(args.trace))
    if not trace:
        raise ser.FormatError("empty trace")
    print(_trace_line(trace))
    for m in moves:
        print("  " + json.dumps(ser.move_to_json(m), sort_keys=True))
    if moves:
        d = trivial_diagram(2)
        for m in moves:
            d = apply_move(d, m)
        last = trace[-1]
        ok = len(d.x[0]) == last.l and d.source.edge_count == last.n and not validate(d)
        print(f"replay: {'ok' if ok else 'mismatch'} (l={len(d.x[0])}, n={d.source.edge_count})")
        if not ok:
            return EXIT_DOMAIN
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gluediag", description="Gluing diagrams between shift pseudogroups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram file")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build-euclid", help="construct and certify V_{a,n} -> V_{b,n}")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--depth", type=int, help="enabling-witness depth (default grows with the bases)")
    p.add_argument("--out", required=True)
    p.add_argument("--dot")
    p.add_argument("--trace")
    p.add_argument("--cert")
    p.set_defaults(func=cmd_build_euclid)

    p = sub.add_parser("apply", help="image of a shift under a diagram")
    p.add_argument("diagram")
    p.add_argument("shift")
    p.add_argument("--out")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("compose", help="first ∘ second (second applied first)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("move", help="apply an expansion or addition move")
    p.add_argument("diagram")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--expand", type=int, nargs=2, metavar=("VERTEX", "MEMBER"))
    group.add_argument("--add", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--log")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("certify", help="run or re-check the three certificates")
    p.add_argument("diagram")
    p.add_argument("--cert", help="stored certificate to re-verify")
    p.add_argument("--budget", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("export-dot", help="DOT for a graph or diagram file")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("show-trace", help="print and replay a Euclid trace")
    p.add_argument("trace")
    p.set_defaults(func=cmd_show_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, ser.FormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
