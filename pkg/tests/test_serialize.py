import json

import pytest

from gluediag import serialize as ser
from gluediag.diagram import is_surjective
from gluediag.enabling import is_shift_surjective
from gluediag.euclid import build_isomorphism, build_reachable
from gluediag.graphs import make_G_an, make_G_n
from gluediag.monoid import MonoidElement
from gluediag.paths import PathSpace
from gluediag.sampling import random_family_diagram, random_full_shift
from gluediag.shifts import Shift, reduce

from conftest import P, example_diagram


def roundtrip(obj):
    return json.loads(ser.dumps(obj))


def test_graph_and_space_round_trip():
    for g in (make_G_n(3), make_G_an(4, 5), example_diagram().target):
        assert ser.graph_from_json(roundtrip(ser.graph_to_json(g))) == g
    space = PathSpace(make_G_an(2, 3), (0, 1, 0))
    assert ser.space_from_json(roundtrip(ser.space_to_json(space))) == space


def test_path_text_form():
    assert ser.path_to_json(P(3, 0, tag=2)) == "2:e3.e0"
    assert ser.path_from_json("2:e3.e0") == P(3, 0, tag=2)
    assert ser.path_from_json(ser.path_to_json(P(tag=4))) == P(tag=4)
    for bad in ("", "x:e1", "1:f2", 7, None):
        with pytest.raises(ser.FormatError):
            ser.path_from_json(bad)


def test_monoid_round_trip():
    space = PathSpace(make_G_n(3), (0, 0))
    x = MonoidElement.of(space, {P(0): 2, P(tag=1): 1})
    assert ser.monoid_from_json(roundtrip(ser.monoid_to_json(x)), space) == x


def test_shift_round_trip_and_reduce_on_load(rng):
    space = PathSpace.rooted(make_G_an(2, 3))
    for _ in range(20):
        s = reduce(random_full_shift(space, rng))
        assert ser.shift_from_json(roundtrip(ser.shift_to_json(s))) == s
    refined = Shift(space, {P(3, 0): P(3, 0), P(3, 1): P(3, 1), P(3, 2): P(3, 2), P(4): P(4)})
    loaded = ser.shift_from_json(roundtrip(ser.shift_to_json(refined)))
    assert len(loaded) < len(refined) and loaded == reduce(refined)
    bare = ser.shift_to_json(refined, with_space=False)
    with pytest.raises(ser.FormatError):
        ser.shift_from_json(bare)
    assert ser.shift_from_json(bare, space) == loaded


def test_diagram_round_trip(rng):
    ds = [example_diagram(), build_reachable(3, 5)[0]] + [random_family_diagram(rng) for _ in range(10)]
    for d in ds:
        assert ser.diagram_from_json(roundtrip(ser.diagram_to_json(d))) == d


def test_diagram_load_validates():
    obj = ser.diagram_to_json(example_diagram())
    obj["blocks"]["6"]["gamma"][0] = 9
    with pytest.raises(ValueError):
        ser.diagram_from_json(obj)
    ser.diagram_from_json(obj, validate=False)


def test_trace_round_trip():
    _, trace, moves = build_reachable(5, 3)
    t2, m2 = ser.trace_from_json(roundtrip(ser.trace_to_json(trace, moves)))
    assert t2 == trace and m2 == moves


def test_witness_round_trip():
    d = build_isomorphism(4, 5, 8).diagram
    for w in is_surjective(d).witnesses:
        assert ser.splitting_from_json(roundtrip(ser.splitting_to_json(w))) == w
    for w in is_shift_surjective(d, check_surjective=False).witnesses:
        assert ser.enabling_from_json(roundtrip(ser.enabling_to_json(w))) == w


def test_certificate_is_deterministic():
    a = ser.dumps(ser.isomorphism_certificate(build_isomorphism(4, 5, 8), 1000))
    b = ser.dumps(ser.isomorphism_certificate(build_isomorphism(4, 5, 8), 1000))
    assert a == b
    cert = json.loads(a)
    assert cert["injective"] is True and cert["surjective"]["status"] == "yes"
    assert (cert["l"], cert["k"]) == (3, 1)


def test_workspace(tmp_path, rng):
    ws = ser.Workspace(tmp_path / "ws")
    d, trace, moves = build_reachable(3, 5)
    s = reduce(random_full_shift(PathSpace.rooted(make_G_an(2, 3)), rng))
    ws.save("graph", "g", d.source)
    ws.save("diagram", "d", d)
    ws.save("shift", "s", s)
    ws.save("trace", "t", (trace, moves))
    assert ws.load("graph", "g") == d.source
    assert ws.load("diagram", "d") == d
    assert ws.load("shift", "s") == s
    assert ws.load("trace", "t") == (trace, moves)
    assert ws.names("diagram") == ["d"] and ws.names("graph") == ["g"]
    with pytest.raises(ser.FormatError):
        ws.save("nonsense", "x", 1)
    with pytest.raises(OSError):
        ws.load("graph", "missing")


@pytest.mark.parametrize("obj", [[], {"pairs": 3}, {"pairs": [["0:e0"]]}, "text"])
def test_shift_format_errors(obj):
    with pytest.raises(ser.FormatError):
        ser.shift_from_json(obj, PathSpace.rooted(make_G_n(2)))
