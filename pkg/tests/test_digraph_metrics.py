from __future__ import annotations

import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orient_nt.digraph_metrics import (
    INFINITE,
    Orientation,
    all_pairs,
    anchored_ecc,
    ceil_half,
    certify,
    combine,
    diameter,
    distances_from,
    distances_to,
    eccentricities,
    format_or,
    is_strongly_connected,
    parse_or,
    reverse,
    sinks_and_sources,
    to_dot,
)
from orient_nt.errors import (
    IncompatibleOnSharedEdges,
    NotStrong,
    OrientationError,
    OverlapTooLarge,
    ParseError,
)
from orient_nt.generators import random_near_triangulation


def cycle(n: int) -> Orientation:
    return Orientation.from_arcs([(i, i % n + 1) for i in range(1, n + 1)])


def random_orientation(g, rng: random.Random) -> Orientation:
    return Orientation.from_arcs([(a, b) if rng.random() < 0.5 else (b, a) for a, b in g.edges], g.vertices)


def test_directed_cycle_distances():
    d = cycle(5)
    assert distances_from(d, 1) == {1: 0, 2: 1, 3: 2, 4: 3, 5: 4}
    assert distances_to(d, 1)[2] == 4
    assert diameter(d) == 4
    assert anchored_ecc(d, 3) == 4
    assert all(e == (4, 4) for e in eccentricities(d).values())


def test_all_pairs_matches_single_source():
    d = cycle(4)
    ap = all_pairs(d)
    assert ap[2] == distances_from(d, 2)
    assert sorted(ap) == [1, 2, 3, 4]


def test_not_strong_gives_infinite_and_names_sink():
    d = Orientation.from_arcs([(1, 2), (3, 2), (1, 3)])
    assert not is_strongly_connected(d)
    assert diameter(d) == INFINITE
    assert sinks_and_sources(d) == ([2], [1])
    with pytest.raises(NotStrong):
        anchored_ecc(d, 1)
    assert eccentricities(d)[2] == (INFINITE, 2) or eccentricities(d)[2][0] == INFINITE


def test_orientation_rejects_double_direction_and_stray_vertices():
    with pytest.raises(OrientationError):
        Orientation.from_arcs([(1, 2), (2, 1)])
    with pytest.raises(OrientationError):
        Orientation(frozenset({(1, 9)}), frozenset({1, 2}))


def test_check_covers(k4):
    good = Orientation.of(k4, [(a, b) for a, b in k4.edges])
    assert good.edges == frozenset(k4.edges)
    with pytest.raises(OrientationError, match="no direction"):
        Orientation.of(k4, list(k4.edges)[1:])


def test_direction_and_reverse():
    d = cycle(3)
    assert d.direction(2, 1) == (1, 2)
    r = reverse(d)
    assert r.direction(1, 2) == (2, 1)
    with pytest.raises(OrientationError):
        d.direction(1, 7)


def test_combine_agrees_or_reverses():
    a = Orientation.from_arcs([(1, 2), (2, 3), (3, 1)])
    b = Orientation.from_arcs([(1, 3), (3, 4), (4, 1)])  # disagrees on 1-3
    c = combine(a, b)
    assert (3, 1) in c.arcs and (4, 3) in c.arcs and len(c.arcs) == 5
    with pytest.raises(IncompatibleOnSharedEdges):
        combine(a, b, allow_reverse=False)
    same = Orientation.from_arcs([(3, 1), (1, 4), (4, 3)])
    assert combine(a, same).arcs == a.arcs | same.arcs


def test_combine_mixed_overlap_fails():
    a = Orientation.from_arcs([(1, 2), (2, 3), (3, 1)])
    b = Orientation.from_arcs([(1, 2), (3, 2), (1, 3)])
    with pytest.raises(OverlapTooLarge):
        combine(a, b)


def test_restrict_and_relabel():
    d = cycle(4)
    assert d.restrict([1, 2, 3]).arcs == {(1, 2), (2, 3)}
    assert d.relabel({1: 5, 2: 6, 3: 7, 4: 8}).direction(5, 6) == (5, 6)


def test_ceil_half():
    assert [ceil_half(n) for n in range(1, 8)] == [1, 1, 2, 2, 3, 3, 4]


def test_certificate_report_and_json():
    cert = certify(cycle(3), trace=["exact n=3 diameter=2"])
    assert cert.within_bound and cert.recheck()
    assert cert.report_lines()[:5] == ["n=3", "diameter=2", "bound=2", "strong=true", "exception=false"]
    assert cert.report_lines()[-1] == "trace: exact n=3 diameter=2"
    payload = json.loads(cert.to_json())
    assert payload["diameter"] == 2 and payload["strong"] is True
    assert payload["arcs"] == [[1, 2], [2, 3], [3, 1]]
    assert cert.to_json() == certify(cycle(3), trace=["exact n=3 diameter=2"]).to_json()


def test_certificate_detects_tampering():
    cert = certify(cycle(5))
    assert not cert.within_bound  # 4 > 3
    cert.diameter = 3
    assert not cert.recheck()
    bad = certify(Orientation.from_arcs([(1, 2), (1, 3), (2, 3)]))
    assert bad.report_lines()[1] == "diameter=inf" and not bad.strongly_connected
    assert json.loads(bad.to_json())["diameter"] is None


def test_or_round_trip(k4):
    d = Orientation.of(k4, list(k4.edges))
    assert parse_or(format_or(d), k4) == d
    ids = {v: v + 100 for v in k4.vertices}
    assert "101 102" in format_or(d, ids)


@pytest.mark.parametrize("text, needle", [
    ("1 2 3\n", "expected 'tail head'"),
    ("1 x\n", "non-integer"),
    ("2 2\n", "loop"),
    ("1 2\n2 1\n", "oriented twice"),
])
def test_or_parse_errors(text, needle):
    with pytest.raises(ParseError, match=needle) as info:
        parse_or(text)
    assert info.value.line is not None


def test_or_parse_against_graph(k4):
    lines = format_or(Orientation.of(k4, list(k4.edges))).splitlines()
    with pytest.raises(ParseError, match="missing from orientation"):
        parse_or("\n".join(lines[:-1]), k4)
    with pytest.raises(ParseError, match="not an edge"):
        parse_or("1 2\n1 9\n", k4)


def test_dot_export():
    dot = to_dot(cycle(3), name="C3", highlight=[2])
    assert dot.startswith("digraph C3 {")
    assert "  1 -> 2;" in dot and "fillcolor" in dot
    assert dot.rstrip().endswith("}")


@settings(max_examples=40, deadline=None)
@given(n=st.integers(3, 25), seed=st.integers(0, 10_000), bias=st.floats(0, 1))
def test_diameter_agrees_with_networkx(n, seed, bias):
    g = random_near_triangulation(n, seed, bias)
    d = random_orientation(g, random.Random(seed))
    dg = nx.DiGraph(list(d.arcs))
    dg.add_nodes_from(d.vertices)
    if nx.is_strongly_connected(dg):
        assert diameter(d) == nx.diameter(dg)
        v = min(d.vertices)
        want = max(max(nx.single_source_shortest_path_length(dg, v).values()),
                   max(nx.single_source_shortest_path_length(dg.reverse(), v).values()))
        assert anchored_ecc(d, v) == want
    else:
        assert diameter(d) == INFINITE
    assert is_strongly_connected(d) == nx.is_strongly_connected(dg)
