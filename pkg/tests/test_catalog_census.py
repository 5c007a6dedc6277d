from __future__ import annotations

import json
import random

import pytest

from orient_nt import catalog
from orient_nt.catalog import NAMES, Catalog, dumps, load, loads
from orient_nt.census import (
    EXPECTED_EXCEPTIONS,
    check_exception_counts,
    cross_check_enumeration,
    exceptions,
    read_census_tsv,
    write_census,
)
from orient_nt.digraph_metrics import anchored_ecc, ceil_half, diameter, parse_or
from orient_nt.errors import CensusMismatch
from orient_nt.plane_graph import is_maximal_outerplanar, parse_pg, relabel

EXPECTED_OD = {"K4minus": 3, "K4": 3, "W5": 4, "G6_1": 4, "G6_2": 4, "G6_3": 4, "G8_1": 5}


def test_census_finds_the_seven(census8):
    assert len(census8) == 315
    found = exceptions(census8)
    assert len(found) == 7
    check_exception_counts(census8)
    assert sorted(r.oriented_diameter for r in found) == [3, 3, 4, 4, 4, 4, 5]
    assert all(r.oriented_diameter == r.bound + 1 for r in found)
    assert not any(r.exhausted for r in census8)


def test_census_witnesses_attain_their_values(census8):
    for r in census8:
        assert diameter(r.witness) == r.oriented_diameter


def test_exception_count_check_rejects_partial(census8):
    with pytest.raises(CensusMismatch):
        check_exception_counts([r for r in census8 if r.n <= 6])
    assert EXPECTED_EXCEPTIONS == {4: 2, 6: 4, 8: 1}


def test_cross_check_small():
    assert cross_check_enumeration(5) == {3: (1, 1), 4: (2, 2), 5: (4, 4)}


def test_write_and_read_census(tmp_path, census8):
    small = [r for r in census8 if r.n <= 5]
    tsv = write_census(small, tmp_path)
    rows = read_census_tsv(tsv)
    assert list(rows[0]) == ["id", "n", "m", "oriented_diameter", "bound", "exception"]
    assert [r["id"] for r in rows] == [r.id for r in small]
    assert sum(r["exception"] == "true" for r in rows) == 2
    g = parse_pg((tmp_path / f"{small[0].id}.pg").read_text())
    d = parse_or((tmp_path / f"{small[0].id}.or").read_text(), g)
    assert diameter(d) == small[0].oriented_diameter


def test_catalog_entries(exceptions_catalog):
    assert [e.name for e in exceptions_catalog] == list(NAMES)
    for e in exceptions_catalog:
        assert e.exact_od == EXPECTED_OD[e.name] == ceil_half(e.n) + 1
        assert diameter(e.optimal_orientation) == e.exact_od
        assert set(e.anchors) == set(e.graph.vertices)
        for v, a in e.anchors.items():
            assert diameter(a.orientation) == e.exact_od
            assert anchored_ecc(a.orientation, v) == a.ecc
    assert is_maximal_outerplanar(exceptions_catalog["K4minus"].graph)
    assert is_maximal_outerplanar(exceptions_catalog["G6_1"].graph)
    assert is_maximal_outerplanar(exceptions_catalog["G6_2"].graph)
    w5 = exceptions_catalog["W5"].graph
    assert sorted(w5.degree(v) for v in w5.vertices) == [3, 3, 3, 3, 3, 5]


def test_interior_anchors(exceptions_catalog):
    for name in ("K4", "G6_3"):
        e = exceptions_catalog[name]
        a = e.interior_anchor()
        assert a is not None and a.ecc == e.n // 2
    assert exceptions_catalog["K4minus"].interior_anchor() is None


def test_match_is_relabelling_invariant(exceptions_catalog):
    for e in exceptions_catalog:
        vs = list(e.graph.vertices)
        perm = [v + 50 for v in vs]
        random.Random(len(vs)).shuffle(perm)
        g = relabel(e.graph, dict(zip(vs, perm)))
        hit, d = exceptions_catalog.orientation_for(g)
        assert hit.name == e.name and diameter(d) == e.exact_od
        v = perm[0]
        _, da = exceptions_catalog.orientation_for(g, anchor=v)
        assert anchored_ecc(da, v) == hit.anchors[vs[0]].ecc


def test_match_misses_non_exceptions(exceptions_catalog, census8):
    fine = next(r for r in census8 if r.n == 8 and not r.exception)
    assert exceptions_catalog.match(fine.graph) is None
    with pytest.raises(KeyError):
        exceptions_catalog.orientation_for(fine.graph)


def test_json_round_trip_reverifies(exceptions_catalog):
    text = dumps(exceptions_catalog.entries)
    again = loads(text)
    assert [e.canonical_form for e in again] == [e.canonical_form for e in exceptions_catalog]


def test_tampered_cache_is_rejected(exceptions_catalog):
    data = json.loads(dumps(exceptions_catalog.entries))
    data["entries"][0]["exact_od"] = 2
    with pytest.raises(CensusMismatch):
        loads(json.dumps(data))
    data = json.loads(dumps(exceptions_catalog.entries))
    data["version"] = 99
    with pytest.raises(CensusMismatch):
        loads(json.dumps(data))


def test_cache_file_round_trip(tmp_path, exceptions_catalog):
    path = tmp_path / "x.cat"
    catalog.save(exceptions_catalog.entries, path)
    assert [e.name for e in load(path)] == list(NAMES)
    assert catalog.cache_path().name == "exceptions.cat"


def test_corrupt_cache_is_rebuilt(tmp_path, monkeypatch, exceptions_catalog):
    path = tmp_path / "bad.cat"
    path.write_text("{not json")
    monkeypatch.setattr(catalog, "bootstrap", lambda records=None: exceptions_catalog.entries)
    entries = load(path)
    assert len(entries) == 7
    assert loads(path.read_text())[0].name == "K4minus"


def test_default_catalog_uses_env_cache():
    cat = catalog.default_catalog()
    assert isinstance(cat, Catalog) and len(cat) == 7
    assert catalog.cache_path().exists()
