"""The seven small exceptions, taken from the census rather than typed in.

Each entry keeps a plane representative, its canonical form, the exact
oriented diameter, one optimal orientation and, for every vertex ``v``, an
optimal orientation minimising ``anchored_ecc(., v)``.  Entries are cached
as JSON in ``exceptions.cat`` (path from ``ORIENT_NT_CACHE`` if set) and
re-verified on load.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .canonical import canonical_form, isomorphism
from .census import CensusRecord, exceptions, run_census
from .digraph_metrics import Orientation, anchored_ecc, ceil_half, diameter, format_arcs, parse_or
from .errors import CensusMismatch, Infeasible
from .exact_solver import anchored_exact
from .plane_graph import PlaneGraph, format_pg, is_maximal_outerplanar, parse_pg, relabel

NAMES = ("K4minus", "K4", "W5", "G6_1", "G6_2", "G6_3", "G8_1")
CACHE_ENV = "ORIENT_NT_CACHE"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class Anchor:
    vertex: int
    ecc: int
    orientation: Orientation


@dataclass
class CatalogEntry:
    name: str
    graph: PlaneGraph
    canonical_form: str
    exact_od: int
    optimal_orientation: Orientation
    anchors: dict[int, Anchor] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def anchor_pairs(self) -> list[tuple[int, int]]:
        return [(v, a.ecc) for v, a in sorted(self.anchors.items())]

    def interior_anchor(self) -> Anchor | None:
        """Outer degree-3 vertex with an interior neighbour, if the entry has one."""
        inner = self.graph.interior_vertices()
        for v in self.graph.outer_cycle():
            if self.graph.degree(v) == 3 and self.graph.neighbors(v) & inner:
                return self.anchors[v]
        return None


def _is_wheel(g: PlaneGraph) -> bool:
    hubs = [v for v in g.vertices if g.degree(v) == g.n - 1]
    return bool(hubs) and all(g.degree(v) == 3 for v in g.vertices if v != hubs[0])


def _name_entries(recs: list[CensusRecord]) -> dict[str, CensusRecord]:
    by_n: dict[int, list[CensusRecord]] = {}
    for r in recs:
        by_n.setdefault(r.n, []).append(r)
    names: dict[str, CensusRecord] = {}
    for r in by_n.get(4, []):
        names["K4minus" if is_maximal_outerplanar(r.graph) else "K4"] = r
    six = sorted(by_n.get(6, []), key=lambda r: r.form)
    mop = [r for r in six if is_maximal_outerplanar(r.graph)]
    for i, r in enumerate(mop, start=1):
        names[f"G6_{i}"] = r
    for r in six:
        if not is_maximal_outerplanar(r.graph):
            names["W5" if _is_wheel(r.graph) else "G6_3"] = r
    for r in by_n.get(8, []):
        names["G8_1"] = r
    if sorted(names) != sorted(NAMES) or len(recs) != len(NAMES):
        got = {n: len(v) for n, v in sorted(by_n.items())}
        raise CensusMismatch(f"census exceptions per n: {got}; cannot name the seven entries")
    return names


def _anchors(g: PlaneGraph, od: int) -> dict[int, Anchor]:
    out = {}
    for v in g.vertices:
        for bound in range(1, od + 1):
            try:
                value, d = anchored_exact(g, v, bound)
            except Infeasible:
                continue
            if value == od:
                out[v] = Anchor(v, anchored_ecc(d, v), d)
                break
    return out


def _entry(name: str, r: CensusRecord) -> CatalogEntry:
    assert r.oriented_diameter is not None and r.witness is not None
    return CatalogEntry(name, r.graph, r.form, r.oriented_diameter, r.witness,
                        _anchors(r.graph, r.oriented_diameter))


def bootstrap(records: list[CensusRecord] | None = None) -> list[CatalogEntry]:
    """Build the seven entries from a fresh (or supplied) n <= 8 census."""
    recs = exceptions(records if records is not None else run_census(8))
    named = _name_entries(recs)
    return [_entry(name, named[name]) for name in NAMES]


# -------------------------------------------------------------- persistence


def cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "orient_nt" / "exceptions.cat"


def _ids(g: PlaneGraph) -> dict[int, int]:
    return {v: i for i, v in enumerate(g.vertices, start=1)}


def dumps(entries: list[CatalogEntry]) -> str:
    blob = []
    for e in entries:
        ids = _ids(e.graph)
        blob.append({
            "name": e.name,
            "canonical_form": e.canonical_form,
            "exact_od": e.exact_od,
            "pg": format_pg(e.graph),
            "or": format_arcs((ids[u], ids[v]) for u, v in e.optimal_orientation.arcs),
            "anchors": [
                {"vertex": ids[a.vertex], "ecc": a.ecc,
                 "or": format_arcs((ids[u], ids[v]) for u, v in a.orientation.arcs)}
                for _, a in sorted(e.anchors.items())
            ],
        })
    return json.dumps({"version": FORMAT_VERSION, "entries": blob}, indent=1) + "\n"


def loads(text: str) -> list[CatalogEntry]:
    """Parse and fully re-verify a catalog file; raise CensusMismatch if anything is off."""
    data = json.loads(text)
    if data.get("version") != FORMAT_VERSION:
        raise CensusMismatch("catalog file has an unknown version")
    entries = []
    for item in data["entries"]:
        g = parse_pg(item["pg"])
        form = canonical_form(g.adjacency())
        if form != item["canonical_form"]:
            raise CensusMismatch(f"{item['name']}: canonical form does not match the stored graph")
        d = parse_or(item["or"], g)
        od = int(item["exact_od"])
        if diameter(d) != od or od != ceil_half(g.n) + 1:
            raise CensusMismatch(f"{item['name']}: stored orientation does not attain {od}")
        anchors = {}
        for a in item["anchors"]:
            ad = parse_or(a["or"], g)
            if diameter(ad) != od or anchored_ecc(ad, a["vertex"]) != a["ecc"]:
                raise CensusMismatch(f"{item['name']}: anchor {a['vertex']} fails re-verification")
            anchors[a["vertex"]] = Anchor(a["vertex"], a["ecc"], ad)
        entries.append(CatalogEntry(item["name"], g, form, od, d, anchors))
    if [e.name for e in entries] != list(NAMES):
        raise CensusMismatch("catalog file does not hold the seven expected entries")
    return entries


def save(entries: list[CatalogEntry], path: str | os.PathLike | None = None) -> Path:
    p = Path(path) if path is not None else cache_path()
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps(entries))
    return p


def load(path: str | os.PathLike | None = None, *, rebuild: bool = False) -> list[CatalogEntry]:
    """Read the cache, or bootstrap (and try to write the cache) when missing or stale."""
    p = Path(path) if path is not None else cache_path()
    if not rebuild and p.exists():
        try:
            return loads(p.read_text())
        except (CensusMismatch, ValueError, KeyError):
            pass
    entries = bootstrap()
    try:
        save(entries, p)
    except OSError:
        pass
    return entries


class Catalog:
    def __init__(self, entries: list[CatalogEntry]):
        self.entries = list(entries)
        self._by_form = {e.canonical_form: e for e in self.entries}
        self._by_name = {e.name: e for e in self.entries}
        self._sizes = {(e.n, e.graph.m) for e in self.entries}

    def __getitem__(self, name: str) -> CatalogEntry:
        return self._by_name[name]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def match(self, g: PlaneGraph) -> CatalogEntry | None:
        if (g.n, g.m) not in self._sizes:
            return None
        return self._by_form.get(canonical_form(g.adjacency()))

    def match_map(self, g: PlaneGraph) -> tuple[CatalogEntry, dict[int, int]] | None:
        """Entry plus an isomorphism from the entry's vertices onto ``g``'s."""
        e = self.match(g)
        if e is None:
            return None
        mapping = isomorphism(e.graph.adjacency(), g.adjacency())
        assert mapping is not None
        return e, mapping

    def orientation_for(self, g: PlaneGraph, anchor: int | None = None) -> tuple[CatalogEntry, Orientation]:
        """The stored optimal orientation carried onto ``g`` (anchored at ``anchor`` if given)."""
        hit = self.match_map(g)
        if hit is None:
            raise KeyError("graph is not one of the exceptions")
        e, mapping = hit
        if anchor is None:
            return e, e.optimal_orientation.relabel(mapping)
        inv = {b: a for a, b in mapping.items()}
        return e, e.anchors[inv[anchor]].orientation.relabel(mapping)


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return Catalog(load())


def match(g: PlaneGraph) -> CatalogEntry | None:
    return default_catalog().match(g)


def relabeled(entry: CatalogEntry, mapping: dict[int, int]) -> PlaneGraph:
    return relabel(entry.graph, mapping)
