"""Orientations of undirected graphs and their distance metrics."""

from __future__ import annotations

import json
import math
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import (
    IncompatibleOnSharedEdges,
    NotStrong,
    OrientationError,
    OverlapTooLarge,
    ParseError,
)
from .plane_graph import Edge, PlaneGraph, edge

INFINITE = math.inf
"""Distance/diameter value for unreachable pairs."""


@dataclass(frozen=True)
class Orientation:
    """A direction for every edge of a graph: ``(u, v)`` in ``arcs`` means u -> v."""

    arcs: frozenset[tuple[int, int]]
    vertices: frozenset[int]

    def __post_init__(self):
        seen: set[Edge] = set()
        for u, v in self.arcs:
            e = edge(u, v)
            if e in seen:
                raise OrientationError(f"edge {e} oriented twice")
            seen.add(e)
            if u not in self.vertices or v not in self.vertices:
                raise OrientationError(f"arc {u}->{v} leaves the vertex set")

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None):
        arcs = frozenset((int(u), int(v)) for u, v in arcs)
        vs = frozenset(vertices) if vertices is not None else frozenset(x for a in arcs for x in a)
        return cls(arcs, vs)

    @classmethod
    def of(cls, g: PlaneGraph, arcs: Iterable[tuple[int, int]]) -> Orientation:
        """Orientation of ``g``; raises if ``arcs`` does not cover exactly its edges."""
        d = cls.from_arcs(arcs, g.vertices)
        d.check_covers(g)
        return d

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(edge(u, v) for u, v in self.arcs)

    def check_covers(self, g: PlaneGraph) -> None:
        have = self.edges
        want = set(g.edges)
        missing = sorted(want - have)
        extra = sorted(have - want)
        if missing:
            raise OrientationError(f"edge {missing[0][0]}-{missing[0][1]} has no direction")
        if extra:
            raise OrientationError(f"arc on non-edge {extra[0][0]}-{extra[0][1]}")
        if set(self.vertices) != set(g.vertices):
            raise OrientationError("vertex sets differ")

    def direction(self, u: int, v: int) -> tuple[int, int]:
        """The arc on edge ``{u, v}``."""
        if (u, v) in self.arcs:
            return (u, v)
        if (v, u) in self.arcs:
            return (v, u)
        raise OrientationError(f"edge {u}-{v} not oriented")

    def out_adjacency(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in sorted(self.arcs):
            out[u].append(v)
        return out

    def in_adjacency(self) -> dict[int, list[int]]:
        inn: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in sorted(self.arcs):
            inn[v].append(u)
        return inn

    def restrict(self, vertices: Iterable[int]) -> Orientation:
        keep = frozenset(vertices)
        return Orientation(frozenset(a for a in self.arcs if a[0] in keep and a[1] in keep), keep)

    def relabel(self, mapping: Mapping[int, int]) -> Orientation:
        return Orientation(
            frozenset((mapping[u], mapping[v]) for u, v in self.arcs),
            frozenset(mapping[v] for v in self.vertices),
        )

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)


def _bfs(adj: Mapping[int, list[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    q = deque([source])
    while q:
        v = q.popleft()
        dv = dist[v] + 1
        for w in adj[v]:
            if w not in dist:
                dist[w] = dv
                q.append(w)
    return dist


def distances_from(d: Orientation, source: int) -> dict[int, int]:
    return _bfs(d.out_adjacency(), source)


def distances_to(d: Orientation, target: int) -> dict[int, int]:
    return _bfs(d.in_adjacency(), target)


def all_pairs(d: Orientation) -> dict[int, dict[int, int]]:
    out = d.out_adjacency()
    return {v: _bfs(out, v) for v in sorted(d.vertices)}


def is_strongly_connected(d: Orientation) -> bool:
    if not d.vertices:
        return True
    root = min(d.vertices)
    n = len(d.vertices)
    return len(_bfs(d.out_adjacency(), root)) == n and len(_bfs(d.in_adjacency(), root)) == n


def _indexed_out(d: Orientation) -> list[list[int]]:
    index = {v: i for i, v in enumerate(sorted(d.vertices))}
    out: list[list[int]] = [[] for _ in index]
    for u, v in d.arcs:
        out[index[u]].append(index[v])
    return out


def _depth(out: list[list[int]], source: int) -> int:
    """Eccentricity of ``source`` by level-synchronous BFS, or -1 if some vertex is missed."""
    seen = [False] * len(out)
    seen[source] = True
    frontier = [source]
    depth = reached = 0
    while True:
        nxt = []
        for v in frontier:
            for w in out[v]:
                if not seen[w]:
                    seen[w] = True
                    nxt.append(w)
        if not nxt:
            return depth if reached + 1 == len(out) else -1
        reached += len(nxt)
        depth += 1
        frontier = nxt


def diameter(d: Orientation) -> int | float:
    """Largest directed distance over ordered pairs, or ``INFINITE``."""
    if not is_strongly_connected(d):
        return INFINITE
    out = _indexed_out(d)
    return max(_depth(out, s) for s in range(len(out)))


def eccentricities(d: Orientation) -> dict[int, tuple[int | float, int | float]]:
    """``v -> (out-eccentricity, in-eccentricity)``."""
    out, inn = d.out_adjacency(), d.in_adjacency()
    n = len(d.vertices)
    res = {}
    for v in d.vertices:
        fwd, bwd = _bfs(out, v), _bfs(inn, v)
        res[v] = (max(fwd.values()) if len(fwd) == n else INFINITE,
                  max(bwd.values()) if len(bwd) == n else INFINITE)
    return res


def anchored_ecc(d: Orientation, v: int) -> int:
    """``max_u max(d(u, v), d(v, u))``; requires a strong orientation."""
    n = len(d.vertices)
    fwd = distances_from(d, v)
    bwd = distances_to(d, v)
    if len(fwd) != n or len(bwd) != n:
        raise NotStrong(f"orientation is not strongly connected (checked from {v})")
    return max(max(fwd.values()), max(bwd.values()))


def sinks_and_sources(d: Orientation) -> tuple[list[int], list[int]]:
    out, inn = d.out_adjacency(), d.in_adjacency()
    sinks = sorted(v for v in d.vertices if not out[v])
    sources = sorted(v for v in d.vertices if not inn[v])
    return sinks, sources


def reverse(d: Orientation) -> Orientation:
    return Orientation(frozenset((v, u) for u, v in d.arcs), d.vertices)


def combine(d1: Orientation, d2: Orientation, allow_reverse: bool = True) -> Orientation:
    """Union of two orientations that must agree on their shared edges.

    ``d2`` is reversed as a whole when that is the only way to agree and
    ``allow_reverse`` is set.
    """
    shared = d1.edges & d2.edges
    if not shared:
        return Orientation(d1.arcs | d2.arcs, d1.vertices | d2.vertices)
    agree = sum(1 for a in d2.arcs if a in d1.arcs)
    if agree == len(shared):
        return Orientation(d1.arcs | d2.arcs, d1.vertices | d2.vertices)
    if agree == 0:
        if not allow_reverse:
            raise IncompatibleOnSharedEdges(
                f"orientations disagree on {len(shared)} shared edge(s) and reversal is not allowed")
        r = reverse(d2)
        return Orientation(d1.arcs | r.arcs, d1.vertices | r.vertices)
    raise OverlapTooLarge(
        f"{agree} of {len(shared)} shared edges agree: no polarity of the second orientation fits")


# ---------------------------------------------------------------- certificates


@dataclass
class Certificate:
    orientation: Orientation
    diameter: int | float
    strongly_connected: bool
    bound: int
    exception: bool = False
    trace: list[str] = field(default_factory=list)
    name: str | None = None

    @property
    def n(self) -> int:
        return len(self.orientation.vertices)

    @property
    def within_bound(self) -> bool:
        return self.strongly_connected and self.diameter <= self.bound

    def recheck(self) -> bool:
        """Recompute everything from the orientation alone."""
        diam = diameter(self.orientation)
        return (
            diam == self.diameter
            and is_strongly_connected(self.orientation) == self.strongly_connected
            and self.strongly_connected == (diam != INFINITE)
            and (self.exception or diam <= self.bound)
        )

    def report_lines(self) -> list[str]:
        diam = "inf" if self.diameter == INFINITE else str(self.diameter)
        lines = [
            f"n={self.n}",
            f"diameter={diam}",
            f"bound={self.bound}",
            f"strong={'true' if self.strongly_connected else 'false'}",
            f"exception={'true' if self.exception else 'false'}",
        ]
        if self.name:
            lines.append(f"catalog={self.name}")
        return lines + [f"trace: {t}" for t in self.trace]

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "diameter": None if self.diameter == INFINITE else self.diameter,
            "bound": self.bound,
            "strong": self.strongly_connected,
            "exception": self.exception,
            "catalog": self.name,
            "trace": list(self.trace),
            "arcs": [list(a) for a in self.orientation.sorted_arcs()],
        }
        return json.dumps(payload, sort_keys=True)


def ceil_half(n: int) -> int:
    return (n + 1) // 2


def certify(d: Orientation, *, exception: bool = False, trace: Iterable[str] = (),
            name: str | None = None) -> Certificate:
    """Build a certificate whose numbers are recomputed from ``d``."""
    diam = diameter(d)
    return Certificate(
        orientation=d,
        diameter=diam,
        strongly_connected=diam != INFINITE,
        bound=ceil_half(len(d.vertices)),
        exception=exception,
        trace=list(trace),
        name=name,
    )


# ------------------------------------------------------------------ file I/O


def format_or(d: Orientation, ids: Mapping[int, int] | None = None) -> str:
    """One ``tail head`` line per arc, optionally renumbered through ``ids``."""
    if ids is None:
        return format_arcs(d.arcs)
    return format_arcs((ids[u], ids[v]) for u, v in d.arcs)


def format_arcs(arcs: Iterable[tuple[int, int]]) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(arcs))


def parse_or(text: str, g: PlaneGraph | None = None) -> Orientation:
    """Parse ``tail head`` lines; with ``g`` the arcs must cover its edges exactly."""
    arcs = []
    seen: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'tail head', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno) from None
        if u == v:
            raise ParseError(f"loop arc {u} {v}", lineno)
        e = edge(u, v)
        if e in seen:
            raise ParseError(f"edge {e[0]}-{e[1]} oriented twice (first on line {seen[e]})", lineno)
        if g is not None and not g.has_edge(u, v):
            raise ParseError(f"arc {u} {v} is not an edge of the graph", lineno)
        seen[e] = lineno
        arcs.append((u, v))
    if g is None:
        return Orientation.from_arcs(arcs)
    missing = sorted(set(g.edges) - set(seen))
    if missing:
        a, b = missing[0]
        raise ParseError(f"edge {a}-{b} missing from orientation")
    return Orientation.from_arcs(arcs, g.vertices)


def to_dot(d: Orientation, name: str = "D", highlight: Iterable[int] = ()) -> str:
    hl = set(highlight)
    lines = [f"digraph {name} {{"]
    for v in sorted(d.vertices):
        style = ' [style=filled, fillcolor="#d62728", fontcolor=white]' if v in hl else ""
        lines.append(f"  {v}{style};")
    for u, v in d.sorted_arcs():
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
