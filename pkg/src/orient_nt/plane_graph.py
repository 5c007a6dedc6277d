"""Plane graphs given by rotation systems.

A :class:`PlaneGraph` stores, for every vertex, the clockwise cyclic order of
its neighbours.  Faces are traced with a single rule: after walking the dart
``u -> v`` the walk continues with ``v -> w`` where ``w`` follows ``u`` in the
clockwise rotation at ``v``.  With that rule bounded faces are walked
counter-clockwise and the unbounded face clockwise, so the walk of the outer
face *is* the outer cycle in clockwise order.

Values are immutable; every surgery returns a new graph.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import (
    Disconnected,
    EdgeAbsent,
    NonPlanarEmbedding,
    NotACycle,
    NotSimple,
    NotTwoConnected,
    ParseError,
    VertexAbsent,
)

Edge = tuple[int, int]
Dart = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Canonical undirected edge: endpoints in increasing order."""
    if u == v:
        raise NotSimple(f"loop at {u}")
    return (u, v) if u < v else (v, u)


def _normalize_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    i = min(range(len(seq)), key=seq.__getitem__)
    return tuple(seq[i:]) + tuple(seq[:i])


def _cyclic_key(seq: Sequence[int]) -> tuple[int, ...]:
    return _normalize_cycle(seq) if seq else ()


class PlaneGraph:
    """A connected simple plane graph with a distinguished outer face."""

    __slots__ = ("_rot", "_pos", "_adj", "_faces", "_dart_face", "_outer", "_edges")

    def __init__(
        self,
        rotations: Mapping[int, Sequence[int]],
        outer: Sequence[int] | None = None,
        *,
        outer_dart: Dart | None = None,
    ):
        rot = {int(v): tuple(int(w) for w in nbrs) for v, nbrs in rotations.items()}
        if not rot:
            raise NotSimple("graph has no vertices")
        pos: dict[int, dict[int, int]] = {}
        for v, nbrs in rot.items():
            if v in nbrs:
                raise NotSimple(f"loop at vertex {v}")
            if len(set(nbrs)) != len(nbrs):
                raise NotSimple(f"repeated neighbour in rotation of {v}")
            pos[v] = {w: i for i, w in enumerate(nbrs)}
        for v, nbrs in rot.items():
            for w in nbrs:
                if w not in rot:
                    raise NotSimple(f"{v} lists unknown vertex {w}")
                if v not in pos[w]:
                    raise NotSimple(f"asymmetric adjacency {v}-{w}")
        self._rot = rot
        self._pos = pos
        self._adj = {v: frozenset(nbrs) for v, nbrs in rot.items()}
        self._edges = tuple(sorted({edge(v, w) for v, nbrs in rot.items() for w in nbrs}))
        self._check_connected()
        self._trace_faces()
        n, m, f = len(rot), len(self._edges), len(self._faces)
        if len(rot) == 1:
            f = 1
        if n - m + f != 2:
            raise NonPlanarEmbedding(f"Euler check failed: n - m + f = {n} - {m} + {f} != 2")
        self._outer = self._pick_outer(outer, outer_dart)

    # construction helpers

    def _check_connected(self) -> None:
        start = next(iter(self._rot))
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for w in self._rot[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != len(self._rot):
            raise Disconnected(f"{len(self._rot) - len(seen)} vertices unreachable from {start}")

    def _trace_faces(self) -> None:
        dart_face: dict[Dart, int] = {}
        faces: list[tuple[int, ...]] = []
        for v in sorted(self._rot):
            for w in self._rot[v]:
                if (v, w) in dart_face:
                    continue
                idx = len(faces)
                walk = []
                a, b = v, w
                while (a, b) not in dart_face:
                    dart_face[(a, b)] = idx
                    walk.append(a)
                    a, b = b, self.succ(b, a)
                faces.append(tuple(walk))
        self._faces = tuple(faces)
        self._dart_face = dart_face

    def _pick_outer(self, outer: Sequence[int] | None, outer_dart: Dart | None) -> int:
        if not self._faces:
            return -1
        if outer_dart is not None:
            if outer_dart not in self._dart_face:
                raise EdgeAbsent(f"outer dart {outer_dart} is not a dart of the graph")
            return self._dart_face[outer_dart]
        if outer is not None:
            want = _normalize_cycle(list(outer))
            rev = _normalize_cycle(list(reversed(outer)))
            exact = [i for i, f in enumerate(self._faces) if _normalize_cycle(f) == want]
            if exact:
                return exact[0]
            mirrored = [i for i, f in enumerate(self._faces) if _normalize_cycle(f) == rev]
            if mirrored:
                return mirrored[0]
            raise NotACycle(f"{list(outer)} does not bound a face")
        return min(
            range(len(self._faces)),
            key=lambda i: (-len(self._faces[i]), _normalize_cycle(self._faces[i])),
        )

    # basic queries

    def succ(self, v: int, u: int) -> int:
        """Neighbour following ``u`` clockwise around ``v``."""
        nbrs = self._rot[v]
        return nbrs[(self._pos[v][u] + 1) % len(nbrs)]

    def pred(self, v: int, u: int) -> int:
        nbrs = self._rot[v]
        return nbrs[(self._pos[v][u] - 1) % len(nbrs)]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._rot))

    @property
    def vertex_count(self) -> int:
        return len(self._rot)

    n = vertex_count

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def rotations(self) -> dict[int, tuple[int, ...]]:
        return dict(self._rot)

    def rotation(self, v: int) -> tuple[int, ...]:
        try:
            return self._rot[v]
        except KeyError:
            raise VertexAbsent(f"no vertex {v}") from None

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise VertexAbsent(f"no vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.rotation(v))

    def has_vertex(self, v: int) -> bool:
        return v in self._rot

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        return self._faces

    @property
    def outer_face(self) -> int:
        return self._outer

    def face_of(self, u: int, v: int) -> int:
        """Index of the face on which the dart ``u -> v`` lies."""
        try:
            return self._dart_face[(u, v)]
        except KeyError:
            raise EdgeAbsent(f"no dart {u}->{v}") from None

    def inner_faces(self) -> list[tuple[int, ...]]:
        return [f for i, f in enumerate(self._faces) if i != self._outer]

    def outer_walk(self) -> tuple[int, ...]:
        return self._faces[self._outer] if self._faces else tuple(self._rot)

    def is_two_connected(self) -> bool:
        # a connected plane graph on >= 3 vertices is 2-connected iff every
        # face boundary is a cycle
        if len(self._rot) < 3:
            return False
        return all(len(set(f)) == len(f) for f in self._faces)

    def outer_cycle(self) -> tuple[int, ...]:
        """Outer cycle in clockwise order, starting at its smallest vertex."""
        if not self.is_two_connected():
            raise NotTwoConnected("outer walk is not a cycle")
        return _normalize_cycle(self._faces[self._outer])

    def interior_vertices(self) -> frozenset[int]:
        return frozenset(self._rot) - frozenset(self.outer_walk())

    def outer_dart(self) -> Dart:
        f = self._faces[self._outer]
        return (f[0], f[1 % len(f)])

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return (
            self._rot.keys() == other._rot.keys()
            and all(_cyclic_key(self._rot[v]) == _cyclic_key(other._rot[v]) for v in self._rot)
            and _normalize_cycle(self.outer_walk()) == _normalize_cycle(other.outer_walk())
        )

    def __hash__(self) -> int:
        return hash((self._edges, _normalize_cycle(self.outer_walk())))

    def __repr__(self) -> str:
        return f"PlaneGraph(n={self.n}, m={self.m}, outer={list(self.outer_walk())})"


def build(rotations: Mapping[int, Sequence[int]], outer: Sequence[int] | None = None) -> PlaneGraph:
    return PlaneGraph(rotations, outer)


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    ok: bool
    two_connected: bool
    bad_faces: list[tuple[int, ...]] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_near_triangulation(g: PlaneGraph) -> ValidationReport:
    problems = []
    two = g.is_two_connected()
    if not two:
        problems.append("not 2-connected: some face boundary repeats a vertex")
    bad = [f for f in g.inner_faces() if len(f) != 3]
    for f in bad:
        problems.append(f"inner face {list(f)} has length {len(f)}")
    return ValidationReport(ok=two and not bad, two_connected=two, bad_faces=bad, problems=problems)


def is_maximal_outerplanar(g: PlaneGraph) -> bool:
    return bool(is_near_triangulation(g)) and not g.interior_vertices()


def outer_cycle(g: PlaneGraph) -> tuple[int, ...]:
    return g.outer_cycle()


def subpath(cycle: Sequence[int], u: int, v: int) -> tuple[int, ...]:
    """Clockwise subpath ``u C v`` of a clockwise cycle, endpoints included."""
    i, j = cycle.index(u), cycle.index(v)
    if i <= j:
        return tuple(cycle[i:j + 1])
    return tuple(cycle[i:]) + tuple(cycle[:j + 1])


# ------------------------------------------------------------------- surgery


def _check_cycle(g: PlaneGraph, cycle: Sequence[int]) -> list[Edge]:
    cyc = list(cycle)
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        raise NotACycle(f"{cyc} is not a simple cycle")
    es = []
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        if not g.has_edge(a, b):
            raise NotACycle(f"{a}-{b} is not an edge, so {cyc} is not a cycle")
        es.append(edge(a, b))
    return es


def closed_disk(g: PlaneGraph, cycle: Sequence[int]) -> PlaneGraph:
    """Everything on or inside ``cycle``; its outer cycle is ``cycle``."""
    cyc_edges = set(_check_cycle(g, cycle))
    # faces reachable from the outer face without crossing the cycle are outside
    outside = {g.outer_face}
    todo = [g.outer_face]
    while todo:
        fi = todo.pop()
        f = g.faces[fi]
        for a, b in zip(f, f[1:] + f[:1]):
            if edge(a, b) in cyc_edges:
                continue
            other = g.face_of(b, a)
            if other not in outside:
                outside.add(other)
                todo.append(other)
    inside = [i for i in range(len(g.faces)) if i not in outside]
    if not inside:
        raise NotACycle("cycle encloses no face")
    keep_edges: set[Edge] = set()
    for fi in inside:
        f = g.faces[fi]
        for a, b in zip(f, f[1:] + f[:1]):
            keep_edges.add(edge(a, b))
    keep = {v for e in keep_edges for v in e}
    rot = {v: [w for w in g.rotation(v) if edge(v, w) in keep_edges] for v in keep}
    # a cycle dart whose face was outside stays on the new outer face
    a, b = cycle[0], cycle[1]
    dart = (a, b) if g.face_of(a, b) in outside else (b, a)
    return PlaneGraph(rot, outer_dart=dart)


def interior(g: PlaneGraph, cycle: Sequence[int]) -> frozenset[int]:
    """Vertices strictly inside ``cycle``."""
    return frozenset(closed_disk(g, cycle).vertices) - frozenset(cycle)


def _surviving_outer_dart(g: PlaneGraph, dead: set[Dart]) -> Dart | None:
    f = g.outer_walk()
    for a, b in zip(f, f[1:] + f[:1]):
        if (a, b) not in dead:
            return (a, b)
    return None


def delete_edge(g: PlaneGraph, e: Edge) -> PlaneGraph:
    u, w = e
    if not g.has_edge(u, w):
        raise EdgeAbsent(f"no edge {u}-{w}")
    rot = {v: [x for x in nbrs if not ((v == u and x == w) or (v == w and x == u))]
           for v, nbrs in g.rotations.items()}
    dart = _surviving_outer_dart(g, {(u, w), (w, u)})
    if dart is None:
        raise EdgeAbsent(f"deleting {u}-{w} leaves no outer face")
    return PlaneGraph(rot, outer_dart=dart)


def delete_vertices(g: PlaneGraph, vs: Iterable[int]) -> PlaneGraph:
    gone = set(vs)
    for v in gone:
        if not g.has_vertex(v):
            raise VertexAbsent(f"no vertex {v}")
    rot = {v: [x for x in nbrs if x not in gone] for v, nbrs in g.rotations.items() if v not in gone}
    dead = {(a, b) for a in gone for b in g.rotation(a)}
    dead |= {(b, a) for a, b in dead}
    dart = _surviving_outer_dart(g, dead)
    if dart is None:
        # no outer edge survives: fall back to the longest-face rule
        return PlaneGraph(rot)
    return PlaneGraph(rot, outer_dart=dart)


def add_outer_vertex(g: PlaneGraph, run: Sequence[int], label: int | None = None) -> PlaneGraph:
    """Add a vertex outside ``g`` adjacent to a clockwise run of outer-cycle vertices.

    ``run`` must be consecutive along the clockwise outer cycle and have
    length >= 2.  The new outer cycle replaces the interior of the run by the
    new vertex.
    """
    cyc = list(g.outer_cycle())
    if len(run) < 2 or len(run) > len(cyc):
        raise NotACycle(f"run {list(run)} has invalid length")
    k = cyc.index(run[0])
    for i, w in enumerate(run):
        if cyc[(k + i) % len(cyc)] != w:
            raise NotACycle(f"run {list(run)} is not consecutive on the outer cycle")
    z = max(g.vertices) + 1 if label is None else label
    if g.has_vertex(z):
        raise NotSimple(f"vertex {z} already present")
    rot = {v: list(nbrs) for v, nbrs in g.rotations.items()}
    for i, w in enumerate(run):
        prev = cyc[(k + i - 1) % len(cyc)]
        j = rot[w].index(prev)
        rot[w].insert(j + 1, z)
    rot[z] = list(reversed(run))
    return PlaneGraph(rot, outer_dart=(run[0], z))


def insert_in_face(g: PlaneGraph, face: Sequence[int], label: int | None = None) -> PlaneGraph:
    """Put a new vertex inside a bounded triangular face, joined to its corners."""
    a, b, c = face
    fi = g.face_of(a, b)
    if fi == g.outer_face or g.faces[fi] not in {(a, b, c), (b, c, a), (c, a, b)}:
        raise NotACycle(f"{list(face)} is not a bounded face traced in this order")
    z = max(g.vertices) + 1 if label is None else label
    rot = {v: list(nbrs) for v, nbrs in g.rotations.items()}
    for v, u in ((b, a), (c, b), (a, c)):
        rot[v].insert(rot[v].index(u) + 1, z)
    rot[z] = [a, c, b]
    return PlaneGraph(rot, outer_dart=g.outer_dart())


def relabel(g: PlaneGraph, mapping: Mapping[int, int]) -> PlaneGraph:
    rot = {mapping[v]: [mapping[w] for w in nbrs] for v, nbrs in g.rotations.items()}
    a, b = g.outer_dart()
    return PlaneGraph(rot, outer_dart=(mapping[a], mapping[b]))


def mirror(g: PlaneGraph) -> PlaneGraph:
    """Reflection of the embedding: every rotation reversed."""
    rot = {v: list(reversed(nbrs)) for v, nbrs in g.rotations.items()}
    a, b = g.outer_dart()
    return PlaneGraph(rot, outer_dart=(b, a))


def undirected_distances(g: PlaneGraph, source: int) -> dict[int, int]:
    dist = {source: 0}
    q = deque([source])
    while q:
        v = q.popleft()
        for w in g.rotation(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def undirected_diameter(g: PlaneGraph) -> int:
    return max(max(undirected_distances(g, v).values()) for v in g.vertices)


# ------------------------------------------------------------------ .pg I/O


def parse_pg(text: str) -> PlaneGraph:
    """Parse the ``.pg`` rotation format (1-based vertex ids)."""
    n = None
    rot: dict[int, list[int]] = {}
    lines: dict[int, int] = {}
    outer = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise ParseError(f"expected vertex count, got {line!r}", lineno) from None
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'v: w1 w2 ...', got {line!r}", lineno)
        head = head.strip()
        try:
            ids = [int(t) for t in rest.split()]
        except ValueError:
            raise ParseError(f"non-integer vertex id in {rest.strip()!r}", lineno) from None
        if head == "outer":
            if outer is not None:
                raise ParseError("duplicate outer line", lineno)
            outer = ids
            continue
        try:
            v = int(head)
        except ValueError:
            raise ParseError(f"bad vertex id {head!r}", lineno) from None
        for w in [v, *ids]:
            if not 1 <= w <= n:
                raise ParseError(f"vertex {w} out of range 1..{n}", lineno)
        if v in rot:
            raise ParseError(f"rotation of {v} given twice", lineno)
        if v in ids:
            raise ParseError(f"loop at vertex {v}", lineno)
        if len(set(ids)) != len(ids):
            dup = next(w for w in ids if ids.count(w) > 1)
            raise ParseError(f"duplicate neighbour {dup} in rotation of {v}", lineno)
        rot[v] = ids
        lines[v] = lineno
    if n is None:
        raise ParseError("empty file")
    for v in range(1, n + 1):
        rot.setdefault(v, [])
        lines.setdefault(v, 0)
    for v in sorted(rot):
        for w in rot[v]:
            if v not in rot[w]:
                raise ParseError(f"asymmetric adjacency: {v} lists {w} but {w} does not list {v}",
                                 lines[v])
    if outer is not None:
        for w in outer:
            if w not in rot:
                raise ParseError(f"outer cycle names unknown vertex {w}")
    try:
        return PlaneGraph(rot, outer)
    except NonPlanarEmbedding as exc:
        raise ParseError(str(exc)) from exc
    except (NotSimple, Disconnected, NotACycle) as exc:
        raise ParseError(str(exc)) from exc


def format_pg(g: PlaneGraph, *, with_outer: bool = True) -> str:
    """Serialize to ``.pg``; vertices are renumbered 1..n in sorted order."""
    ids = {v: i + 1 for i, v in enumerate(g.vertices)}
    out = [str(g.n)]
    for v in g.vertices:
        out.append(f"{ids[v]}: " + " ".join(str(ids[w]) for w in g.rotation(v)))
    if with_outer:
        out.append("outer: " + " ".join(str(ids[w]) for w in g.outer_walk()))
    return "\n".join(out) + "\n"


def read_pg(path) -> PlaneGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_pg(fh.read())


def write_pg(g: PlaneGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pg(g))
