"""Seeded random instances, tight outerplanar families and exhaustive enumeration.

Enumeration grows graphs one outer vertex at a time: the new vertex ``z`` is
joined to a clockwise run ``w1 .. wd`` (d >= 2) of the current outer cycle,
and ``w2 .. w(d-1)`` become interior.  Every 2-connected near triangulation
with n >= 4 has an outer vertex whose neighbours form such a run with no
chord to the rest of the cycle (the first vertex of a canonical ordering
read backwards), and deleting it leaves a smaller 2-connected near
triangulation.  Hence the move is complete.  The plain pair "split an inner
face / add an ear" is not: the octahedron has no degree-3 interior vertex and
no degree-2 outer vertex in any of its embeddings.

``oracle_near_triangulations`` is an independent check that shares no code
with the above: it filters all labelled graphs on n vertices with networkx
planarity tests.
"""

from __future__ import annotations

import builtins
import itertools
import random
from collections.abc import Iterator

import networkx as nx

from .canonical import graph_form, plane_form
from .digraph_metrics import ceil_half
from .errors import OrientError
from .exact_solver import SearchBudget, oriented_diameter_exact
from .plane_graph import PlaneGraph, add_outer_vertex, build, insert_in_face


class NotFound(OrientError):
    pass


def triangle() -> PlaneGraph:
    return build({1: [3, 2], 2: [1, 3], 3: [2, 1]})


def _ear_run(cyc: tuple[int, ...], i: int) -> list[int]:
    return [cyc[i], cyc[(i + 1) % len(cyc)]]


def random_near_triangulation(n: int, seed: int = 0, interior_bias: float = 0.5) -> PlaneGraph:
    """Grow a triangle by random face splits (probability ``interior_bias``) and ears."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 0.0 <= interior_bias <= 1.0:
        raise ValueError("interior_bias must lie in [0, 1]")
    rng = random.Random(seed)
    g = triangle()
    for z in range(4, n + 1):
        if rng.random() < interior_bias:
            faces = sorted(g.inner_faces())
            g = insert_in_face(g, rng.choice(faces), label=z)
        else:
            cyc = g.outer_cycle()
            g = add_outer_vertex(g, _ear_run(cyc, rng.randrange(len(cyc))), label=z)
    return g


def random_maximal_outerplanar(n: int, seed: int = 0, fan: bool = False) -> PlaneGraph:
    """A random triangulated n-gon (ears glued on random outer edges), or the fan."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if fan:
        return fan_graph(n)
    return random_near_triangulation(n, seed, interior_bias=0.0)


def fan_graph(n: int) -> PlaneGraph:
    """Vertex 1 joined to the path 2, 3, ..., n."""
    g = triangle()
    for z in range(4, n + 1):
        cyc = g.outer_cycle()
        i = cyc.index(z - 1)
        # the outer edge between the hub and the newest path vertex
        run = [z - 1, 1] if cyc[(i + 1) % len(cyc)] == 1 else [1, z - 1]
        g = add_outer_vertex(g, run, label=z)
    return g


def snake(n: int) -> PlaneGraph:
    """The zig-zag strip: square of the path 1, 2, ..., n."""
    if n < 3:
        raise ValueError("n must be at least 3")
    g = triangle()
    for z in range(4, n + 1):
        cyc = g.outer_cycle()
        i = cyc.index(z - 1)
        run = [z - 1, z - 2] if cyc[(i + 1) % len(cyc)] == z - 2 else [z - 2, z - 1]
        g = add_outer_vertex(g, run, label=z)
    return g


def outer_extensions(g: PlaneGraph) -> Iterator[PlaneGraph]:
    """Every graph obtained by adding one outer vertex over a run of length >= 2."""
    cyc = g.outer_cycle()
    k = len(cyc)
    z = max(g.vertices) + 1
    for start in range(k):
        for length in range(2, k + 1):
            run = [cyc[(start + i) % k] for i in range(length)]
            yield add_outer_vertex(g, run, label=z)


def enumerate_plane(n: int) -> list[PlaneGraph]:
    """All 2-connected plane near triangulations on n vertices, one per plane class.

    Plane classes are taken up to reflection and relabelling; the outer face
    is part of the structure.
    """
    if n < 3:
        return []
    level = [triangle()]
    for _ in range(4, n + 1):
        seen: dict[tuple, PlaneGraph] = {}
        for g in level:
            for h in outer_extensions(g):
                key = plane_form(h)
                if key not in seen:
                    seen[key] = h
        level = [seen[k] for k in sorted(seen)]
    return level


def enumerate(n: int) -> list[PlaneGraph]:  # noqa: A001 - public name of the operation
    """One plane representative for every isomorphism class of abstract graphs."""
    reps: dict[str, PlaneGraph] = {}
    for g in enumerate_plane(n):
        reps.setdefault(graph_form(g), g)
    return [reps[k] for k in sorted(reps)]


def enumeration_counts(n_max: int) -> dict[int, int]:
    return {n: len(enumerate(n)) for n in range(3, n_max + 1)}


def oracle_near_triangulations(n: int) -> list[nx.Graph]:
    """Independent list of near-triangulation graphs on n vertices, up to isomorphism.

    A 2-connected graph G is a near triangulation with outer cycle C exactly
    when G plus one apex joined to C is a triangulation, i.e. planar with
    3(n+1) - 6 edges.  That pins |C| = 3n - 3 - m, and the check is run for
    every labelled graph and every simple cycle of that length.
    """
    if n < 3:
        return []
    pairs = list(itertools.combinations(range(n), 2))
    found: list[nx.Graph] = []
    by_key: dict[tuple, list[nx.Graph]] = {}
    for mask in range(1 << len(pairs)):
        m = bin(mask).count("1")
        if not (n <= m <= 3 * n - 6 or (n == 3 and m == 3)):
            continue
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(p for i, p in builtins.enumerate(pairs) if mask >> i & 1)
        if not nx.is_biconnected(g):
            continue
        length = 3 * n - 3 - m
        if length < 3:
            continue
        key = (m, tuple(sorted(d for _, d in g.degree())))
        if any(nx.is_isomorphic(g, h) for h in by_key.get(key, [])):
            continue
        if _admits_outer_cycle(g, length):
            by_key.setdefault(key, []).append(g)
            found.append(g)
    return found


def _admits_outer_cycle(g: nx.Graph, length: int) -> bool:
    n = g.number_of_nodes()
    apex = n
    for cyc in nx.simple_cycles(g, length_bound=length):
        if len(cyc) != length:
            continue
        h = g.copy()
        h.add_edges_from((apex, v) for v in cyc)
        if h.number_of_edges() == 3 * (n + 1) - 6 and nx.check_planarity(h)[0]:
            return True
    return False


def tight_family(n: int, *, verify: bool | None = None,
                 budget: SearchBudget | None = None) -> PlaneGraph:
    """A maximal outerplanar graph on n vertices with oriented diameter ceil(n/2).

    The snake is tried first.  When verification is on (default for n <= 14)
    and the snake misses, the other triangulated n-gons are tried in
    enumeration order until one attains the value.
    """
    if n < 5:
        raise ValueError("tight family starts at n = 5")
    if verify is None:
        verify = n <= 14
    first = snake(n)
    if not verify:
        return first
    target = ceil_half(n)
    budget = budget or SearchBudget()

    def attains(g: PlaneGraph) -> bool:
        return oriented_diameter_exact(g, budget)[0] == target

    if attains(first):
        return first
    for g in _maximal_outerplanar_graphs(n):
        if attains(g):
            return g
    raise NotFound(f"no maximal outerplanar graph on {n} vertices attains {target}")


def _maximal_outerplanar_graphs(n: int) -> list[PlaneGraph]:
    level = [triangle()]
    for z in range(4, n + 1):
        seen: dict[str, PlaneGraph] = {}
        for g in level:
            cyc = g.outer_cycle()
            for i in range(len(cyc)):
                h = add_outer_vertex(g, _ear_run(cyc, i), label=z)
                seen.setdefault(graph_form(h), h)
        level = [seen[k] for k in sorted(seen)]
    return level
