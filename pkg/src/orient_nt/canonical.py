"""Canonical forms for small graphs.

Abstract graphs use colour refinement plus individualisation backtracking and
keep the lexicographically smallest adjacency code.  Plane graphs (with their
outer face) use the classic rotation-walk code started from every outer dart,
mirrors included.  Both are exact; the abstract one is only meant for
n <= ~12.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .plane_graph import PlaneGraph

Adjacency = Mapping[int, Iterable[int]]


def _refine(adj: dict[int, frozenset[int]], colour: dict[int, int]) -> dict[int, int]:
    """Equitable refinement; colours are renumbered from sorted signatures."""
    while True:
        sig = {v: (colour[v], tuple(sorted(colour[w] for w in adj[v]))) for v in adj}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in adj}
        if len(ranks) == len(set(colour.values())):
            return new
        colour = new


def _code(adj: dict[int, frozenset[int]], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        rows.append(sum(1 << pos[w] for w in adj[v]))
    return tuple(rows)


def canonical_labeling(adj: Adjacency) -> tuple[tuple[int, ...], list[int]]:
    """``(code, order)``: ``order[i]`` is the vertex receiving canonical label ``i``."""
    a = {v: frozenset(ws) for v, ws in adj.items()}
    start = _refine(a, {v: len(a[v]) for v in a})
    best: list = [None, None]

    def search(colour: dict[int, int]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in colour.items():
            cells.setdefault(c, []).append(v)
        if len(cells) == len(a):
            order = sorted(a, key=colour.__getitem__)
            code = _code(a, order)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            return
        target = min((c for c, vs in cells.items() if len(vs) > 1), key=lambda c: (len(cells[c]), c))
        for v in sorted(cells[target]):
            # individualise v: it gets a colour just below its cell
            col = {w: 2 * colour[w] for w in colour}
            col[v] = 2 * colour[v] - 1
            search(_refine(a, col))

    search(start)
    return best[0], best[1]


def canonical_form(adj: Adjacency) -> str:
    """Hashable canonical string of an abstract graph."""
    code, _ = canonical_labeling(adj)
    n = len(code)
    return f"{n}:" + ",".join(format(r, "x") for r in code)


def graph_form(g: PlaneGraph) -> str:
    return canonical_form(g.adjacency())


def isomorphism(src: Adjacency, dst: Adjacency) -> dict[int, int] | None:
    """A vertex map ``src -> dst`` preserving adjacency, or None."""
    c1, o1 = canonical_labeling(src)
    c2, o2 = canonical_labeling(dst)
    if c1 != c2:
        return None
    return {u: v for u, v in zip(o1, o2)}


def degree_signature(adj: Adjacency) -> tuple[int, ...]:
    return tuple(sorted(len(list(ws)) for ws in adj.values()))


# ---------------------------------------------------------------- plane codes


def _plane_code(rot: Mapping[int, tuple[int, ...]], a: int, b: int) -> tuple:
    number = {a: 0}
    ref = {a: b}
    order = [a]
    code: list[int] = []
    i = 0
    while i < len(order):
        v = order[i]
        nbrs = rot[v]
        k = nbrs.index(ref[v])
        for j in range(len(nbrs)):
            w = nbrs[(k + j) % len(nbrs)]
            if w not in number:
                number[w] = len(order)
                ref[w] = v
                order.append(w)
            code.append(number[w])
        code.append(-1)
        i += 1
    return tuple(code)


def plane_form(g: PlaneGraph, *, mirrors: bool = True) -> tuple:
    """Canonical code of the embedded graph with its outer face."""
    rot = g.rotations
    walk = g.outer_walk()
    darts = list(zip(walk, walk[1:] + walk[:1]))
    best = min(_plane_code(rot, a, b) for a, b in darts)
    if mirrors:
        mrot = {v: tuple(reversed(ns)) for v, ns in rot.items()}
        # in the mirror the outer face is walked the other way round
        best = min(best, min(_plane_code(mrot, b, a) for a, b in darts))
    return best
