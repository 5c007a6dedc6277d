"""Exact oriented diameter by branch-and-bound over edge directions.

The search fixes edge directions one at a time in a static order (edge
betweenness, descending).  At every node the still-free edges are treated as
two-way streets; if even that optimistic digraph has a pair farther apart
than the current target, the subtree is cut.  Distances are bitset BFS over
Python ints, which is fast enough for the graph sizes this is used on
(n <= ~16).
"""

from __future__ import annotations

import time
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import networkx as nx

from .digraph_metrics import INFINITE, Orientation, anchored_ecc, diameter
from .errors import BudgetExhausted, HasBridge, Infeasible
from .plane_graph import PlaneGraph


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 50_000_000
    time_limit: float = 3600.0
    target_bound: int | None = None

    def __post_init__(self):
        if self.max_nodes <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")


UNLIMITED = SearchBudget()


@dataclass
class SearchStats:
    nodes: int = 0
    seconds: float = 0.0
    decisions: int = 0


def _graph_edges(g) -> tuple[list[int], list[tuple[int, int]]]:
    if isinstance(g, PlaneGraph):
        return list(g.vertices), list(g.edges)
    if isinstance(g, nx.Graph):
        return sorted(g.nodes), sorted(tuple(sorted(e)) for e in g.edges)
    verts, edges = g
    return sorted(verts), sorted(tuple(sorted(e)) for e in edges)


def _to_nx(verts, edges) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(verts)
    h.add_edges_from(edges)
    return h


def _robbins(verts, edges) -> list[tuple[int, int]]:
    """A strong orientation of a bridgeless connected graph (DFS tree + back edges)."""
    h = _to_nx(verts, edges)
    root = verts[0]
    arcs = []
    seen_edges = set()
    for u, v, kind in nx.dfs_labeled_edges(h, root):
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in seen_edges:
            continue
        if kind == "forward":
            arcs.append((u, v))
            seen_edges.add(e)
        elif kind == "nontree":
            # first sighting of a back edge is from the descendant
            arcs.append((u, v))
            seen_edges.add(e)
    return arcs


class _Search:
    """Decision search: does an orientation with diameter <= k exist?"""

    def __init__(self, verts: Sequence[int], edges: Sequence[tuple[int, int]],
                 anchor: int | None = None, anchor_bound: int | None = None,
                 fix_first: bool = True):
        self.verts = list(verts)
        self.index = {v: i for i, v in enumerate(self.verts)}
        n = self.n = len(self.verts)
        self.full = (1 << n) - 1
        h = _to_nx(self.verts, edges)
        bet = nx.edge_betweenness_centrality(h, normalized=False)
        order = sorted(edges, key=lambda e: (-round(bet.get(e, bet.get((e[1], e[0]), 0.0)), 9), e))
        self.edges = [(self.index[a], self.index[b]) for a, b in order]
        self.anchor = None if anchor is None else self.index[anchor]
        self.anchor_bound = anchor_bound
        self.fix_first = fix_first
        self.out = [0] * n
        self.inn = [0] * n
        for a, b in self.edges:
            self.out[a] |= 1 << b
            self.out[b] |= 1 << a
            self.inn[a] |= 1 << b
            self.inn[b] |= 1 << a
        self.hot = 0
        self.nodes = 0

    def _ok(self, k: int) -> bool:
        """Optimistic check of every source against bound ``k`` (and the anchor)."""
        out, full, n = self.out, self.full, self.n
        order = [self.hot] + [s for s in range(n) if s != self.hot]
        for s in order:
            reached = front = 1 << s
            t = 0
            while reached != full and t < k:
                nxt = 0
                f = front
                while f:
                    low = f & -f
                    nxt |= out[low.bit_length() - 1]
                    f ^= low
                front = nxt & ~reached
                if not front:
                    break
                reached |= front
                t += 1
            if reached != full:
                self.hot = s
                return False
        if self.anchor is not None and self.anchor_bound is not None:
            b = self.anchor_bound
            for adj in (out, self.inn):
                reached = front = 1 << self.anchor
                t = 0
                while reached != full and t < b:
                    nxt = 0
                    f = front
                    while f:
                        low = f & -f
                        nxt |= adj[low.bit_length() - 1]
                        f ^= low
                    front = nxt & ~reached
                    if not front:
                        break
                    reached |= front
                    t += 1
                if reached != full:
                    return False
        return True

    def run(self, k: int, budget_nodes: int, deadline: float,
            collect: bool = False) -> Iterator[list[tuple[int, int]]]:
        """Yield orientations (as vertex-label arcs) with diameter <= k."""
        edges = self.edges
        m = len(edges)
        out, inn = self.out, self.inn
        choice = [0] * m
        saved_out, saved_inn = out[:], inn[:]
        try:
            yield from self._dfs(k, budget_nodes, deadline, collect, choice)
        finally:
            out[:] = saved_out
            inn[:] = saved_inn

    def _dfs(self, k, budget_nodes, deadline, collect, choice):
        edges = self.edges
        m = len(edges)
        out, inn = self.out, self.inn
        if not self._ok(k):
            return
        # iterative DFS: position i, state 0 = try first direction, 1 = second, 2 = exhausted
        state = [0] * (m + 1)
        i = 0
        while i >= 0:
            if i == m:
                yield [self._arc(j, choice[j]) for j in range(m)]
                if not collect:
                    return
                i -= 1
                continue
            a, b = edges[i]
            st = state[i]
            if st:
                # undo previous direction of edge i
                if choice[i] == 1:
                    out[b] |= 1 << a
                    inn[a] |= 1 << b
                else:
                    out[a] |= 1 << b
                    inn[b] |= 1 << a
            limit = 1 if (i == 0 and self.fix_first) else 2
            if st >= limit:
                state[i] = 0
                i -= 1
                continue
            state[i] = st + 1
            self.nodes += 1
            if self.nodes > budget_nodes or (self.nodes & 1023 == 0 and time.monotonic() > deadline):
                raise _OutOfBudget
            if st == 0:
                # a -> b: drop b -> a
                choice[i] = 1
                out[b] &= ~(1 << a)
                inn[a] &= ~(1 << b)
            else:
                choice[i] = 2
                out[a] &= ~(1 << b)
                inn[b] &= ~(1 << a)
            if self._ok(k):
                i += 1
                state[i] = 0

    def _arc(self, j: int, c: int) -> tuple[int, int]:
        a, b = self.edges[j]
        if c == 1:
            return (self.verts[a], self.verts[b])
        return (self.verts[b], self.verts[a])


class _OutOfBudget(Exception):
    pass


def _check_bridgeless(verts, edges) -> None:
    h = _to_nx(verts, edges)
    if len(verts) < 2 or not nx.is_connected(h):
        raise HasBridge("graph is disconnected or trivial: no strong orientation")
    if nx.has_bridges(h):
        b = next(nx.bridges(h))
        raise HasBridge(f"edge {b[0]}-{b[1]} is a bridge")


def _undirected_diameter(verts, edges) -> int:
    return nx.diameter(_to_nx(verts, edges))


def _solve(g, budget: SearchBudget, anchor=None, anchor_bound=None,
           stats: SearchStats | None = None) -> tuple[int, Orientation]:
    verts, edges = _graph_edges(g)
    _check_bridgeless(verts, edges)
    t0 = time.monotonic()
    deadline = t0 + budget.time_limit
    start = Orientation.from_arcs(_robbins(verts, edges), verts)
    incumbent: tuple[int, Orientation] | None = None
    if anchor is None or anchored_ecc(start, anchor) <= anchor_bound:
        incumbent = (diameter(start), start)
    lower = _undirected_diameter(verts, edges)
    search = _Search(verts, edges, anchor, anchor_bound)

    def decide(k: int) -> Orientation | None:
        if stats is not None:
            stats.decisions += 1
        found = next(search.run(k, budget.max_nodes, deadline), None)
        return None if found is None else Orientation.from_arcs(found, verts)

    try:
        target = budget.target_bound
        if target is not None and target >= lower:
            if incumbent is not None and incumbent[0] <= target:
                return incumbent
            d = decide(target)
            if d is not None:
                return diameter(d), d
            lower = target + 1
        k = lower
        while k <= len(verts) - 1:
            if incumbent is not None and incumbent[0] <= k:
                return incumbent
            d = decide(k)
            if d is not None:
                return diameter(d), d
            k += 1
            lower = k
        raise Infeasible("no strong orientation satisfies the anchor bound")
    except _OutOfBudget:
        val, wit = incumbent if incumbent is not None else (None, None)
        raise BudgetExhausted(
            f"search budget exhausted after {search.nodes} nodes; proven lower bound {lower}",
            value=val, witness=wit, lower_bound=lower) from None
    finally:
        if stats is not None:
            stats.nodes += search.nodes
            stats.seconds += time.monotonic() - t0


def oriented_diameter_exact(g, budget: SearchBudget = UNLIMITED,
                            stats: SearchStats | None = None) -> tuple[int, Orientation]:
    """Minimum diameter over strong orientations of ``g`` and a witness.

    ``g`` is a :class:`PlaneGraph`, a networkx graph, or ``(vertices, edges)``.
    With ``budget.target_bound`` set, the search stops at the first
    orientation meeting the target (the value is then an upper bound only if
    it equals the target).
    """
    return _solve(g, budget, stats=stats)


def anchored_exact(g, v: int, anchor_bound: int, budget: SearchBudget = UNLIMITED,
                   stats: SearchStats | None = None) -> tuple[int, Orientation]:
    """Minimum diameter among strong orientations with ``anchored_ecc(., v) <= anchor_bound``."""
    verts, _ = _graph_edges(g)
    if v not in verts:
        raise Infeasible(f"{v} is not a vertex")
    if anchor_bound < 1 and len(verts) > 1:
        raise Infeasible("anchor bound below 1 is impossible")
    return _solve(g, budget, anchor=v, anchor_bound=anchor_bound, stats=stats)


def has_orientation_within(g, k: int, budget: SearchBudget = UNLIMITED,
                           anchor: int | None = None, anchor_bound: int | None = None
                           ) -> Orientation | None:
    """A strong orientation with diameter <= k (and anchor bound), or None."""
    verts, edges = _graph_edges(g)
    _check_bridgeless(verts, edges)
    search = _Search(verts, edges, anchor, anchor_bound)
    deadline = time.monotonic() + budget.time_limit
    try:
        found = next(search.run(k, budget.max_nodes, deadline), None)
    except _OutOfBudget:
        raise BudgetExhausted(f"budget exhausted deciding diameter <= {k}") from None
    return None if found is None else Orientation.from_arcs(found, verts)


def orientations_within(g, k: int) -> Iterator[Orientation]:
    """Every orientation of ``g`` with diameter <= k (no symmetry reduction)."""
    verts, edges = _graph_edges(g)
    search = _Search(verts, edges, fix_first=False)
    for arcs in search.run(k, 1 << 62, float("inf"), collect=True):
        yield Orientation.from_arcs(arcs, verts)


def optimal_orientations(g) -> tuple[int, list[Orientation]]:
    """The oriented diameter and all orientations attaining it."""
    val, _ = oriented_diameter_exact(g)
    return val, list(orientations_within(g, val))


def brute_force_oriented_diameter(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> int | float:
    """Plain enumeration of all 2^m orientations; an independent oracle for tests."""
    verts = sorted(vertices)
    es = sorted(tuple(sorted(e)) for e in edges)
    best = INFINITE
    for mask in range(1 << len(es)):
        arcs = [(a, b) if mask >> i & 1 else (b, a) for i, (a, b) in enumerate(es)]
        best = min(best, diameter(Orientation.from_arcs(arcs, verts)))
    return best


def census(n_max: int = 8, budget: SearchBudget = UNLIMITED, jobs: int = 1):
    """Exact oriented diameters of all near triangulations up to ``n_max`` vertices.

    Returns census records; see :mod:`orient_nt.census`.
    """
    from .census import run_census

    return run_census(n_max, budget, jobs)
