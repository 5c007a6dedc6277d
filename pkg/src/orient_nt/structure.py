"""Structural toolkit for near triangulations.

* Stripping: while some outer edge ``uw`` lies on a facial triangle with an
  interior vertex ``v``, delete ``uw``.  The result spans the input, so any
  orientation of it extends (arbitrarily) to the input without lengthening a
  distance.
* Degree-2 analysis: the set ``A`` of degree-2 vertices, the attachment set
  ``S`` and, when ``|A| = 3``, the triangle ``T`` on ``S`` with the three
  maximal outerplanar pieces hanging off its sides.
* Reductions: removing ears (pairs sharing a neighbour, or any four) and
  removing ear/degree-3 pairs, each with a replayable arc-extension rule.

Every extension rule here makes each removed ear a directed triangle with
the chord opposite to it, oriented as the recursive orientation already
orients that chord.  For an ear ``v`` on chord ``ab`` with ``a -> b`` this
gives ``b -> v -> a``, so ``v`` leaves through ``a`` and is entered from
``b`` at cost one.  An ear/degree-3 pair ``(v, v')`` with ``v'`` adjacent to
``v, w, x`` always gets ``x -> v' -> v -> w`` plus ``v' -> w``, whatever the
direction of ``wx``.  Both new vertices then leave through ``w`` in one step
and are entered from ``x`` in at most two.  The gadget must not depend on
``wx``: mixing the mirror gadget (leave in two, enter in one) with this one
would cost four between two pairs instead of three.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

from .digraph_metrics import Orientation
from .errors import HypothesisViolated, PreconditionFailed
from .plane_graph import (
    Edge,
    PlaneGraph,
    closed_disk,
    delete_edge,
    delete_vertices,
    edge,
    is_near_triangulation,
    subpath,
)


class StepKind(Enum):
    STRIP_EDGE = "strip"
    TWO_DEG2 = "two-deg2"
    FOUR_DEG2 = "four-deg2"
    THREE_DEG2_WITH_DEG3 = "three-deg2"


@dataclass(frozen=True)
class ReductionStep:
    """One reduction, replayable on any orientation of the reduced graph.

    ``ears`` holds ``(v, a, b)`` for each removed ear ``v`` with neighbours
    ``a, b``; ``pairs`` holds ``(v, v', w, x)`` for each removed ear ``v``
    whose neighbour ``v'`` has degree three with neighbours ``v, w, x``.
    """

    kind: StepKind
    removed_vertices: tuple[int, ...] = ()
    removed_edges: tuple[Edge, ...] = ()
    ears: tuple[tuple[int, int, int], ...] = ()
    pairs: tuple[tuple[int, int, int, int], ...] = ()

    def trace(self) -> str:
        if self.kind is StepKind.STRIP_EDGE:
            u, w = self.removed_edges[0]
            return f"strip {u} {w}"
        if self.kind is StepKind.THREE_DEG2_WITH_DEG3:
            parts = [f"{v} {vp}" for v, vp, _, _ in self.pairs]
            return "three-deg2 " + " ".join(parts)
        return f"{self.kind.value} " + " ".join(str(v) for v, _, _ in self.ears)

    def contract(self, diam_h: int) -> int:
        """Upper bound on the extended diameter promised by the rule."""
        if self.kind is StepKind.STRIP_EDGE:
            return diam_h
        if self.kind is StepKind.TWO_DEG2:
            return max(diam_h + 1, 4)
        if self.kind is StepKind.FOUR_DEG2:
            return diam_h + 2
        return diam_h + 3

    def extend(self, d_h: Orientation) -> Orientation:
        """Orient the removed edges on top of ``d_h``."""
        arcs = set(d_h.arcs)
        verts = set(d_h.vertices) | set(self.removed_vertices)
        if self.kind is StepKind.STRIP_EDGE:
            u, w = self.removed_edges[0]
            arcs.add((u, w))
        for v, a, b in self.ears:
            tail, head = d_h.direction(a, b)
            arcs.update({(head, v), (v, tail)})
        for v, vp, w, x in self.pairs:
            arcs.update({(x, vp), (vp, v), (v, w), (vp, w)})
        return Orientation(frozenset(arcs), frozenset(verts))


# ---------------------------------------------------------------- stripping


def _stripping_edge(g: PlaneGraph) -> tuple[int, int, int] | None:
    interior = g.interior_vertices()
    cyc = g.outer_cycle()
    for u, w in zip(cyc, cyc[1:] + cyc[:1]):
        face = g.faces[g.face_of(w, u)]
        if len(face) == 3:
            (v,) = set(face) - {u, w}
            if v in interior:
                return u, w, v
    return None


def strip_separating_outer_edges(g: PlaneGraph) -> tuple[PlaneGraph, list[ReductionStep]]:
    """Delete outer edges that close a facial triangle with an interior vertex."""
    steps: list[ReductionStep] = []
    while (hit := _stripping_edge(g)) is not None:
        u, w, _ = hit
        g = delete_edge(g, edge(u, w))
        steps.append(ReductionStep(StepKind.STRIP_EDGE, removed_edges=(edge(u, w),)))
    return g, steps


# ------------------------------------------------------------------ analysis


@dataclass
class Decomposition:
    """``G = Tbar + O1 + O2 + O3`` around the triangle ``u1 u2 u3``."""

    t_bar: PlaneGraph
    pieces: tuple[PlaneGraph, PlaneGraph, PlaneGraph]
    u: tuple[int, int, int]
    v: tuple[int, int, int]

    @property
    def n_t(self) -> int:
        return self.t_bar.n

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(p.n for p in self.pieces)  # type: ignore[return-value]


@dataclass
class StructureReport:
    A: frozenset[int]
    S: frozenset[int]
    interior: frozenset[int]
    outer: tuple[int, ...]
    T: tuple[int, int, int] | None = None
    decomposition: Decomposition | None = None
    notes: list[str] = field(default_factory=list)

    def degree2_in_order(self) -> list[int]:
        return [v for v in self.outer if v in self.A]


def analyze(g: PlaneGraph) -> StructureReport:
    """Degree-2 set, attachment set and (when ``|A| = 3``) the decomposition."""
    hit = _stripping_edge(g)
    if hit is not None:
        u, w, v = hit
        raise HypothesisViolated(f"outer edge {u}-{w} forms a facial triangle with interior vertex {v}")
    cyc = g.outer_cycle()
    interior = g.interior_vertices()
    A = frozenset(v for v in cyc if g.degree(v) == 2)
    S = frozenset(v for v in cyc if g.neighbors(v) & interior)
    rep = StructureReport(A=A, S=S, interior=interior, outer=cyc)
    if not interior or len(A) != 3:
        return rep
    if len(S) != 3:
        raise HypothesisViolated(f"three degree-2 vertices but |S| = {len(S)}")
    us = tuple(v for v in cyc if v in S)
    for a, b in itertools.combinations(us, 2):
        if not g.has_edge(a, b):
            raise HypothesisViolated(f"S does not span a triangle: {a}-{b} missing")
    rep.T = us  # clockwise along C
    t_bar = closed_disk(g, us)
    if not interior <= set(t_bar.vertices):
        raise HypothesisViolated("an interior vertex lies outside the triangle on S")
    pieces = []
    vs = []
    for i in range(3):
        a, b = us[i], us[(i + 1) % 3]
        path = subpath(cyc, a, b)
        piece = closed_disk(g, path)
        inner_deg2 = [x for x in path[1:-1] if x in A]
        if len(inner_deg2) != 1:
            raise HypothesisViolated(f"side {a}..{b} holds {len(inner_deg2)} degree-2 vertices")
        pieces.append(piece)
        vs.append(inner_deg2[0])
    rep.decomposition = Decomposition(t_bar, tuple(pieces), us, tuple(vs))  # type: ignore[arg-type]
    return rep


def degree2_structure_violations(g: PlaneGraph) -> list[str]:
    """Check the degree-2 structure of a stripped graph with interior vertices."""
    out = []
    rep = analyze(g)
    if not rep.interior:
        return out
    if len(rep.S) < 3:
        out.append(f"|S| = {len(rep.S)} < 3")
    if len(rep.A) < 3:
        out.append(f"|A| = {len(rep.A)} < 3")
    if len(rep.A) == 3:
        dec = rep.decomposition
        if dec is None:
            out.append("no decomposition for |A| = 3")
        else:
            inside = set(dec.t_bar.vertices) - set(dec.u)
            if not rep.interior <= inside:
                out.append("interior vertices outside T")
    return out


# ---------------------------------------------------------------- reductions


def _ear(g: PlaneGraph, v: int) -> tuple[int, int, int]:
    if not g.has_vertex(v) or g.degree(v) != 2:
        raise PreconditionFailed(f"{v} is not a degree-2 vertex")
    a, b = g.rotation(v)
    if not g.has_edge(a, b):
        raise PreconditionFailed(f"neighbours {a}, {b} of {v} are not adjacent")
    return v, a, b


def _remove(g: PlaneGraph, vs: Sequence[int]) -> PlaneGraph:
    if g.n - len(vs) < 3:
        raise PreconditionFailed("fewer than three vertices would remain")
    h = delete_vertices(g, vs)
    if not is_near_triangulation(h):
        raise PreconditionFailed(f"removing {list(vs)} does not leave a 2-connected near triangulation")
    return h


def _removed_edges(g: PlaneGraph, vs: Sequence[int]) -> tuple[Edge, ...]:
    gone = set(vs)
    return tuple(e for e in g.edges if gone & set(e))


def reduce_two_deg2(g: PlaneGraph, v1: int, v2: int) -> tuple[PlaneGraph, ReductionStep]:
    e1, e2 = _ear(g, v1), _ear(g, v2)
    if v1 == v2 or not (g.neighbors(v1) & g.neighbors(v2)):
        raise PreconditionFailed(f"{v1} and {v2} share no neighbour")
    if v2 in g.neighbors(v1):
        raise PreconditionFailed(f"{v1} and {v2} are adjacent")
    h = _remove(g, (v1, v2))
    step = ReductionStep(StepKind.TWO_DEG2, (v1, v2), _removed_edges(g, (v1, v2)), ears=(e1, e2))
    return h, step


def reduce_four_deg2(g: PlaneGraph, *vs: int) -> tuple[PlaneGraph, ReductionStep]:
    if len(vs) != 4 or len(set(vs)) != 4:
        raise PreconditionFailed("need four distinct degree-2 vertices")
    ears = tuple(_ear(g, v) for v in vs)
    for a, b in itertools.combinations(vs, 2):
        if g.has_edge(a, b):
            raise PreconditionFailed(f"{a} and {b} are adjacent")
    h = _remove(g, vs)
    return h, ReductionStep(StepKind.FOUR_DEG2, tuple(vs), _removed_edges(g, vs), ears=ears)


def reduce_three_deg2_with_deg3(g: PlaneGraph, *args: int) -> tuple[PlaneGraph, ReductionStep]:
    """Arguments ``v1, v1', v2, v2', v3, v3'``."""
    if len(args) != 6 or len(set(args)) != 6:
        raise PreconditionFailed("need six distinct vertices")
    removed = set(args)
    pairs = []
    for v, vp in zip(args[0::2], args[1::2]):
        _ear(g, v)
        if vp not in g.neighbors(v) or g.degree(vp) != 3:
            raise PreconditionFailed(f"{vp} is not a degree-3 neighbour of {v}")
        (w,) = g.neighbors(v) - {vp}
        rest = g.neighbors(vp) - {v, w}
        if w not in g.neighbors(vp) or len(rest) != 1:
            raise PreconditionFailed(f"{vp} is not adjacent to the other neighbour {w} of {v}")
        (x,) = rest
        if w in removed or x in removed or not g.has_edge(w, x):
            raise PreconditionFailed(f"gadget at {v}, {vp} leans on removed vertices")
        pairs.append((v, vp, w, x))
    h = _remove(g, args)
    return h, ReductionStep(StepKind.THREE_DEG2_WITH_DEG3, tuple(args),
                           _removed_edges(g, args), pairs=tuple(pairs))


def deg3_partner(g: PlaneGraph, v: int, avoid: frozenset[int] = frozenset()) -> int | None:
    """A degree-3 neighbour of the ear ``v`` adjacent to its other neighbour."""
    for vp in sorted(g.neighbors(v)):
        if vp in avoid or g.degree(vp) != 3:
            continue
        others = g.neighbors(v) - {vp}
        if others and next(iter(others)) in g.neighbors(vp):
            return vp
    return None


def ears_sharing_neighbour(g: PlaneGraph, ears: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    for a, b in itertools.combinations(sorted(ears), 2):
        if g.neighbors(a) & g.neighbors(b) and not g.has_edge(a, b):
            out.append((a, b))
    return out


def closest_four(cycle: Sequence[int], ears: Sequence[int]) -> list[tuple[int, ...]]:
    """Windows of four consecutive ears along ``cycle``, tightest first."""
    order = [v for v in cycle if v in set(ears)]
    k, n = len(order), len(cycle)
    pos = {v: i for i, v in enumerate(cycle)}
    wins = []
    for i in range(k):
        win = [order[(i + j) % k] for j in range(4)]
        span = (pos[win[-1]] - pos[win[0]]) % n
        wins.append((span, tuple(sorted(win)), tuple(win)))
    wins.sort()
    seen = []
    for _, key, win in wins:
        if key not in [tuple(sorted(s)) for s in seen]:
            seen.append(win)
    return seen
