"""Certifying orientation of 2-connected near triangulations within ceil(n/2).

The recursion follows the inductive argument for near triangulations:

1. the seven small exceptions come from the catalog;
2. graphs with at most ``base_case_max_n`` vertices are solved exactly;
3. otherwise outer edges closing a facial triangle with an interior vertex
   are deleted (the result spans the input);
4. a stripped graph with four or more degree-2 vertices loses four ears
   (``+2``), falling back to two ears with a common neighbour (``+1``) when
   the smaller graph would be an exception;
5. with exactly three degree-2 vertices the graph splits into a triangle
   ``T`` on the attachment set and three maximal outerplanar pieces, handled
   by the three cases below.

Maximal outerplanar graphs use the same ear reductions plus the
ear/degree-3 reduction.  When none applies (the graph is a strip, or a
tripod with one leg of length one) the decision search for an orientation
within ``ceil(n/2)`` is run.  Every level is measured by BFS; a level that
misses its bound is redone by that search, and only when the search also
fails does :class:`VerificationFailed` surface.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .canonical import canonical_labeling
from .catalog import Catalog, default_catalog
from .digraph_metrics import (
    Certificate,
    Orientation,
    anchored_ecc,
    ceil_half,
    certify,
    combine,
    diameter,
)
from .errors import (
    AnchorUnmet,
    BudgetExhausted,
    HasBridge,
    Infeasible,
    NotMaximalOuterplanar,
    NotNearTriangulation,
    OrientError,
    PreconditionFailed,
    VerificationFailed,
)
from .exact_solver import SearchBudget, anchored_exact, has_orientation_within, oriented_diameter_exact
from .plane_graph import PlaneGraph, delete_vertices, is_maximal_outerplanar, is_near_triangulation
from .structure import (
    ReductionStep,
    StructureReport,
    analyze,
    closest_four,
    deg3_partner,
    ears_sharing_neighbour,
    reduce_four_deg2,
    reduce_three_deg2_with_deg3,
    reduce_two_deg2,
    strip_separating_outer_edges,
)


@dataclass(frozen=True)
class EngineConfig:
    base_case_max_n: int = 8
    budget: SearchBudget = field(default_factory=lambda: SearchBudget(max_nodes=5_000_000, time_limit=600.0))
    verify_every_level: bool = True

    def __post_init__(self):
        if self.base_case_max_n < 8:
            raise ValueError("base_case_max_n must be at least 8")


class _Miss(Exception):
    """A level produced an orientation above its bound."""


class _Engine:
    def __init__(self, cfg: EngineConfig, catalog: Catalog):
        self.cfg = cfg
        self.catalog = catalog
        self.trace: list[str] = []
        self._memo: dict[str, tuple[int, list[tuple[int, int]]]] = {}

    # ---------------------------------------------------------------- helpers

    def note(self, line: str) -> None:
        self.trace.append(line)

    def check(self, g: PlaneGraph, d: Orientation, bound: int, what: str) -> Orientation:
        d.check_covers(g)
        if self.cfg.verify_every_level and diameter(d) > bound:
            raise _Miss(f"{what}: diameter exceeds {bound} on n={g.n}")
        return d

    def exact(self, g: PlaneGraph) -> Orientation:
        """Optimal orientation, memoised on the abstract graph."""
        code, order = canonical_labeling(g.adjacency())
        key = ",".join(map(str, code))
        if key not in self._memo:
            value, d = oriented_diameter_exact(g, self.cfg.budget)
            pos = {v: i for i, v in enumerate(order)}
            self._memo[key] = (int(value), [(pos[a], pos[b]) for a, b in d.arcs])
        value, arcs = self._memo[key]
        self.note(f"exact n={g.n} diameter={value}")
        return Orientation.from_arcs(((order[a], order[b]) for a, b in arcs), g.vertices)

    def search(self, g: PlaneGraph, bound: int, why: str, anchor: int | None = None,
               anchor_bound: int | None = None) -> Orientation:
        try:
            d = has_orientation_within(g, bound, self.cfg.budget, anchor=anchor, anchor_bound=anchor_bound)
        except (BudgetExhausted, HasBridge) as exc:
            raise VerificationFailed(f"search for diameter <= {bound} on n={g.n} failed: {exc}",
                                     self.trace) from None
        if d is None:
            raise VerificationFailed(f"no orientation of the n={g.n} graph has diameter <= {bound}",
                                     self.trace)
        self.note(f"search n={g.n} bound={bound} ({why})")
        return d

    def exception_of(self, g: PlaneGraph):
        return self.catalog.match(g)

    # ----------------------------------------------------------------- driver

    def solve(self, g: PlaneGraph) -> Orientation:
        """Orientation of ``g`` within ceil(n/2), or the catalog one for an exception."""
        if g.n == 3:
            a, b, c = g.outer_cycle()
            return Orientation.from_arcs([(a, b), (b, c), (c, a)], g.vertices)
        entry = self.exception_of(g)
        if entry is not None:
            self.note(f"catalog {entry.name}")
            return self.catalog.orientation_for(g)[1]
        bound = ceil_half(g.n)
        if g.n <= self.cfg.base_case_max_n:
            return self.check(g, self.exact(g), bound, "exact base case")
        try:
            return self.check(g, self._reduce(g), bound, "reduction")
        except (_Miss, PreconditionFailed, VerificationFailed) as exc:
            self.note(f"fallback n={g.n}: {exc}")
            return self.search(g, bound, "fallback")

    def _reduce(self, g: PlaneGraph) -> Orientation:
        stripped, steps = strip_separating_outer_edges(g)
        for s in steps:
            self.note(s.trace())
        if not stripped.interior_vertices():
            d = self.outerplanar(stripped)
        else:
            d = self.near_triangulation(stripped, analyze(stripped))
        for s in reversed(steps):
            d = s.extend(d)
        return d

    def replay(self, g: PlaneGraph, h: PlaneGraph, step: ReductionStep) -> Orientation:
        self.note(step.trace())
        d_h = self.solve(h)
        d = step.extend(d_h)
        if self.cfg.verify_every_level:
            dh = diameter(d_h)
            if diameter(d) > step.contract(dh):
                raise VerificationFailed(f"{step.kind.value} extension broke its contract", self.trace)
        return d

    # --------------------------------------------------- near triangulations

    def near_triangulation(self, g: PlaneGraph, rep: StructureReport) -> Orientation:
        if len(rep.A) >= 4:
            return self.many_ears(g, rep)
        if len(rep.A) != 3 or rep.decomposition is None:
            raise PreconditionFailed(f"stripped graph has |A| = {len(rep.A)}")
        sizes = rep.decomposition.sizes
        small = [i for i in range(3) if sizes[i] == 3]
        if len(small) >= 2:
            return self.case1(g, rep)
        if len(small) == 1:
            return self.case2(g, rep)
        return self.case3(g, rep)

    def many_ears(self, g: PlaneGraph, rep: StructureReport) -> Orientation:
        for win in closest_four(rep.outer, rep.A):
            h, step = reduce_four_deg2(g, *win)
            if self.exception_of(h) is None:
                return self.replay(g, h, step)
        # every choice of four ears leaves W5 or G6^3: two ears with a common neighbour
        for v1, v2 in ears_sharing_neighbour(g, rep.degree2_in_order()):
            h, step = reduce_two_deg2(g, v1, v2)
            if self.exception_of(h) is None:
                return self.replay(g, h, step)
        raise PreconditionFailed("no admissible ear reduction")

    def case1(self, g: PlaneGraph, rep: StructureReport) -> Orientation:
        dec = rep.decomposition
        sizes = dec.sizes
        for i in range(3):
            j = (i + 1) % 3
            if sizes[i] == 3 and sizes[j] == 3:
                h, step = reduce_two_deg2(g, dec.v[i], dec.v[j])
                if self.exception_of(h) is not None:
                    raise PreconditionFailed("case 1 left an exception")
                self.note(f"case1 u={dec.u[j]}")
                return self.replay(g, h, step)
        raise PreconditionFailed("case 1 needs two triangular pieces")

    def anchored_piece(self, piece: PlaneGraph, anchor: int, bound: int, what: str) -> Orientation:
        """Orientation of a piece with anchored eccentricity at most ``bound``."""
        entry = self.exception_of(piece)
        if entry is not None:
            self.note(f"catalog {entry.name} anchored at {anchor}")
            d = self.catalog.orientation_for(piece, anchor=anchor)[1]
        else:
            d = self.solve(piece)
        if anchored_ecc(d, anchor) > bound:
            try:
                _, d = anchored_exact(piece, anchor, bound, self.cfg.budget)
            except (Infeasible, BudgetExhausted) as exc:
                raise AnchorUnmet(f"{what}: anchor {anchor} cannot be kept within {bound}: {exc}",
                                  self.trace) from None
            self.note(f"anchored-exact n={piece.n} anchor={anchor} bound={bound}")
        return d

    def case2(self, g: PlaneGraph, rep: StructureReport) -> Orientation:
        dec = rep.decomposition
        k = dec.sizes.index(3)
        r = (k + 1) % 3
        u1, u2, u3 = (dec.u[(r + i) % 3] for i in range(3))
        o1, o2, o3 = (dec.pieces[(r + i) % 3] for i in range(3))
        v3 = dec.v[k]
        n_t, n1, n2 = dec.n_t, o1.n, o2.n
        self.note(f"case2 u={u1},{u2},{u3} sizes T={n_t} O1={n1} O2={n2}")
        if n1 + n2 + n_t != g.n + 3:
            raise PreconditionFailed("piece sizes do not add up")
        t_entry = self.exception_of(dec.t_bar)
        if t_entry is not None and t_entry.name != "K4":
            raise PreconditionFailed(f"triangle closure is the exception {t_entry.name}")
        d_t = self.anchored_piece(dec.t_bar, u2, ceil_half(n_t), "closure of T")
        d = d_t
        for piece in (o1, o2):
            d_i = self.anchored_piece(piece, u2, ceil_half(piece.n), "outerplanar piece")
            d = combine(d, d_i)
        a, b = d.direction(u3, u1)
        return Orientation(d.arcs | {(b, v3), (v3, a)}, d.vertices | {v3})

    def case3(self, g: PlaneGraph, rep: StructureReport) -> Orientation:
        dec = rep.decomposition
        args: list[int] = []
        partners = []
        for i in range(3):
            v = dec.v[i]
            allowed = set(dec.pieces[i].vertices) - {dec.u[i], dec.u[(i + 1) % 3]}
            vp = deg3_partner(g, v, avoid=frozenset(set(g.vertices) - allowed))
            if vp is None:
                raise PreconditionFailed(f"ear {v} has no degree-3 partner in its piece")
            args += [v, vp]
            partners.append(vp)
        h, step = reduce_three_deg2_with_deg3(g, *args)
        entry = self.exception_of(h)
        if entry is None:
            return self.replay(g, h, step)
        if entry.name not in ("K4", "G6_3"):
            raise PreconditionFailed(f"case 3 left the exception {entry.name}")
        return self.case3_special(g, dec, partners, entry.name)

    def case3_special(self, g: PlaneGraph, dec, partners: list[int], name: str) -> Orientation:
        n = g.n
        k4m = [i for i in range(3) if self.exception_of(dec.pieces[i]) is not None
               and self.exception_of(dec.pieces[i]).name == "K4minus"]
        for a, b in itertools.permutations(k4m, 2):
            if (a + 1) % 3 != b:
                continue
            x = dec.u[b]  # shared by pieces a and b
            self.note(f"case3-special H={name} anchor={x}")
            gone = [dec.v[a], partners[a], dec.v[b], partners[b]]
            h2 = delete_vertices(g, gone)
            if not is_near_triangulation(h2):
                raise PreconditionFailed("H' is not a near triangulation")
            d = self.anchored_piece(h2, x, n // 2 - 2, "H'")
            if diameter(d) > n // 2 - 1:
                raise AnchorUnmet("H' orientation too long", self.trace)
            for i in (a, b):
                d = combine(d, self.anchored_piece(dec.pieces[i], x, 2, "K4minus piece"))
            return d
        raise PreconditionFailed("case 3 special needs two adjacent K4minus pieces")

    # ---------------------------------------------------- outerplanar graphs

    def outerplanar(self, g: PlaneGraph) -> Orientation:
        cyc = g.outer_cycle()
        ears = [v for v in cyc if g.degree(v) == 2]
        if len(ears) >= 4:
            for win in closest_four(cyc, ears):
                h, step = reduce_four_deg2(g, *win)
                if self.exception_of(h) is None:
                    return self.replay(g, h, step)
        for v1, v2 in ears_sharing_neighbour(g, ears):
            h, step = reduce_two_deg2(g, v1, v2)
            if self.exception_of(h) is None:
                return self.replay(g, h, step)
        for trio in itertools.combinations(ears, 3):
            args: list[int] = []
            used: set[int] = set(trio)
            for v in trio:
                vp = deg3_partner(g, v, avoid=frozenset(used))
                if vp is None:
                    break
                used.add(vp)
                args += [v, vp]
            else:
                try:
                    h, step = reduce_three_deg2_with_deg3(g, *args)
                except PreconditionFailed:
                    continue
                if self.exception_of(h) is None:
                    return self.replay(g, h, step)
        kind = "strip" if len(ears) == 2 else "tripod"
        return self.search(g, ceil_half(g.n), f"outerplanar {kind}")


# ------------------------------------------------------------------ public


def _engine(cfg: EngineConfig | None, catalog: Catalog | None) -> _Engine:
    return _Engine(cfg or EngineConfig(), catalog or default_catalog())


def _finish(eng: _Engine, g: PlaneGraph, d: Orientation) -> Certificate:
    entry = eng.exception_of(g)
    cert = certify(d, exception=entry is not None, trace=eng.trace,
                   name=entry.name if entry is not None else None)
    if not cert.strongly_connected or not cert.recheck():
        raise VerificationFailed("certificate failed re-verification", eng.trace)
    if not cert.exception and cert.diameter > cert.bound:
        raise VerificationFailed(f"diameter {cert.diameter} exceeds bound {cert.bound}", eng.trace)
    return cert


def _require_nt(g: PlaneGraph) -> None:
    rep = is_near_triangulation(g)
    if not rep:
        raise NotNearTriangulation("; ".join(rep.problems) or "not a near triangulation")


def orient(g: PlaneGraph, cfg: EngineConfig | None = None, catalog: Catalog | None = None) -> Certificate:
    """Certified orientation with diameter at most ceil(n/2) (exceptions: ceil(n/2)+1)."""
    _require_nt(g)
    eng = _engine(cfg, catalog)
    try:
        d = eng.solve(g)
    except VerificationFailed:
        raise
    except OrientError as exc:
        raise VerificationFailed(str(exc), eng.trace) from exc
    return _finish(eng, g, d)


def orient_case1(g: PlaneGraph, report: StructureReport, cfg: EngineConfig | None = None) -> Certificate:
    return _run_case(g, report, cfg, "case1")


def orient_case2(g: PlaneGraph, report: StructureReport, cfg: EngineConfig | None = None) -> Certificate:
    return _run_case(g, report, cfg, "case2")


def orient_case3(g: PlaneGraph, report: StructureReport, cfg: EngineConfig | None = None) -> Certificate:
    return _run_case(g, report, cfg, "case3")


def _run_case(g: PlaneGraph, report: StructureReport, cfg, which: str) -> Certificate:
    if report.decomposition is None:
        raise PreconditionFailed("no decomposition: the graph does not have exactly three degree-2 vertices")
    sizes = report.decomposition.sizes
    small = sum(1 for s in sizes if s == 3)
    want = {"case1": small >= 2, "case2": small == 1, "case3": small == 0}[which]
    if not want:
        raise PreconditionFailed(f"{which} does not apply to piece sizes {sizes}")
    eng = _engine(cfg, None)
    d = getattr(eng, which)(g, report)
    eng.check(g, d, ceil_half(g.n), which)
    return _finish(eng, g, d)


def orient_outerplanar(g: PlaneGraph, anchor: int | None = None, cfg: EngineConfig | None = None) -> Certificate:
    """Certified orientation of a maximal outerplanar graph, optionally anchored."""
    if not is_maximal_outerplanar(g):
        raise NotMaximalOuterplanar("graph has interior vertices or non-triangular inner faces")
    eng = _engine(cfg, None)
    bound = ceil_half(g.n)
    if anchor is None:
        d = eng.solve(g)
    else:
        d = eng.anchored_piece(g, anchor, bound, "outerplanar graph")
        if anchored_ecc(d, anchor) > bound:
            raise AnchorUnmet(f"anchor {anchor} misses {bound}", eng.trace)
    return _finish(eng, g, d)
