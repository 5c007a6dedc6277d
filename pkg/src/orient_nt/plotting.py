"""Figures for census runs and single orientations.

Everything goes through :class:`matplotlib.figure.Figure` directly, so no
global pyplot state or interactive backend is touched and the functions are
safe to call from worker processes.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from collections.abc import Iterable, Mapping
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import FancyArrowPatch
from matplotlib.ticker import MaxNLocator, NullFormatter, ScalarFormatter

from .digraph_metrics import Orientation, ceil_half
from .plane_graph import PlaneGraph

WITHIN = "#4c72b0"
EXCEPTION = "#c44e52"
ARC = "#333333"


def tutte_layout(g: PlaneGraph) -> dict[int, tuple[float, float]]:
    """Barycentric embedding: outer cycle on the unit circle, inner vertices averaged.

    The outer cycle is placed clockwise so the drawing agrees with the
    rotation system.  For a 2-connected plane graph the linear system has a
    unique solution and the drawing is crossing-free.
    """
    cyc = g.outer_cycle()
    pos: dict[int, tuple[float, float]] = {}
    k = len(cyc)
    for i, v in enumerate(cyc):
        angle = math.pi / 2 - 2 * math.pi * i / k
        pos[v] = (math.cos(angle), math.sin(angle))
    inner = sorted(set(g.vertices) - set(cyc))
    if inner:
        idx = {v: i for i, v in enumerate(inner)}
        lap = np.zeros((len(inner), len(inner)))
        rhs = np.zeros((len(inner), 2))
        for v in inner:
            i = idx[v]
            lap[i, i] = g.degree(v)
            for w in g.neighbors(v):
                if w in idx:
                    lap[i, idx[w]] -= 1.0
                else:
                    rhs[i] += pos[w]
        sol = np.linalg.solve(lap, rhs)
        for v in inner:
            pos[v] = (float(sol[idx[v], 0]), float(sol[idx[v], 1]))
    return pos


def plot_orientation(g: PlaneGraph, d: Orientation, path: str | os.PathLike,
                     *, title: str | None = None, highlight: Iterable[int] = ()) -> Path:
    """Draw ``d`` over the barycentric layout of ``g`` and save it to ``path``."""
    pos = tutte_layout(g)
    marked = set(highlight)
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot()
    for u, v in d.sorted_arcs():
        ax.add_patch(FancyArrowPatch(pos[u], pos[v], arrowstyle="-|>", mutation_scale=12,
                                     color=ARC, linewidth=1.0, shrinkA=9, shrinkB=9))
    xs = [pos[v][0] for v in g.vertices]
    ys = [pos[v][1] for v in g.vertices]
    colors = [EXCEPTION if v in marked else WITHIN for v in g.vertices]
    ax.scatter(xs, ys, s=260, c=colors, zorder=3, edgecolors="white", linewidths=1.0)
    for v in g.vertices:
        ax.annotate(str(v), pos[v], ha="center", va="center", color="white",
                    fontsize=8, zorder=4)
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.margins(0.08)
    if title:
        ax.set_title(title, fontsize=10)
    out = Path(path)
    fig.savefig(out, bbox_inches="tight", dpi=150)
    return out


def plot_census(rows: Iterable[Mapping[str, object]], path: str | os.PathLike) -> Path:
    """Two panels: classes per n (exceptions stacked on top) and the spread of
    oriented diameters against ``ceil(n/2)``.

    ``rows`` are mappings with keys ``n``, ``oriented_diameter`` and
    ``exception`` (census records converted with :func:`census_rows` or the
    rows of a ``census.tsv``).
    """
    rows = list(rows)
    within: Counter[int] = Counter()
    over: Counter[int] = Counter()
    spread: Counter[tuple[int, int]] = Counter()
    for r in rows:
        n = int(r["n"])  # type: ignore[arg-type]
        flag = str(r["exception"]).startswith("true") if isinstance(r["exception"], str) else bool(r["exception"])
        (over if flag else within)[n] += 1
        od = r["oriented_diameter"]
        if od not in (None, ""):
            spread[(n, int(od))] += 1  # type: ignore[arg-type]
    ns = sorted(set(within) | set(over))

    fig = Figure(figsize=(9.0, 3.6))
    left, right = fig.subplots(1, 2)
    base = [within[n] for n in ns]
    left.bar(ns, base, color=WITHIN, label="diameter within ceil(n/2)")
    left.bar(ns, [over[n] for n in ns], bottom=base, color=EXCEPTION, label="exception")
    for n in ns:
        if over[n]:
            left.annotate(str(over[n]), (n, within[n] + over[n]), ha="center", va="bottom",
                          fontsize=8, color=EXCEPTION)
    left.set_yscale("log")
    left.set_ylim(bottom=0.5)
    left.yaxis.set_major_formatter(ScalarFormatter())
    left.yaxis.set_minor_formatter(NullFormatter())
    left.set_xlabel("n")
    left.set_ylabel("isomorphism classes")
    left.set_xticks(ns)
    left.legend(frameon=False, fontsize=8)

    if spread:
        pts = sorted(spread)
        sizes = [20 + 30 * math.log2(1 + spread[p]) for p in pts]
        hot = [EXCEPTION if od > ceil_half(n) else WITHIN for n, od in pts]
        right.scatter([p[0] for p in pts], [p[1] for p in pts], s=sizes, c=hot, zorder=3)
    grid = np.arange(min(ns, default=3), max(ns, default=3) + 1)
    right.step(grid, [ceil_half(int(n)) for n in grid], where="mid", color="grey",
               linestyle="--", linewidth=1.0, label="ceil(n/2)")
    right.set_xlabel("n")
    right.set_ylabel("oriented diameter")
    right.yaxis.set_major_locator(MaxNLocator(integer=True))
    right.set_xticks(ns)
    right.legend(frameon=False, fontsize=8, loc="upper left")

    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    return out


def census_rows(records) -> list[dict[str, object]]:
    return [{"n": r.n, "oriented_diameter": r.oriented_diameter, "exception": r.exception}
            for r in records]
