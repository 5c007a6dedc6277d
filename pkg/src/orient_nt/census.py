"""Exhaustive census of small near triangulations and their oriented diameters."""

from __future__ import annotations

import csv
import os
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .canonical import graph_form
from .digraph_metrics import INFINITE, Orientation, ceil_half, diameter, format_or
from .errors import BudgetExhausted, CensusMismatch
from .exact_solver import UNLIMITED, SearchBudget, oriented_diameter_exact
from .generators import enumerate as enumerate_graphs
from .generators import oracle_near_triangulations
from .plane_graph import PlaneGraph, format_pg


@dataclass
class CensusRecord:
    id: str
    graph: PlaneGraph
    form: str
    oriented_diameter: int | None
    witness: Orientation | None
    exhausted: bool = False

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def bound(self) -> int:
        return ceil_half(self.n)

    @property
    def exception(self) -> bool:
        return self.oriented_diameter is not None and self.oriented_diameter > self.bound


def _solve(args: tuple[PlaneGraph, SearchBudget]) -> tuple[int | None, Orientation | None, bool]:
    g, budget = args
    try:
        value, witness = oriented_diameter_exact(g, budget)
    except BudgetExhausted as exc:
        return exc.value, exc.witness, True
    # the witness is re-measured independently of the search
    if diameter(witness) != value:
        raise AssertionError("exact solver returned a witness with the wrong diameter")
    return value, witness, False


def cross_check_enumeration(n_max: int = 6) -> dict[int, tuple[int, int]]:
    """Compare class counts with the brute-force oracle; raise on any mismatch."""
    out = {}
    for n in range(3, n_max + 1):
        ours = len(enumerate_graphs(n))
        theirs = len(oracle_near_triangulations(n))
        out[n] = (ours, theirs)
        if ours != theirs:
            raise CensusMismatch(f"n={n}: enumeration gives {ours} classes, oracle gives {theirs}")
    return out


def run_census(n_max: int = 8, budget: SearchBudget = UNLIMITED, jobs: int = 1) -> list[CensusRecord]:
    """Solve every near triangulation with ``3 <= n <= n_max`` exactly."""
    graphs: list[PlaneGraph] = []
    for n in range(3, n_max + 1):
        graphs.extend(enumerate_graphs(n))
    work = [(g, budget) for g in graphs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve, work, chunksize=8))
    else:
        results = [_solve(w) for w in work]
    records = []
    counter: dict[int, int] = {}
    for g, (value, witness, exhausted) in zip(graphs, results):
        counter[g.n] = counter.get(g.n, 0) + 1
        records.append(CensusRecord(
            id=f"n{g.n}_{counter[g.n]:04d}",
            graph=g,
            form=graph_form(g),
            oriented_diameter=None if value is None or value == INFINITE else int(value),
            witness=witness,
            exhausted=exhausted,
        ))
    return records


def exceptions(records: Iterable[CensusRecord]) -> list[CensusRecord]:
    return [r for r in records if r.exception]


EXPECTED_EXCEPTIONS = {4: 2, 6: 4, 8: 1}


def check_exception_counts(records: Iterable[CensusRecord]) -> None:
    """The seven small exceptions: two at n=4, four at n=6, one at n=8."""
    got: dict[int, int] = {}
    for r in exceptions(records):
        got[r.n] = got.get(r.n, 0) + 1
    if got != EXPECTED_EXCEPTIONS:
        raise CensusMismatch(f"exception counts per n are {got}, expected {EXPECTED_EXCEPTIONS}")


def write_census(records: list[CensusRecord], outdir: str | os.PathLike) -> Path:
    """Write ``census.tsv`` plus one ``.pg``/``.or`` pair per graph; return the TSV path."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    tsv = out / "census.tsv"
    with tsv.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["id", "n", "m", "oriented_diameter", "bound", "exception"])
        for r in records:
            od = "" if r.oriented_diameter is None else r.oriented_diameter
            flag = "true" if r.exception else "false"
            if r.exhausted:
                flag += "?"
            w.writerow([r.id, r.n, r.m, od, r.bound, flag])
            ids = {v: i for i, v in enumerate(sorted(r.graph.vertices), start=1)}
            (out / f"{r.id}.pg").write_text(format_pg(r.graph))
            if r.witness is not None:
                (out / f"{r.id}.or").write_text(format_or(r.witness, ids))
    return tsv


def read_census_tsv(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh, delimiter="\t"))
