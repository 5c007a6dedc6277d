"""Command-line interface: ``orient``, ``verify``, ``exact``, ``census`` and ``generate``.

Exit codes
----------
0  success
1  input is one of the small exceptions and ``--allow-exception`` was not given,
   or an anchored search is infeasible
2  parse error (the message carries the line number when there is one)
3  graph is not a 2-connected near triangulation (or has a bridge)
4  verification failed
5  exact search ran out of budget (the incumbent is still printed)
6  census mismatch
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .catalog import bootstrap, cache_path, default_catalog, load, save
from .census import (
    EXPECTED_EXCEPTIONS,
    cross_check_enumeration,
    exceptions,
    run_census,
    write_census,
)
from .digraph_metrics import (
    INFINITE,
    Certificate,
    anchored_ecc,
    certify,
    distances_from,
    format_or,
    parse_or,
    sinks_and_sources,
    to_dot,
)
from .engine import EngineConfig, orient
from .errors import (
    BudgetExhausted,
    CensusMismatch,
    HasBridge,
    Infeasible,
    NotNearTriangulation,
    ParseError,
    VerificationFailed,
)
from .exact_solver import SearchBudget, SearchStats, anchored_exact, oriented_diameter_exact
from .generators import random_near_triangulation
from .plane_graph import format_pg, is_near_triangulation, parse_pg, undirected_diameter
from .plotting import census_rows, plot_census, plot_orientation

OK, EXCEPTION, PARSE, NOT_NT, FAILED, BUDGET, MISMATCH = 0, 1, 2, 3, 4, 5, 6


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(PARSE, f"{path}: {exc.strerror or exc}") from None


def _load_graph(path: str, *, near_triangulation: bool = True):
    try:
        g = parse_pg(_read_text(path))
    except ParseError as exc:
        raise _Exit(PARSE, f"{path}: {exc}") from None
    if near_triangulation:
        rep = is_near_triangulation(g)
        if not rep:
            raise _Exit(NOT_NT, f"{path}: not a 2-connected near triangulation: "
                                + ("; ".join(rep.problems) or "rejected"))
    return g


def _emit(lines: list[str], payload: dict | None, as_json: bool) -> str:
    if as_json:
        return json.dumps(payload, sort_keys=True) + "\n"
    return "\n".join(lines) + "\n"


def _cert_payload(cert: Certificate, extra: dict | None = None) -> dict:
    payload = json.loads(cert.to_json())
    if extra:
        payload.update(extra)
    return payload


# ------------------------------------------------------------------ orient


def _orient_one(job: tuple) -> tuple[int, str, str]:
    """Run one ``orient`` instance; returns (exit code, stdout text, stderr text)."""
    path, opts = job
    try:
        g = _load_graph(path)
        cfg = EngineConfig(base_case_max_n=opts["base_max"], verify_every_level=opts["verify_levels"])
        try:
            cert = orient(g, cfg)
        except NotNearTriangulation as exc:
            raise _Exit(NOT_NT, f"{path}: {exc}") from None
        except VerificationFailed as exc:
            tail = "".join(f"\ntrace: {t}" for t in exc.trace)
            raise _Exit(FAILED, f"{path}: verification failed: {exc}{tail}") from None
    except _Exit as exc:
        return exc.code, "", str(exc) + "\n"

    out = Path(opts["output"]) if opts["output"] else Path(opts["outdir"] or Path(path).parent) / (Path(path).stem + ".or")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_or(cert.orientation))
    extra = {"seed": opts["seed"]} if opts["seed"] is not None else {}
    lines = cert.report_lines() + [f"seed={opts['seed']}"] * bool(extra)
    report = _emit(lines, _cert_payload(cert, extra), opts["json"])
    out.with_suffix(".report").write_text("\n".join(lines) + "\n")
    if opts["dot"]:
        Path(opts["dot"]).write_text(to_dot(cert.orientation))
    if opts["plot"]:
        title = f"n={cert.n}  diameter={cert.diameter}  bound={cert.bound}"
        plot_orientation(g, cert.orientation, opts["plot"], title=title)
    if cert.exception and not opts["allow_exception"]:
        return EXCEPTION, report, (f"{path}: graph is the exception {cert.name}; "
                                   "its oriented diameter is ceil(n/2)+1 (pass --allow-exception)\n")
    return OK, report, ""


def cmd_orient(args) -> int:
    if len(args.inputs) > 1 and (args.output or args.dot or args.plot):
        raise _Exit(PARSE, "-o, --dot and --plot take a single input")
    opts = {
        "base_max": args.base_max, "verify_levels": args.verify_levels, "output": args.output,
        "outdir": args.outdir, "seed": args.seed, "json": args.json, "dot": args.dot,
        "plot": args.plot, "allow_exception": args.allow_exception,
    }
    jobs = [(p, opts) for p in args.inputs]
    default_catalog()  # build the cache once before any workers start
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_orient_one, jobs))
    else:
        results = [_orient_one(j) for j in jobs]
    worst = OK
    for code, out, err in results:
        sys.stdout.write(out)
        sys.stderr.write(err)
        worst = max(worst, code)
    return worst


# ------------------------------------------------------------------ verify


def _connectivity_problem(cert: Certificate) -> str:
    sinks, sources = sinks_and_sources(cert.orientation)
    if sinks:
        return f"vertex {sinks[0]} is a sink"
    if sources:
        return f"vertex {sources[0]} is a source"
    verts = sorted(cert.orientation.vertices)
    for s in verts:
        dist = distances_from(cert.orientation, s)
        missing = [t for t in verts if t not in dist]
        if missing:
            return f"vertex {missing[0]} is unreachable from {s}"
    return "not strongly connected"


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        d = parse_or(_read_text(args.orientation), g)
    except ParseError as exc:
        raise _Exit(PARSE, f"{args.orientation}: {exc}") from None
    entry = default_catalog().match(g) if g.n <= 8 else None
    cert = certify(d, exception=entry is not None, name=entry.name if entry else None)
    sys.stdout.write(_emit(cert.report_lines(), _cert_payload(cert), args.json))
    if not cert.strongly_connected:
        print(f"FAIL: {_connectivity_problem(cert)}", file=sys.stderr)
        return FAILED
    if cert.diameter > cert.bound:
        if cert.exception and args.allow_exception and cert.diameter <= cert.bound + 1:
            return OK
        print(f"FAIL: diameter {cert.diameter} exceeds bound {cert.bound}", file=sys.stderr)
        return FAILED
    return OK


# ------------------------------------------------------------------- exact


def cmd_exact(args) -> int:
    if (args.anchor is None) != (args.anchor_bound is None):
        raise _Exit(PARSE, "--anchor and --anchor-bound go together")
    g = _load_graph(args.graph, near_triangulation=False)
    budget = SearchBudget(max_nodes=args.budget_nodes, time_limit=args.budget_secs,
                          target_bound=args.target_bound)
    stats = SearchStats()
    code = OK
    try:
        if args.anchor is None:
            value, witness = oriented_diameter_exact(g, budget, stats)
        else:
            if not g.has_vertex(args.anchor):
                raise _Exit(PARSE, f"anchor {args.anchor} is not a vertex")
            value, witness = anchored_exact(g, args.anchor, args.anchor_bound, budget, stats)
        optimal, lower = True, value
    except HasBridge as exc:
        raise _Exit(NOT_NT, f"{args.graph}: {exc}") from None
    except Infeasible as exc:
        raise _Exit(EXCEPTION, f"{args.graph}: {exc}") from None
    except BudgetExhausted as exc:
        value, witness, optimal, lower = exc.value, exc.witness, False, exc.lower_bound
        code = BUDGET
    if optimal and args.target_bound is not None and value <= args.target_bound:
        # an early exit at the target proves nothing beyond the undirected bound
        lower = undirected_diameter(g)
        optimal = value == lower

    shown = None if value is None or value == INFINITE else int(value)
    lines = [f"n={g.n}", f"value={'none' if shown is None else shown}",
             f"optimal={'true' if optimal else 'false'}", f"lower_bound={lower}"]
    payload = {"n": g.n, "value": shown, "optimal": optimal, "lower_bound": lower,
               "nodes": stats.nodes}
    if args.anchor is not None:
        ecc = anchored_ecc(witness, args.anchor) if witness is not None else None
        lines.append(f"anchor={args.anchor} anchored_ecc={ecc}")
        payload.update(anchor=args.anchor, anchored_ecc=ecc)
    if code == BUDGET:
        lines.append("budget_exhausted=true")
        payload["budget_exhausted"] = True
    lines.append(f"nodes={stats.nodes}")
    if witness is not None:
        payload["arcs"] = [list(a) for a in witness.sorted_arcs()]
        if args.output:
            Path(args.output).write_text(format_or(witness))
        elif not args.json:
            lines += ["witness:"] + format_or(witness).splitlines()
    sys.stdout.write(_emit(lines, payload, args.json))
    return code


# ------------------------------------------------------------------ census


def cmd_census(args) -> int:
    cross = cross_check_enumeration(min(args.nmax, args.oracle_max))
    for n, (ours, theirs) in cross.items():
        print(f"cross-check n={n} enumeration={ours} oracle={theirs}")
    records = run_census(args.nmax, jobs=args.jobs)
    outdir = Path(args.outdir)
    tsv = write_census(records, outdir)
    figure = Path(args.figure) if args.figure else outdir / "census.png"
    plot_census(census_rows(records), figure)

    by_n: dict[int, list] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r)
    for n, rs in sorted(by_n.items()):
        ex = [r for r in rs if r.exception]
        print(f"n={n} classes={len(rs)} exceptions={len(ex)}"
              + "".join(f" {r.id}:{r.oriented_diameter}" for r in ex))
    found = exceptions(records)
    print(f"exceptions={len(found)}")
    print(f"wrote {tsv} and {figure}")

    expected = {n: c for n, c in EXPECTED_EXCEPTIONS.items() if n <= args.nmax}
    got: dict[int, int] = {}
    for r in found:
        got[r.n] = got.get(r.n, 0) + 1
    bad = [r for r in found if r.oriented_diameter != r.bound + 1]
    if any(r.exhausted for r in records):
        raise _Exit(MISMATCH, "census incomplete: some exact searches ran out of budget")
    if got != expected or bad:
        raise _Exit(MISMATCH, f"census mismatch: exceptions per n {got}, expected {expected}")

    if args.rebuild_catalog:
        entries = bootstrap(records) if args.nmax >= 8 else load(rebuild=True)
        path = save(entries, cache_path())
        print(f"catalog rebuilt at {path}")
    return OK


# ---------------------------------------------------------------- generate


def cmd_generate(args) -> int:
    g = random_near_triangulation(args.n, args.seed, args.bias)
    text = format_pg(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orient-nt",
                                description="Certified orientations of near triangulations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("orient", help="orient near triangulations within ceil(n/2)")
    o.add_argument("inputs", nargs="+", metavar="INPUT.pg")
    o.add_argument("-o", "--output", help="orientation file (default: INPUT.or)")
    o.add_argument("--outdir", help="directory for .or/.report files in batch mode")
    o.add_argument("--allow-exception", action="store_true",
                   help="exit 0 on the seven small exceptions")
    o.add_argument("--base-max", type=int, default=8, metavar="N",
                   help="solve graphs with at most N vertices exactly (N >= 8)")
    o.add_argument("--verify-levels", action=argparse.BooleanOptionalAction, default=True,
                   help="measure every recursion level by BFS")
    o.add_argument("--dot", metavar="OUT.dot", help="write the orientation as Graphviz DOT")
    o.add_argument("--plot", metavar="OUT.png", help="draw the orientation with matplotlib")
    o.add_argument("--seed", type=int,
                   help="recorded in the report; the engine itself is deterministic")
    o.add_argument("--json", action="store_true", help="print the report as JSON")
    o.add_argument("--jobs", type=int, default=1, metavar="K", help="worker processes for batches")
    o.set_defaults(func=cmd_orient)

    v = sub.add_parser("verify", help="check an orientation file independently")
    v.add_argument("graph", metavar="INPUT.pg")
    v.add_argument("orientation", metavar="INPUT.or")
    v.add_argument("--allow-exception", action="store_true")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("exact", help="exact oriented diameter by branch and bound")
    e.add_argument("graph", metavar="INPUT.pg")
    e.add_argument("--budget-nodes", type=int, default=50_000_000)
    e.add_argument("--budget-secs", type=float, default=3600.0)
    e.add_argument("--target-bound", type=int, help="stop at the first orientation this good")
    e.add_argument("--anchor", type=int, metavar="V")
    e.add_argument("--anchor-bound", type=int, metavar="B")
    e.add_argument("-o", "--output", help="write the witness orientation here")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_exact)

    c = sub.add_parser("census", help="exhaustive census of small near triangulations")
    c.add_argument("--nmax", type=int, default=8)
    c.add_argument("--outdir", default="census_out")
    c.add_argument("--figure", help="census figure path (default: OUTDIR/census.png)")
    c.add_argument("--rebuild-catalog", action="store_true", help="rewrite the exceptions cache")
    c.add_argument("--oracle-max", type=int, default=6,
                   help="cross-check the enumeration against the brute-force oracle up to this n")
    c.add_argument("--jobs", type=int, default=1, metavar="K")
    c.set_defaults(func=cmd_census)

    gen = sub.add_parser("generate", help="write a seeded random near triangulation")
    gen.add_argument("n", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--bias", type=float, default=0.5, help="probability of an interior insertion")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "base_max", 8) < 8:
            raise _Exit(PARSE, "--base-max must be at least 8")
        return args.func(args)
    except _Exit as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except CensusMismatch as exc:
        print(str(exc), file=sys.stderr)
        return MISMATCH


if __name__ == "__main__":
    sys.exit(main())
