"""Command-line interface: simulate, analyze, classify, product, report.

Every command writes one JSON document (to ``--out`` or stdout) that embeds a
manifest of the resolved configuration.  Exit codes: 0 success or positive
verdict, 1 usage/parse error, 2 counterexample found, 3 state budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .fixtures import resolve_graph, terminals
from .graph import Graph, GraphFormatError, UnreachableError, dump_graph
from .markov import (
    ChainError,
    ClosedClass,
    is_convergent_bounded,
    is_stable_bounded,
    period,
    is_irreducible,
    stationary_distribution,
    transition_matrix,
)
from .products import ProductSizeError, cartesian_product, strong_product
from .recognizers import is_chordal, is_pseudo_modular
from .simulation import (
    PursuitConfig,
    distance_law_violations,
    length_histogram,
    run_pursuit,
    stabilization_index,
    trace_records,
    visit_frequencies,
)
from .walks import DEFAULT_BUDGET, BudgetExceeded

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_BUDGET = 3

# classes larger than this are reported by size only
WALK_LISTING_LIMIT = 1_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which would collide with "counterexample"
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _budget() -> int:
    raw = os.environ.get("PURSUIT_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"PURSUIT_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("PURSUIT_BUDGET must be positive")
    return value


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _manifest(cmd: str, config: dict[str, Any], inputs: dict[str, str]) -> dict[str, Any]:
    return {
        "subcommand": cmd,
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "inputs": {k: {"source": k, "sha256": _digest(v)} for k, v in inputs.items()},
    }


def _load(name_or_path: str) -> tuple[Graph, str]:
    try:
        return resolve_graph(name_or_path)
    except (GraphFormatError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot load graph {name_or_path!r}: {exc}") from None


def _terminals(g: Graph, args: argparse.Namespace) -> tuple[int, int]:
    marked = terminals(g)
    s = args.source if args.source is not None else (marked[0] if marked else None)
    t = args.target if args.target is not None else (marked[1] if marked else None)
    if s is None or t is None:
        raise UsageError("--source and --target are required for this graph")
    for v in (s, t):
        if not 0 <= v < g.n:
            raise UsageError(f"vertex {v} out of range for a graph with {g.n} vertices")
    return s, t


def _delta(args: argparse.Namespace) -> int:
    if args.delta < 2:
        raise UsageError("delta must exceed 1")
    return args.delta


def _parse_walk(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"--initial must be comma-separated vertices, got {text!r}") from None


def _emit(doc: dict[str, Any], out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _sidecar(out: str, suffix: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + suffix)


def _frac(x: object) -> str | float:
    return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else float(x)  # type: ignore[arg-type]


# --------------------------------------------------------------------------
# simulate


def cmd_simulate(args: argparse.Namespace) -> int:
    g, text = _load(args.graph)
    s, t = _terminals(g, args)
    delta = _delta(args)
    if args.initial is None:
        raise UsageError("an initial walk for agent 0 is required (--initial)")
    walk = _parse_walk(args.initial)
    try:
        cfg = PursuitConfig(g, s, t, delta, tuple(walk), args.agents, args.seed)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from None
    trace = run_pursuit(cfg, record_ticks=args.check_distances)
    hist = length_histogram(trace)
    config = {
        "graph": args.graph, "source": s, "target": t, "delta": delta,
        "agents": args.agents, "seed": args.seed, "initial": walk,
        "threads": args.threads, "check_distances": args.check_distances,
    }
    freqs = visit_frequencies(trace, g.n)
    summary: dict[str, Any] = {
        "length_histogram": {str(k): v for k, v in hist.items()},
        "stabilization_index": stabilization_index(trace),
        "final_length": len(trace.walks[-1]),
        "visit_frequencies": [
            {"vertex": v, "walks": c, "rate": rate} for v, c, rate in freqs
        ],
    }
    if args.check_distances:
        summary["distance_violations"] = [list(v) for v in distance_law_violations(g, trace)]
    result = {"summary": summary, "agents": trace_records(trace)}
    manifest = _manifest("simulate", config, {args.graph: text})
    _emit({"manifest": manifest, "result": result}, args.out)

    buf = io.StringIO()
    buf.write(f"# {json.dumps(manifest, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vertex", "label", "walks", "fraction"])
    for v, count, rate in freqs:
        writer.writerow([v, g.labels.get(v, v), count, f"{rate:.6f}"])
    if args.out is not None:
        _sidecar(args.out, ".visits.csv").write_text(buf.getvalue(), encoding="utf-8")
        for length, count in hist.items():
            print(f"length {length}: {count}")
    return EXIT_OK


# --------------------------------------------------------------------------
# analyze


def _class_report(cls: ClosedClass) -> dict[str, Any]:
    rep: dict[str, Any] = {
        "length": cls.length,
        "size": len(cls),
        "shortest": cls.is_shortest,
    }
    if len(cls) <= WALK_LISTING_LIMIT:
        rep["walks"] = [list(w) for w in cls.walks]
    try:
        m = transition_matrix(cls)
    except ChainError as exc:
        rep["error"] = str(exc)
        return rep
    rep["doubly_stochastic"] = m.is_doubly_stochastic()
    if not is_irreducible(m):
        rep["stationary"] = None
        rep["note"] = "reducible"
        return rep
    p = period(m)
    rep["period"] = p
    if p != 1:
        rep["stationary"] = None
        return rep
    st = stationary_distribution(m)
    rep["stationary_method"] = st.method
    rep["stationary"] = [_frac(x) for x in st.vector]
    rep["uniform"] = st.is_uniform()
    return rep


def cmd_analyze(args: argparse.Namespace) -> int:
    g, text = _load(args.graph)
    s, t = _terminals(g, args)
    delta = _delta(args)
    if g.dist[s][t] < 0:
        raise UsageError(f"{s} and {t} are disconnected")
    d = g.dist[s][t]
    max_length = args.max_length if args.max_length is not None else d + 1 + 2 * delta
    budget = _budget()
    config = {
        "graph": args.graph, "source": s, "target": t, "delta": delta,
        "max_length": max_length, "budget": budget, "threads": args.threads, "seed": None,
    }
    manifest = _manifest("analyze", config, {args.graph: text})
    try:
        conv = is_convergent_bounded(g, s, t, delta, max_length, budget)
        stab = is_stable_bounded(g, s, t, delta, max_length, budget, classes=conv.classes)
    except BudgetExceeded as exc:
        _emit({"manifest": manifest, "result": {"verdict": "budget-exceeded", "detail": str(exc)}},
              args.out)
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    result = {
        "distance": d,
        "convergence": conv.verdict.value,
        "stability": stab.verdict.value,
        "classes": [_class_report(c) for c in conv.classes],
    }
    if conv.counterexample is not None:
        result["counterexample"] = {
            "length": conv.counterexample.length,
            "walk": list(conv.counterexample.walks[0]),
        }
    _emit({"manifest": manifest, "result": result}, args.out)
    return EXIT_OK if conv.ok else EXIT_COUNTEREXAMPLE


# --------------------------------------------------------------------------
# classify


def cmd_classify(args: argparse.Namespace) -> int:
    g, text = _load(args.graph)
    chordal = is_chordal(g)
    result: dict[str, Any] = {"n": g.n, "chordal": chordal.to_json()}
    if g.connected:
        result["pseudo_modular"] = is_pseudo_modular(g).to_json()
    else:
        result["pseudo_modular"] = {"pseudo_modular": None, "note": "graph is disconnected"}
    config = {"graph": args.graph, "threads": args.threads, "seed": None}
    _emit({"manifest": _manifest("classify", config, {args.graph: text}), "result": result},
          args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# product


def cmd_product(args: argparse.Namespace) -> int:
    if len(args.graph) != 2:
        raise UsageError("product needs exactly two --graph arguments")
    (g1, t1), (g2, t2) = (_load(x) for x in args.graph)
    build = {"cartesian": cartesian_product, "strong": strong_product}[args.kind]
    try:
        pg = build(g1, g2)
    except ProductSizeError as exc:
        raise UsageError(str(exc)) from None
    config = {"factors": list(args.graph), "kind": args.kind, "seed": None}
    manifest = _manifest("product", config, {args.graph[0]: t1, args.graph[1]: t2})
    g = pg.graph
    g.meta["comment"] = (
        f"{args.kind} product of {args.graph[0]} ({g1.n} vertices) and "
        f"{args.graph[1]} ({g2.n} vertices); vertex (x, y) is x*{g2.n} + y"
    )
    g.meta["manifest"] = manifest
    text = dump_graph(g)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


# --------------------------------------------------------------------------
# report


def cmd_report(args: argparse.Namespace) -> int:
    """Turn a simulate result into a per-agent table for plotting."""
    try:
        doc = json.loads(Path(args.trace).read_text(encoding="utf-8"))
        walks = [rec["walk"] for rec in doc["result"]["agents"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read trace {args.trace!r}: {exc}") from None
    buf = io.StringIO()
    buf.write(f"# {json.dumps(doc.get('manifest'), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["agent", "length", "walk"])
    for i, w in enumerate(walks):
        writer.writerow([i, len(w), "-".join(str(v) for v in w)])
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chainpursuit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--threads", type=int, default=1,
                        help="parallelism cap (recorded; work runs single-threaded)")

    def endpoints(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--graph", required=True, help="graph file path or fixture name")
        sp.add_argument("--source", type=int)
        sp.add_argument("--target", type=int)
        sp.add_argument("--delta", type=int, default=2)

    sim = sub.add_parser("simulate", help="run a seeded chain pursuit")
    endpoints(sim)
    sim.add_argument("--agents", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--initial", help="walk of agent 0, e.g. 0,1,2")
    sim.add_argument("--check-distances", action="store_true",
                     help="record tick positions and report distance-bound violations")
    common(sim)
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analyze", help="enumerate closed classes up to a walk length")
    endpoints(ana)
    ana.add_argument("--max-length", type=int,
                     help="longest walk considered, in vertices (default d+1+2*delta)")
    common(ana)
    ana.set_defaults(func=cmd_analyze)

    cls = sub.add_parser("classify", help="chordality and pseudo-modularity")
    cls.add_argument("--graph", required=True)
    common(cls)
    cls.set_defaults(func=cmd_classify)

    prod = sub.add_parser("product", help="Cartesian or strong product of two graphs")
    prod.add_argument("--graph", action="append", default=[], required=True,
                      help="factor graph; give twice")
    prod.add_argument("--kind", choices=["cartesian", "strong"], default="cartesian")
    common(prod)
    prod.set_defaults(func=cmd_product)

    rep = sub.add_parser("report", help="per-agent CSV table from a simulate result")
    rep.add_argument("--trace", required=True, help="JSON written by simulate")
    common(rep)
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnreachableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
