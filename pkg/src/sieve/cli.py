"""Command-line driver.

Exit codes: 0 success, 2 bad input or flags, 3 a time budget ran out (the
best partition found is still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .components import component_size_distribution, decompose
from .evaluate import jaccard, read_assignment, summarize, write_summary_csv
from .graph import GraphFormatError, SparseGraph, degree_report, read_edge_list
from .objectives import DEFAULT_DENSITY_GATE, component_partitions, eval_Q, eval_S_global
from .solver import export_mip

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3

log = logging.getLogger("sieve")


class InputError(Exception):
    pass


def _load(path: str, hint: int | None = None) -> SparseGraph:
    try:
        return read_edge_list(path, hint)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None
    except GraphFormatError as e:
        raise InputError(f"{path}: {e}") from None


def _density_gate(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("density gate must be positive")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _add_graph(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", help="edge-list file (two node tokens per line, '#' comments)")
    p.add_argument("--nodes", type=int, default=None, help="total node count, to include trailing isolated nodes")


def _add_solver(p: argparse.ArgumentParser) -> None:
    p.add_argument("--objective", choices=("s", "q"), default="s")
    p.add_argument("--density-gate", type=_density_gate, default=DEFAULT_DENSITY_GATE, metavar="D")
    p.add_argument("--time-limit", type=_positive, default=None, metavar="SECONDS", help="budget per component")
    p.add_argument("--jobs", type=int, default=1)


def cmd_components(args) -> int:
    g = _load(args.graph, args.nodes)
    cs = decompose(g)
    out = sys.stdout
    out.write("component_id\tn_i\tm_i\tdensity\n")
    for c in cs:
        if c.n == 1 and not args.all:
            continue
        out.write(f"{c.id}\t{c.n}\t{c.m}\t{c.density:.6f}\n")
    if args.summary:
        rep = degree_report(g)
        dist = component_size_distribution(cs)
        print(f"# nodes={g.n} edges={g.m} edges_per_node={rep.edges_per_node:.3f} "
              f"mean_degree={rep.mean_degree:.3f} zero_degree={rep.zero_degree_fraction:.4f}", file=sys.stderr)
        print("# sizes " + " ".join(f"{s}:{k}" for s, k in dist.items()), file=sys.stderr)
    return EXIT_OK


def cmd_score(args) -> int:
    g = _load(args.graph, args.nodes)
    try:
        with open(args.assignment) as f:
            assign = read_assignment(f)
    except OSError as e:
        raise InputError(f"cannot read {args.assignment}: {e.strerror or e}") from None
    except ValueError as e:
        raise InputError(f"{args.assignment}: {e}") from None
    names = [g.label(v) for v in range(g.n)]
    missing = [x for x in names if x not in assign]
    if missing:
        raise InputError(f"assignment lacks {len(missing)} node(s), e.g. {missing[0]!r}")
    labels = [assign[x] for x in names]
    cs = decompose(g)
    parts = component_partitions(cs, labels)
    try:
        rep = eval_S_global(cs, parts, g.n, args.density_gate)
    except ValueError as e:
        raise InputError(str(e)) from None
    print(f"S\t{rep.S:.6f}")
    q = eval_Q(g, labels, weighted=args.weighted) if g.m else float("nan")
    print(f"Q\t{q:.6f}")
    for c, s_i, gated in zip(cs, rep.per_component, rep.gated):
        if c.n > 1:
            print(f"S_{c.id}\t{s_i:.6f}" + ("\tgated" if gated else ""))
    return EXIT_OK


def cmd_solve(args) -> int:
    from .pipeline import run_sieve

    g = _load(args.graph, args.nodes)
    if args.weighted and args.objective != "q":
        raise InputError("--weighted applies to --objective q only")
    run = run_sieve(
        g,
        objective=args.objective,
        D=args.density_gate,
        time_limit=args.time_limit,
        out_dir=args.out,
        jobs=args.jobs,
        weighted=args.weighted,
        export_lp=args.export_lp,
        source=args.graph,
    )
    r = run.report
    q = "nan" if r["Q"] is None else f"{r['Q']:.6f}"
    print(f"S={r['S']:.6f} Q={q} clusters={r['non_singleton_clusters']} "
          f"singletons={r['singleton_clusters']} proven={str(r['proven_optimal']).lower()}")
    if args.out is None:
        sys.stdout.write("node\tcluster\n")
        for v, c in enumerate(run.labels):
            sys.stdout.write(f"{g.label(v)}\t{c}\n")
    return EXIT_BUDGET if run.exhausted else EXIT_OK


def cmd_export_mip(args) -> int:
    g = _load(args.graph, args.nodes)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for c in decompose(g):
        if c.n < 2 or c.density >= args.density_gate:
            continue
        (out / f"component_{c.id}.lp").write_text(export_mip(c, args.density_gate))
        written += 1
    print(f"wrote {written} model(s) to {out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import ScenarioSpec, generate, write_instance

    over = {"n": args.n, "k": args.k}
    try:
        if args.scenario:
            spec = ScenarioSpec.for_scenario(args.scenario, args.seed, **over)
        else:
            spec = ScenarioSpec(beta=args.beta, epsilon=args.epsilon, r=args.r, seed=args.seed, **over)
        g, truth = generate(spec)
    except ValueError as e:
        raise InputError(str(e)) from None
    paths = write_instance(g, truth, args.out, args.stem)
    for kind, p in paths.items():
        print(f"{kind}\t{p}")
    return EXIT_OK


def cmd_eval_ji(args) -> int:
    try:
        with open(args.truth) as f:
            t = read_assignment(f)
        with open(args.computed) as f:
            c = read_assignment(f)
        res = jaccard(t, c)
    except OSError as e:
        raise InputError(f"cannot read {e.filename}: {e.strerror}") from None
    except ValueError as e:
        raise InputError(str(e)) from None
    print(f"JI\t{res.ji:.6f}\nN_i\t{res.N_i}\nN_u\t{res.N_u}")
    return EXIT_OK


def cmd_summarize(args) -> int:
    import csv

    try:
        with open(args.instances) as f:
            rows = [(int(r["scenario"]), r["objective"], float(r["ji"])) for r in csv.DictReader(f)]
        summary = summarize(rows)
    except OSError as e:
        raise InputError(f"cannot read {args.instances}: {e.strerror}") from None
    except (KeyError, ValueError) as e:
        raise InputError(f"{args.instances}: {e}") from None
    write_summary_csv(summary, sys.stdout)
    return EXIT_OK


def cmd_experiment(args) -> int:
    from .pipeline import run_experiment

    scen = [int(x) for x in args.scenarios.split(",")] if args.scenarios else None
    summary, rows = run_experiment(
        args.seeds,
        out_dir=args.out,
        scenarios=scen,
        D=args.density_gate,
        time_limit=args.time_limit,
        jobs=args.jobs,
        n=args.n,
        k=args.k,
    )
    if summary is not None:
        write_summary_csv(summary, sys.stdout)
    return EXIT_OK if all(r["proven_optimal"] for r in rows) else EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sieve", description="Community detection in sparse networks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("components", help="list connected components as TSV")
    _add_graph(p)
    p.add_argument("--all", action="store_true", help="include single-node components")
    p.add_argument("--summary", action="store_true", help="degree and size summary on stderr")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("score", help="S and Q of a given assignment")
    _add_graph(p)
    p.add_argument("assignment", help="TSV of node, cluster")
    p.add_argument("--density-gate", type=_density_gate, default=DEFAULT_DENSITY_GATE, metavar="D")
    p.add_argument("--weighted", action="store_true", help="weighted Q from a third edge column")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("solve", help="cluster a network")
    _add_graph(p)
    _add_solver(p)
    p.add_argument("--weighted", action="store_true", help="weighted Q from a third edge column")
    p.add_argument("--out", default=None, help="directory for assignment.tsv and report.json")
    p.add_argument("--export-lp", default=None, metavar="DIR", help="also write one LP model per component")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export-mip", help="write LP-format S models per component")
    _add_graph(p)
    p.add_argument("--density-gate", type=_density_gate, default=DEFAULT_DENSITY_GATE, metavar="D")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_mip)

    p = sub.add_parser("synth", help="generate one synthetic network")
    p.add_argument("--scenario", type=int, default=None, help="1..12; overrides --beta/--epsilon/--r")
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--k", type=int, default=200)
    p.add_argument("--out", required=True)
    p.add_argument("--stem", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval-ji", help="Jaccard index of two assignment TSVs")
    p.add_argument("truth")
    p.add_argument("computed")
    p.set_defaults(func=cmd_eval_ji)

    p = sub.add_parser("summarize", help="per-scenario CSV from an instances.csv log")
    p.add_argument("instances")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("experiment", help="synthetic S vs Q comparison")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--scenarios", default=None, help="comma-separated ids, default all 12")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--k", type=int, default=200)
    p.add_argument("--density-gate", type=_density_gate, default=DEFAULT_DENSITY_GATE, metavar="D")
    p.add_argument("--time-limit", type=_positive, default=None, metavar="SECONDS")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("sieve: error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "seeds", 1) < 1:
        print("sieve: error: --seeds must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"sieve: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
