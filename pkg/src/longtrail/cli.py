"""Command-line front end.

Reports go to standard output as JSON (machine-readable, schema-stable);
human diagnostics go to standard error.  Every subcommand takes an explicit
seed (default 0) so published numbers reproduce bit-for-bit, wall time aside.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from .bruteforce import longest_trail_bruteforce
from .dp import full_dp_longest_trail, write_table_dump
from .graphs import (
    Graph,
    GraphFormatError,
    SizeLimitError,
    parse_graph,
    random_graph,
    serialize_graph,
    validate_trail,
)
from .hybrid import (
    MODE_DETERMINISTIC,
    MODE_STOCHASTIC,
    HybridConfig,
    SolveContext,
    solve_hybrid,
    theoretical_costs,
)

_MODES = {"det": MODE_DETERMINISTIC, "stoch": MODE_STOCHASTIC}


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_graph(path: str) -> Graph:
    with open(path, "rb") as fh:
        return parse_graph(fh.read())


def _bench_vertices(m: int) -> int:
    return max(2, m // 2 + 1)


def _run_report(
    engine: str,
    g: Graph,
    length: int,
    trail,
    *,
    queries=None,
    seed: int = 0,
    alpha=None,
    mode=None,
    wall_ms: float = 0.0,
) -> dict:
    return {
        "engine": engine,
        "n": g.vertex_count,
        "m": g.edge_count,
        "length": length,
        "trail": list(trail),
        "queries": queries,
        "seed": seed,
        "alpha": alpha,
        "mode": mode,
        "wall_ms": wall_ms,
    }


def _solve_one(g: Graph, engine: str, mode: str, args) -> dict:
    t0 = time.perf_counter()
    if engine == "oracle":
        res = longest_trail_bruteforce(g)
        wall = (time.perf_counter() - t0) * 1000.0
        return _run_report("oracle", g, res.length, res.trail,
                           seed=args.seed, wall_ms=wall)
    if engine == "dp":
        res = full_dp_longest_trail(g)
        wall = (time.perf_counter() - t0) * 1000.0
        return _run_report("dp", g, res.length, res.trail,
                           seed=args.seed, wall_ms=wall)
    cfg = HybridConfig(
        alpha=args.alpha,
        mode=_MODES[mode],
        repeats_per_level=args.repeats,
        seed=args.seed,
        budget_constant=args.budget_constant,
    )
    out = solve_hybrid(g, cfg)
    wall = (time.perf_counter() - t0) * 1000.0
    if getattr(args, "dump_table", None):
        ctx = SolveContext.create(g, cfg)
        count = write_table_dump(ctx.table, args.dump_table)
        _info(f"wrote {count} table records to {args.dump_table}")
    return _run_report(
        f"hybrid-{mode}",
        g,
        out.length,
        out.trail,
        queries=out.ledger.as_dict(),
        seed=args.seed,
        alpha=args.alpha,
        mode=mode,
        wall_ms=wall,
    )


def cmd_gen(args) -> int:
    g = random_graph(args.n, args.m, args.seed)
    text = serialize_graph(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _info(f"wrote {args.m}-edge graph to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args) -> int:
    g = _load_graph(args.input)
    report = _solve_one(g, args.engine, args.mode, args)
    _emit(report)
    return 0


def cmd_verify(args) -> int:
    if args.random:
        count, n, m, seed = args.random
        instances = [random_graph(n, m, seed + i) for i in range(count)]
    else:
        instances = [_load_graph(args.input)]
    agreed = 0
    rows = []
    for i, g in enumerate(instances):
        lengths = {}
        trails = {}
        res = longest_trail_bruteforce(g)
        lengths["oracle"], trails["oracle"] = res.length, res.trail
        res = full_dp_longest_trail(g)
        lengths["dp"], trails["dp"] = res.length, res.trail
        out = solve_hybrid(g, HybridConfig(alpha=args.alpha, mode=MODE_DETERMINISTIC))
        lengths["hybrid-det"], trails["hybrid-det"] = out.length, out.trail
        valid = all(
            validate_trail(g, t).ok and len(t) == lengths[name]
            for name, t in trails.items()
            if lengths[name] > 0
        )
        ok = valid and len(set(lengths.values())) == 1
        agreed += ok
        rows.append({"instance": i, "n": g.vertex_count, "m": g.edge_count,
                     "lengths": lengths, "ok": ok})
        _info(f"instance {i}: " + " ".join(f"{k}={v}" for k, v in lengths.items())
              + ("" if ok else "  MISMATCH"))
    _info(f"{agreed}/{len(instances)} agree")
    _emit({"instances": len(instances), "agreed": agreed,
           "ok": agreed == len(instances), "results": rows})
    return 0 if agreed == len(instances) else 1


def cmd_costs(args) -> int:
    report = theoretical_costs(args.m, args.alpha)
    _emit(report.as_dict())
    return 0


def cmd_bench(args) -> int:
    sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    if not sizes or args.runs < 1:
        raise ValueError("bench needs at least one size and one run")
    rows = []
    for m in sizes:
        n = _bench_vertices(m)
        for run in range(args.runs):
            seed = args.seed + run
            g = random_graph(n, m, seed)
            truth = full_dp_longest_trail(g).length
            cfg = HybridConfig(
                alpha=args.alpha,
                mode=_MODES[args.mode],
                repeats_per_level=args.repeats,
                seed=seed,
                budget_constant=args.budget_constant,
            )
            t0 = time.perf_counter()
            out = solve_hybrid(g, cfg)
            wall = (time.perf_counter() - t0) * 1000.0
            rows.append({
                "m": m,
                "seed": seed,
                "n": n,
                "length": out.length,
                "dp_length": truth,
                "success": out.length == truth,
                "queries_total": out.ledger.total,
                "per_level": dict(sorted(out.ledger.per_level.items())),
                "wall_ms": wall,
            })
            _info(f"m={m} seed={seed}: hybrid={out.length} dp={truth} "
                  f"queries={out.ledger.total} {wall:.0f}ms")
    rows.sort(key=lambda r: (r["m"], r["seed"]))
    aggregates = []
    for m in sizes:
        sub = [r for r in rows if r["m"] == m]
        qs = [r["queries_total"] for r in sub]
        aggregates.append({
            "m": m,
            "runs": len(sub),
            "success_rate": sum(r["success"] for r in sub) / len(sub),
            "queries_mean": sum(qs) / len(qs),
            "queries_min": min(qs),
            "queries_max": max(qs),
            "wall_ms_mean": sum(r["wall_ms"] for r in sub) / len(sub),
        })
    payload = {"mode": args.mode, "runs": args.runs, "sizes": sizes,
               "rows": rows, "aggregates": aggregates}
    if args.format == "csv":
        buf = io.StringIO()
        fields = ["m", "seed", "n", "length", "dp_length", "success",
                  "queries_total", "wall_ms"]
        writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        text = buf.getvalue()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            _emit(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longtrail",
        description="Longest-trail solvers with quantum-query accounting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--m", type=int, required=True, help="edge count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("input", help="edge-list file")
    p.add_argument("--engine", choices=["oracle", "dp", "hybrid"], default="hybrid")
    p.add_argument("--mode", choices=["det", "stoch"], default="det")
    p.add_argument("--alpha", type=float, default=0.055)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=None,
                   help="boosting repeats per level (default 2m)")
    p.add_argument("--budget-constant", type=float, default=23.0)
    p.add_argument("--dump-table", default=None,
                   help="debug: dump the precomputed layer to this path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="cross-check oracle, dp, hybrid-det")
    p.add_argument("input", nargs="?", default=None, help="edge-list file")
    p.add_argument("--random", nargs=4, type=int, default=None,
                   metavar=("COUNT", "N", "M", "SEED"),
                   help="verify COUNT random instances instead of a file")
    p.add_argument("--alpha", type=float, default=0.055)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("costs", help="theoretical cost balance report")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.055)
    p.set_defaults(func=cmd_costs)

    p = sub.add_parser("bench", help="benchmark hybrid runs against dp truth")
    p.add_argument("--sizes", required=True, help="comma-separated edge counts")
    p.add_argument("--runs", type=int, required=True, help="seeds per size")
    p.add_argument("--mode", choices=["det", "stoch"], default="stoch")
    p.add_argument("--alpha", type=float, default=0.055)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--budget-constant", type=float, default=23.0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and bool(args.input) == bool(args.random):
        parser.error("verify needs exactly one of an input file or --random")
    try:
        return args.func(args)
    except (GraphFormatError, SizeLimitError, ValueError, OSError) as exc:
        _info(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
