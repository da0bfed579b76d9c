"""Command-line surface: detect, exact, analyze, generate, rearrange, score.

Inputs are edge-list files (`u_id v_id [weight]` per line, `#` comments) or
generator specs like `ring:2,2,4`, `biclique:3,4`, `four:2,5`,
`chain:3x4,4x5`, `random:6,6,0.5,42`. Result bundles are written to an
output directory together with a JSON manifest; every emission except the
manifest timestamp is byte-deterministic for identical invocations.

Environment overrides: BIPDEN_BUDGET caps exact enumeration, BIPDEN_TOL
sets the analyze tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, analysis, bilpa, exact, generators, quality
from .bigraph import BipartiteGraph, Partition, read_edge_list, write_edge_list
from .errors import BipdenError, BudgetExceeded


def parse_generator_spec(spec: str):
    """Build (graph, ground_truth_or_None) from a spec string."""
    kind, _, rest = spec.partition(":")
    args = rest.split(",") if rest else []
    if kind == "biclique":
        m, n = (int(a) for a in args)
        return generators.biclique(m, n), None
    if kind == "ring":
        m, n, s = (int(a) for a in args)
        return generators.ring_of_bicliques(m, n, s)
    if kind == "four":
        m, n = (int(a) for a in args)
        return generators.four_biclique_network(m, n)
    if kind == "chain":
        sizes = [tuple(int(x) for x in part.split("x")) for part in args]
        return generators.chain_of_bicliques(sizes)
    if kind == "random":
        p, q, prob = int(args[0]), int(args[1]), float(args[2])
        seed = int(args[3]) if len(args) > 3 else 0
        return generators.random_bipartite(p, q, prob, seed), None
    raise ValueError(f"unknown generator spec {spec!r}")


def load_graph(args) -> tuple[BipartiteGraph, Partition | None]:
    if getattr(args, "gen", None):
        return parse_generator_spec(args.gen)
    return read_edge_list(args.input), None


def write_membership(g: BipartiteGraph, part: Partition, fh) -> None:
    """One line per node: `side node_id label[,label...]`."""
    for i, mem in enumerate(part.u_memberships):
        fh.write(f"u\t{g.u_ids[i]}\t{','.join(str(c) for c in sorted(mem))}\n")
    for j, mem in enumerate(part.v_memberships):
        fh.write(f"v\t{g.v_ids[j]}\t{','.join(str(c) for c in sorted(mem))}\n")


def read_membership(path, g: BipartiteGraph) -> Partition:
    """Parse a membership file against a graph; every node must be covered."""
    mem_u = [None] * g.p
    mem_v = [None] * g.q
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 3 or parts[0] not in ("u", "v"):
                raise BipdenError(f"membership line {lineno}: expected `side id labels`")
            side, node_id, labels = parts
            labs = {int(x) for x in labels.split(",")}
            try:
                if side == "u":
                    mem_u[g.u_index(node_id)] = labs
                else:
                    mem_v[g.v_index(node_id)] = labs
            except KeyError as exc:
                raise BipdenError(f"membership line {lineno}: unknown node {node_id!r}") from exc
    if any(m is None for m in mem_u) or any(m is None for m in mem_v):
        raise BipdenError("membership file does not cover every node of the graph")
    return Partition(mem_u, mem_v)


def _manifest(out_dir: Path, command: str, args, outputs: list[str], config: dict) -> None:
    data = {
        "tool": "bipden",
        "version": __version__,
        "command": command,
        "input": getattr(args, "input", None),
        "generator": getattr(args, "gen", None),
        "config": config,
        "outputs": sorted(outputs),
        "created": datetime.now(timezone.utc).isoformat(),
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit_quality(out_dir: Path, report: quality.QualityReport) -> list[str]:
    with open(out_dir / "quality.txt", "w", encoding="utf-8") as fh:
        fh.write(report.to_text())
    with open(out_dir / "communities.tsv", "w", encoding="utf-8") as fh:
        fh.write(report.to_rows())
    return ["quality.txt", "communities.tsv"]


def _emit_matrix(out_dir: Path, g: BipartiteGraph, part: Partition, figures: bool) -> list[str]:
    from . import render

    rows, cols = bilpa.rearrange_matrix(g, part)
    mat = render.matrix_values(g, rows, cols)
    outputs = ["matrix.txt", "matrix.pgm"]
    with open(out_dir / "matrix.txt", "w", encoding="utf-8") as fh:
        render.write_text_grid(mat, fh, g.is_weighted)
    with open(out_dir / "matrix.pgm", "w", encoding="utf-8") as fh:
        render.write_pgm(mat, fh)
    if figures:
        render.save_heatmap_png(mat, out_dir / "heatmap.png")
        outputs.append("heatmap.png")
    return outputs


def cmd_detect(args) -> int:
    g, _ = load_graph(args)
    cfg = bilpa.BilpaConfig(iter_max=args.iter_max, theta=args.theta, tie_shuffle_seed=args.seed)
    part, report, trace = bilpa.run(g, cfg)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    with open(out_dir / "membership.tsv", "w", encoding="utf-8") as fh:
        write_membership(g, part, fh)
    outputs.append("membership.tsv")
    outputs += _emit_quality(out_dir, report)
    with open(out_dir / "dtrace.tsv", "w", encoding="utf-8") as fh:
        fh.write("#sweep\tdensity\n")
        for t, d in enumerate(trace.d_history, start=1):
            fh.write(f"{t}\t{d!r}\n")
    outputs.append("dtrace.tsv")
    outputs += _emit_matrix(out_dir, g, part, not args.no_figures)
    if not args.no_figures:
        from . import render

        render.save_trace_png(trace.d_history, out_dir / "dtrace.png")
        outputs.append("dtrace.png")
    _manifest(out_dir, "detect", args, outputs,
              {"theta": args.theta, "iter_max": args.iter_max, "seed": args.seed})

    ou, ov = part.overlap_nodes()
    print(f"communities: {part.community_count}")
    print(f"partition_density: {report.partition_density}")
    print(f"overlap_nodes: {len(ou) + len(ov)}")
    print(f"sweeps: {trace.sweeps_run}")
    print(f"outputs: {out_dir}")
    return 0


def cmd_exact(args) -> int:
    g, _ = load_graph(args)
    budget = int(os.environ.get("BIPDEN_BUDGET", args.budget))
    if args.k_max is not None:
        k_star, result = exact.best_over_k(g, args.k_max, budget)
        print(f"k_star: {k_star}")
    elif args.overlap:
        result = exact.solve_model2(g, args.k, args.max_memberships, budget)
    else:
        result = exact.solve_model1(g, args.k, budget)
    print(f"best_d: {result.best_d}")
    print(f"optima_count: {result.optima_count}")
    print(f"communities: {result.best_partition.community_count}")

    if args.compare_bilpa:
        cfg = bilpa.BilpaConfig(theta=args.theta, tie_shuffle_seed=args.seed)
        _, rep, _ = bilpa.run(g, cfg)
        print(f"bilpa_d: {rep.partition_density}")
        print(f"gap: {result.best_d - rep.partition_density}")

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = []
        with open(out_dir / "membership.tsv", "w", encoding="utf-8") as fh:
            write_membership(g, result.best_partition, fh)
        outputs.append("membership.tsv")
        outputs += _emit_quality(out_dir, quality.partition_density(g, result.best_partition))
        _manifest(out_dir, "exact", args, outputs,
                  {"k": args.k, "k_max": args.k_max, "overlap": args.overlap,
                   "max_memberships": args.max_memberships, "budget": budget})
    return 0


def cmd_analyze(args) -> int:
    tol = float(os.environ.get("BIPDEN_TOL", args.tol))
    fieldnames = ["family", "m", "n", "s", "k", "d_s", "d_sk", "d_gap", "q_s", "q_s2", "q_gap",
                  "d_separate", "d_merge", "q_separate", "q_merge"]
    rows = []
    for m in args.m:
        for n in args.n:
            for row in analysis.sweep_rows([m], [n], args.s, tol):
                rows.append({"family": "ring", **row})
    for spec in args.four_biclique or []:
        m, n = (int(x) for x in spec.split(","))
        forms = analysis.four_biclique_forms(m, n)
        analysis.cross_check_four_biclique(m, n, tol)
        rows.append({
            "family": "four_biclique", "m": m, "n": n,
            "d_separate": float(forms["d_separate"]), "d_merge": float(forms["d_merge"]),
            "d_gap": float(forms["d_gap"]), "q_separate": float(forms["q_separate"]),
            "q_merge": float(forms["q_merge"]), "q_gap": float(forms["q_gap"]),
        })
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return 0


def cmd_generate(args) -> int:
    g, truth = parse_generator_spec(args.gen)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = ["edges.tsv"]
    with open(out_dir / "edges.tsv", "w", encoding="utf-8") as fh:
        write_edge_list(g, fh)
    if truth is not None:
        with open(out_dir / "ground_truth.tsv", "w", encoding="utf-8") as fh:
            write_membership(g, truth, fh)
        outputs.append("ground_truth.tsv")
    _manifest(out_dir, "generate", args, outputs, {"gen": args.gen})
    print(f"p: {g.p}\nq: {g.q}\nedges: {g.edge_count}\noutputs: {out_dir}")
    return 0


def cmd_rearrange(args) -> int:
    g = read_edge_list(args.input)
    part = read_membership(args.membership, g)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = _emit_matrix(out_dir, g, part, not args.no_figures)
    _manifest(out_dir, "rearrange", args, outputs, {"membership": args.membership})
    print(f"outputs: {out_dir}")
    return 0


def cmd_score(args) -> int:
    g = read_edge_list(args.input)
    part = read_membership(args.membership, g)
    report = quality.partition_density(g, part)
    sys.stdout.write(report.to_text())
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = _emit_quality(out_dir, report)
        _manifest(out_dir, "score", args, outputs, {"membership": args.membership})
    return 0


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bipden",
                                     description="Partition-density community detection for bipartite networks")
    parser.add_argument("--version", action="version", version=f"bipden {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--input", help="edge-list file")
        grp.add_argument("--gen", help="generator spec, e.g. ring:2,2,4")

    p = sub.add_parser("detect", help="run label-propagation community detection")
    add_input(p)
    p.add_argument("--theta", type=float, default=1.0, help="core-degree-rate threshold (1.0 = hard)")
    p.add_argument("--iter-max", type=int, default=100)
    p.add_argument("--seed", type=int, default=None, help="tie-shuffle seed")
    p.add_argument("--out", default="bipden_out")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("exact", help="exhaustive optimum at desk scale")
    add_input(p)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=int, help="community count")
    grp.add_argument("--k-max", type=int, help="sweep k = 1..k_max")
    p.add_argument("--overlap", action="store_true", help="relaxed memberships (model 2)")
    p.add_argument("--max-memberships", type=int, default=2)
    p.add_argument("--budget", type=int, default=exact.DEFAULT_BUDGET)
    p.add_argument("--compare-bilpa", action="store_true")
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("analyze", help="closed-form sweep table with empirical cross-checks")
    p.add_argument("--m", type=_int_list, default=list(range(2, 6)))
    p.add_argument("--n", type=_int_list, default=list(range(2, 6)))
    p.add_argument("--s", type=_int_list, default=list(range(4, 41)))
    p.add_argument("--four-biclique", action="append", metavar="M,N")
    p.add_argument("--tol", type=float, default=analysis.DEFAULT_TOL)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="emit a benchmark edge list plus ground truth")
    p.add_argument("--gen", required=True)
    p.add_argument("--out", default="bipden_out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("rearrange", help="block-ordered adjacency matrix artifacts")
    p.add_argument("--input", required=True)
    p.add_argument("--membership", required=True)
    p.add_argument("--out", default="bipden_out")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("score", help="re-evaluate a membership file")
    p.add_argument("--input", required=True)
    p.add_argument("--membership", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_score)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BipdenError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
