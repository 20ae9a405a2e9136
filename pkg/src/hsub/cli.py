"""Command line front end: parse inputs, dispatch, report.

Results go to standard output as TSV, ``weight<TAB>v1,v2,...`` for single
subgraphs and ``u,v<TAB>weight<TAB>v1,v2,...`` per line for all-pairs
tables; matrix-valued commands emit the ``m <rows> <cols>`` text format.
Every run appends ``#``-prefixed report lines (algorithm id, parameters,
outcome, wall time, comparison count, seed).

Exit codes: 0 a result was found, 3 no qualifying subgraph exists,
1 usage error (bad flags), 2 input error (unreadable or malformed data,
or parameter values the algorithms reject).

Every search subcommand takes ``--oracle`` to run the brute-force
reference instead, with identical output schema.  ``plan`` and ``bench``
accept the flag and ignore it: they have no oracle counterpart.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import oracle
from .chromatic import mono_clique, mono_triangle, rainbow_clique
from .dominance import DominanceParams, dominance_matrix, msb_distance_product, \
    naive_dominance
from .edgemax import ColorTrialPlan, densest_k_subgraph, heaviest_k_cycle_dense, \
    heaviest_k_cycle_sparse
from .graphs import Graph, GraphFormatError, SubgraphResult, better_result, \
    parse_graph
from .market import PreferenceSpec, blocking_pairs, parse_market, stable_matching
from .matrices import bool_product, naive_bool_product, parse_matrix, \
    serialize_matrix, set_threads
from .vertexmax import all_pairs_max_clique, all_pairs_max_pattern, \
    edge_cover_number, heaviest_k2k, heaviest_triangle_det, \
    heaviest_triangle_rand, heaviest_triangle_sparse
from .witness import plan_parameters

EXIT_FOUND = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_ABSENT = 3


@dataclass(frozen=True)
class RunReport:
    """What a run did, emitted as trailing '#' lines."""

    algorithm: str
    parameters: Mapping[str, object]
    result: str
    wall_ms: float
    seed: int | None = None
    comparisons: str = "n/a"

    def lines(self) -> list[str]:
        parts = [f"algorithm={self.algorithm}"]
        parts += [f"{k}={v}" for k, v in self.parameters.items()]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        first = "# " + " ".join(parts)
        second = (f"# result={self.result} wall_ms={self.wall_ms:.3f}"
                  f" comparisons={self.comparisons}")
        return [first, second]


class _Parser(argparse.ArgumentParser):
    """argparse maps usage problems to exit 2; the contract here wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_text(args) -> str:
    if args.input in (None, "-"):
        return sys.stdin.read()
    with open(args.input, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(args) -> Graph:
    return parse_graph(_read_text(args))


def _load_matrices(args, count: int) -> list[np.ndarray]:
    """Split a file of consecutive 'm <r> <c>' blocks into arrays."""
    body = "\n".join(line.split("#", 1)[0] for line in _read_text(args).splitlines())
    tokens = body.split()
    out = []
    pos = 0
    for _ in range(count):
        if pos + 3 > len(tokens) or tokens[pos] != "m":
            raise ValueError(f"expected {count} 'm <rows> <cols>' blocks")
        try:
            r, c = int(tokens[pos + 1]), int(tokens[pos + 2])
        except ValueError:
            raise ValueError("bad matrix dimensions") from None
        end = pos + 3 + max(r, 0) * max(c, 0)
        out.append(parse_matrix(" ".join(tokens[pos:end])))
        pos = end
    if pos != len(tokens):
        raise ValueError("trailing data after the expected matrix blocks")
    return out


def _emit_single(res: SubgraphResult | None, report: RunReport) -> int:
    if res is not None:
        print(f"{float(res.weight)!r}\t{','.join(map(str, res.vertices))}")
    for line in report.lines():
        print(line)
    return EXIT_FOUND if res is not None else EXIT_ABSENT


def _emit_pairs(table: Mapping[tuple[int, int], SubgraphResult],
                report: RunReport) -> int:
    for u, v in sorted(table):
        res = table[(u, v)]
        print(f"{u},{v}\t{float(res.weight)!r}\t"
              f"{','.join(map(str, res.vertices))}")
    for line in report.lines():
        print(line)
    return EXIT_FOUND if table else EXIT_ABSENT


def _summary(res: SubgraphResult | None) -> str:
    if res is None:
        return "none"
    return f"found weight={float(res.weight)!r}"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1e3


# -- subcommand handlers -----------------------------------------------------

def _cmd_triangle(args) -> int:
    g = _load_graph(args)
    def run():
        if args.oracle:
            return oracle.oracle_max_clique(g, 3)
        if args.mode == "det":
            return heaviest_triangle_det(g)
        if args.mode == "rand":
            return heaviest_triangle_rand(g, seed=args.seed)
        if args.mode == "sparse":
            return heaviest_triangle_sparse(g, omega_hint=args.omega)
        return all_pairs_max_clique(g, 3, omega=args.omega).global_best()
    res, ms = _timed(run)
    alg = "oracle.clique" if args.oracle else f"triangle.{args.mode}"
    return _emit_single(res, RunReport(alg, {"n": g.n, "m": len(g.edges)},
                                       _summary(res), ms, seed=args.seed))


def _cmd_clique(args) -> int:
    g = _load_graph(args)
    params = {"h": args.h, "n": g.n, "m": len(g.edges)}
    if args.all_pairs:
        def run():
            if args.oracle:
                return oracle.oracle_all_pairs_clique(g, args.h)
            return all_pairs_max_clique(g, args.h, omega=args.omega).table
        table, ms = _timed(run)
        alg = "oracle.allpairs" if args.oracle else "clique.allpairs"
        return _emit_pairs(table, RunReport(alg, params,
                                            f"pairs={len(table)}", ms,
                                            seed=args.seed))
    def run():
        if args.oracle:
            return oracle.oracle_max_clique(g, args.h)
        return all_pairs_max_clique(g, args.h, omega=args.omega).global_best()
    res, ms = _timed(run)
    alg = "oracle.clique" if args.oracle else "clique.witness"
    return _emit_single(res, RunReport(alg, params, _summary(res), ms,
                                       seed=args.seed))


def _cmd_pattern(args) -> int:
    g = _load_graph(args)
    with open(args.pattern_file, "r", encoding="utf-8") as fh:
        pattern = parse_graph(fh.read())
    params = {"pattern_n": pattern.n, "n": g.n, "m": len(g.edges)}
    def run():
        if args.oracle:
            return oracle.oracle_all_pairs_pattern(g, pattern)
        return all_pairs_max_pattern(g, pattern, omega=args.omega).table
    table, ms = _timed(run)
    alg = "oracle.pattern" if args.oracle else "pattern.witness"
    if args.all_pairs:
        return _emit_pairs(table, RunReport(alg, params,
                                            f"pairs={len(table)}", ms,
                                            seed=args.seed))
    best = None
    for res in table.values():
        best = better_result(best, res)
    return _emit_single(best, RunReport(alg, params, _summary(best), ms,
                                        seed=args.seed))


def _cmd_k2k(args) -> int:
    g = _load_graph(args)
    k = 2 if args.command == "k22" else args.k
    def run():
        if args.oracle:
            return oracle.oracle_k2k(g, k)
        return heaviest_k2k(g, k)
    res, ms = _timed(run)
    alg = "oracle.k2k" if args.oracle else "k2k.witness"
    return _emit_single(res, RunReport(alg, {"k": k, "n": g.n}, _summary(res),
                                       ms, seed=args.seed))


def _cmd_beta(args) -> int:
    g = _load_graph(args)
    def run():
        if args.oracle:
            return oracle.oracle_edge_cover_number(g, args.h)
        return edge_cover_number(g, args.h, omega=args.omega)
    value, ms = _timed(run)
    print(value)
    alg = "oracle.beta" if args.oracle else "beta.witness"
    report = RunReport(alg, {"h": args.h, "n": g.n}, f"value={value}", ms,
                       seed=args.seed)
    for line in report.lines():
        print(line)
    return EXIT_FOUND


def _cmd_cycle(args) -> int:
    g = _load_graph(args)
    if args.trials is None:
        plan = ColorTrialPlan.auto(args.k, failure_bound=args.delta,
                                   seed=args.seed)
    else:
        plan = ColorTrialPlan(args.k, args.trials, failure_bound=args.delta,
                              seed=args.seed)
    params = {"k": args.k, "mode": args.mode, "trials": plan.trials,
              "delta": args.delta, "n": g.n, "m": len(g.edges)}
    def run():
        if args.oracle:
            return oracle.oracle_k_cycle(g, args.k)
        if args.mode == "sparse":
            return heaviest_k_cycle_sparse(g, args.k, plan=plan)
        return heaviest_k_cycle_dense(g, args.k, plan=plan)
    res, ms = _timed(run)
    alg = "oracle.cycle" if args.oracle else f"cycle.{args.mode}"
    return _emit_single(res, RunReport(alg, params, _summary(res), ms,
                                       seed=args.seed))


def _cmd_dense_sub(args) -> int:
    g = _load_graph(args)
    def run():
        if args.oracle:
            return oracle.oracle_densest_k(g, args.k)
        return densest_k_subgraph(g, args.k)
    res, ms = _timed(run)
    alg = "oracle.densesub" if args.oracle else "densesub.distance"
    return _emit_single(res, RunReport(alg, {"k": args.k, "n": g.n},
                                       _summary(res), ms, seed=args.seed))


def _cmd_rainbow(args) -> int:
    g = _load_graph(args)
    def run():
        if args.oracle:
            return oracle.oracle_rainbow_clique(g, args.h)
        return rainbow_clique(g, args.h, trials=args.trials, seed=args.seed)
    res, ms = _timed(run)
    alg = "oracle.rainbow" if args.oracle else "rainbow.reduction"
    return _emit_single(res, RunReport(alg, {"h": args.h, "n": g.n},
                                       _summary(res), ms, seed=args.seed))


def _cmd_mono(args) -> int:
    g = _load_graph(args)
    def run():
        if args.oracle:
            return oracle.oracle_mono_clique(g, args.h)
        if args.h == 3:
            return mono_triangle(g, omega_hint=args.omega)
        return mono_clique(g, args.h)
    res, ms = _timed(run)
    alg = "oracle.mono" if args.oracle else "mono.blocks"
    return _emit_single(res, RunReport(alg, {"h": args.h, "n": g.n},
                                       _summary(res), ms, seed=args.seed))


def _cmd_market(args) -> int:
    inst = parse_market(_read_text(args))
    prefs = PreferenceSpec(args.pref)
    def run():
        if args.oracle:
            return oracle.oracle_stable_matching(inst, prefs)
        return stable_matching(inst, prefs)
    matching, ms = _timed(run)
    audit = blocking_pairs(inst, matching, prefs)
    for i in sorted(matching):
        print(f"{i}\t{matching[i]}")
    alg = "oracle.market" if args.oracle else "market.da"
    report = RunReport(alg, {"pref": args.pref, "n": inst.n, "k": inst.k},
                       f"matched={len(matching)} blocking={len(audit)}", ms,
                       seed=args.seed)
    for line in report.lines():
        print(line)
    return EXIT_FOUND


def _cmd_dominance(args) -> int:
    p, q = _load_matrices(args, 2)
    params = DominanceParams(bucket_size=args.bucket_size)
    def run():
        if args.oracle:
            return naive_dominance(p, q, strict=args.strict)
        return dominance_matrix(p, q, params=params, strict=args.strict)
    mat, ms = _timed(run)
    sys.stdout.write(serialize_matrix(mat))
    alg = "oracle.dominance" if args.oracle else "dominance.bucketed"
    report = RunReport(alg, {"n1": p.shape[0], "n2": q.shape[0],
                             "d": p.shape[1], "strict": args.strict},
                       f"matrix {mat.shape[0]}x{mat.shape[1]}", ms)
    for line in report.lines():
        print(line)
    return EXIT_FOUND


def _msb_scale(a: np.ndarray, b: np.ndarray) -> int:
    fin_a, fin_b = a[np.isfinite(a)], b[np.isfinite(b)]
    top = 0.0
    if fin_a.size and fin_b.size:
        top = float(fin_a.max()) + float(fin_b.max())
    w = 1
    while w <= top:
        w *= 2
    return w


def _cmd_msb(args) -> int:
    a, b = _load_matrices(args, 2)
    def run():
        if args.oracle:
            exact = oracle.oracle_min_plus(a, b)
            w = _msb_scale(a, b)
            denom = 1 << args.bits
            bits = np.zeros(exact.shape, dtype=np.int64)
            inside = (exact >= 0) & (exact < w)
            bits[inside] = np.floor(exact[inside] * denom / w).astype(np.int64)
            return bits, w
        out = msb_distance_product(a, b, args.bits, budget=args.budget)
        return out.bits, out.scale
    (bits, scale), ms = _timed(run)
    sys.stdout.write(serialize_matrix(bits))
    alg = "oracle.msb" if args.oracle else "msb.threshold"
    report = RunReport(alg, {"bits": args.bits, "scale": scale},
                       f"matrix {bits.shape[0]}x{bits.shape[1]}", ms)
    for line in report.lines():
        print(line)
    return EXIT_FOUND


def _cmd_plan(args) -> int:
    p = plan_parameters(args.omega, args.h)
    print(f"t={p.t:g} a={p.a} b={p.b} c={p.c}")
    return EXIT_FOUND


# -- benchmarks ---------------------------------------------------------------

def bench_boolmul(n: int, seed: int = 0) -> dict[str, float]:
    """Packed popcount product vs the byte-wise triple loop at size n."""
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.random((n, n)) < 0.5
    b = rng.random((n, n)) < 0.5
    _, packed_ms = _timed(lambda: bool_product(a, b))
    _, naive_ms = _timed(lambda: naive_bool_product(a, b))
    return {"n": n, "packed_ms": packed_ms, "naive_ms": naive_ms,
            "speedup": naive_ms / max(packed_ms, 1e-9)}


def bench_dominance(n: int, seed: int = 0) -> dict[str, float]:
    """Bucketed counter at its swept-best s vs the naive counter, n = d."""
    rng = np.random.Generator(np.random.PCG64(seed))
    p = rng.random((n, n))
    q = rng.random((n, n))
    root = max(1, round((2 * n) ** 0.5))
    best_s, best_ms = None, float("inf")
    for s in (root // 2, root, 2 * root, 4 * root):
        if s < 1:
            continue
        _, ms = _timed(lambda: dominance_matrix(
            p, q, params=DominanceParams(bucket_size=s)))
        if ms < best_ms:
            best_s, best_ms = s, ms
    _, naive_ms = _timed(lambda: naive_dominance(p, q))
    return {"n": n, "best_s": best_s, "bucketed_ms": best_ms,
            "naive_ms": naive_ms, "speedup": naive_ms / max(best_ms, 1e-9)}


def _cmd_bench(args) -> int:
    suites = ("boolmul", "dominance") if args.suite == "all" else (args.suite,)
    sizes = None
    if args.sizes:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok]
    for suite in suites:
        defaults = [2048] if suite == "boolmul" else [1024]
        for n in sizes or defaults:
            stats = (bench_boolmul if suite == "boolmul"
                     else bench_dominance)(n, seed=args.seed)
            body = " ".join(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}"
                            for k, v in stats.items())
            print(f"# bench={suite} {body}")
    return EXIT_FOUND


# -- wiring -------------------------------------------------------------------

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("-i", "--input", help="input file, '-' or absent = stdin")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--omega", type=float, default=3.0,
                        help="planner exponent hint (kernels stay cubic)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--oracle", action="store_true",
                        help="run the brute-force reference instead")

    parser = _Parser(prog="hsub", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(handler=handler)
        return p

    p = add("triangle", _cmd_triangle, help="heaviest vertex-weighted triangle")
    p.add_argument("--mode", choices=("det", "rand", "sparse", "allpairs"),
                   default="det")

    p = add("clique", _cmd_clique, help="heaviest K_h (vertex weights)")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--all-pairs", action="store_true")

    p = add("pattern", _cmd_pattern, help="heaviest induced pattern copy")
    p.add_argument("--pattern-file", required=True)
    p.add_argument("--all-pairs", action="store_true")

    add("k22", _cmd_k2k, help="heaviest K_{2,2}")
    p = add("k2k", _cmd_k2k, help="heaviest K_{2,k}")
    p.add_argument("-k", "--k", type=int, required=True)

    p = add("beta", _cmd_beta, help="edge-cover number of K_h copies")
    p.add_argument("--h", type=int, required=True)

    p = add("cycle", _cmd_cycle, help="heaviest k-cycle (edge weights)")
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--mode", choices=("sparse", "dense"), default="sparse")
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=float, default=0.01,
                   help="completeness failure bound")

    p = add("dense-sub", _cmd_dense_sub, help="heaviest k-vertex edge set")
    p.add_argument("-k", "--k", type=int, required=True)

    p = add("rainbow", _cmd_rainbow, help="rainbow K_h in an edge-colored graph")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--trials", type=int)

    p = add("mono", _cmd_mono, help="monochromatic K_h")
    p.add_argument("--h", type=int, required=True)

    p = add("market", _cmd_market, help="buyer-seller stable matching")
    p.add_argument("--pref", default="count",
                   help="count | surplus | price | expr:<expression>")

    p = add("dominance", _cmd_dominance, help="dominance count matrix")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--bucket-size", type=int)

    p = add("msb", _cmd_msb, help="top bits of a (min,+) product")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--budget", type=int, default=4096)

    p = add("plan", _cmd_plan, help="clique-split parameters for (omega, h)")
    p.add_argument("--h", type=int, required=True)

    p = add("bench", _cmd_bench, help="performance sanity reports")
    p.add_argument("--suite", choices=("boolmul", "dominance", "all"),
                   default="all")
    p.add_argument("--sizes", help="comma-separated sizes")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        set_threads(args.threads)
        return args.handler(args)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
