"""Command line front end: ``zgrass enum|graph|verify|aut``.

Exit codes: 0 success, 1 usage or mathematical precondition error,
2 work budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import nullcontext
from typing import Sequence

from .budget import budget_limit
from .cliques import max_clique
from .errors import BudgetExceeded
from .export import dump_report, graph_report, write_dot, write_edge_csv, write_subspaces_jsonl
from .grassmann import (
    GrassmannGraph,
    automorphism_dual,
    automorphism_linear,
    clique_number,
    verify_automorphism,
)
from .matrix import Matrix, is_invertible
from .ring import RingContext
from .subspace import count_subspaces, enumerate_subspaces
from .verify import SUITES, run_suite

log = logging.getLogger("zgrass")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for budget overruns here.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(sp: argparse.ArgumentParser, need_nm: bool = True) -> None:
    sp.add_argument("--p", type=int, required=True, help="prime")
    sp.add_argument("--s", type=int, default=1, help="exponent (ring is Z/p^s)")
    sp.add_argument("--n", type=int, required=need_nm, default=None, help="ambient dimension")
    sp.add_argument("--m", type=int, required=need_nm, default=None, help="subspace dimension")
    sp.add_argument("--budget", type=int, default=None, help="cap on exhaustive work (primitive operations)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="output path")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="zgrass", description="Subspaces and Grassmann graphs over Z/p^s")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("enum", help="list every m-subspace as JSONL")
    _common(sp)

    sp = sub.add_parser("graph", help="build the Grassmann graph and report on it")
    _common(sp)
    sp.add_argument("--report", default=None, help="write the JSON report here (default stdout)")
    sp.add_argument("--export", choices=("dot", "csv"), default=None)
    sp.add_argument("--omega", action="store_true", help="certify the clique number by exact search")

    sp = sub.add_parser("verify", help="run self-check suites")
    _common(sp, need_nm=False)
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--report", default=None)

    sp = sub.add_parser("aut", help="check that X -> XU is an automorphism")
    _common(sp)
    sp.add_argument("U", help="matrix file: JSON {p,s,rows,cols,entries} or whitespace separated rows")
    return ap


def _check_config(args) -> RingContext:
    ctx = RingContext(args.p, args.s)
    if args.budget is not None and args.budget <= 0:
        raise UsageError("--budget must be positive")
    if args.n is not None and args.m is not None and not 1 <= args.m < args.n:
        raise UsageError(f"need 1 <= m < n, got n={args.n}, m={args.m}")
    return ctx


def _open_out(path: str | None):
    return open(path, "w") if path else nullcontext(sys.stdout)


def cmd_enum(args) -> int:
    ctx = _check_config(args)
    formula = count_subspaces(ctx, args.n, args.m)
    with _open_out(args.out) as fh:
        count = write_subspaces_jsonl(enumerate_subspaces(ctx, args.n, args.m), fh)
    ok = count == formula
    summary = f"count={count} formula={formula} {'ok' if ok else 'MISMATCH'}"
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return 0 if ok else 1


def cmd_graph(args) -> int:
    ctx = _check_config(args)
    G = GrassmannGraph(ctx, args.n, args.m)
    omega_measured = None
    if args.omega:
        target = clique_number(*G.params)
        if G.find_clique(target) is not None and G.find_clique(target + 1) is None:
            omega_measured = target
        else:
            omega_measured = len(max_clique(G.adjacency()))
    report = graph_report(G, omega_measured)
    with _open_out(args.report) as fh:
        dump_report(report, fh)
    if args.export:
        path = args.out or f"grassmann_{args.p}_{args.s}_{args.n}_{args.m}.{args.export}"
        with open(path, "w") as fh:
            (write_dot if args.export == "dot" else write_edge_csv)(G, fh)
        log.info("wrote %s", path)
    return 0


def cmd_verify(args) -> int:
    _check_config(args)
    names = SUITES if args.suite == "all" else (args.suite,)
    params = {"p": args.p, "s": args.s, "seed": args.seed}
    if args.n is not None:
        params["n"] = args.n
    if args.m is not None:
        params["m"] = args.m
    print(f"seed={args.seed}")
    results = []
    for name in names:
        res = run_suite(name, budget=args.budget, **params)
        results.append(res)
        if res["status"] == "skipped":
            print(f"{name}: skipped ({res['reason']})")
        for c in res["checks"]:
            line = f"{name}.{c['name']}: {'PASS' if c['pass'] else 'FAIL'}"
            if "detail" in c:
                line += f"  [{c['detail']}]"
            print(line)
        print(f"{name}: {res['status']}")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump({"seed": args.seed, "suites": results}, fh, indent=2)
    return 1 if any(r["status"] == "fail" for r in results) else 0


def read_matrix_file(path: str, ctx: RingContext) -> Matrix:
    text = open(path).read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        rows = [[int(v) for v in line.split()] for line in text.splitlines() if line.strip()]
        if not rows or len({len(r) for r in rows}) != 1:
            raise UsageError(f"{path}: rows must be non-empty and of equal length")
        return Matrix.from_rows(ctx, rows, len(rows[0]))
    if isinstance(obj, list):
        return Matrix.from_rows(ctx, obj, len(obj[0]))
    M = Matrix.from_json(obj)
    if M.context != ctx:
        raise UsageError(f"{path}: matrix is over {M.context}, expected {ctx}")
    return M


def cmd_aut(args) -> int:
    ctx = _check_config(args)
    U = read_matrix_file(args.U, ctx)
    if U.shape != (args.n, args.n):
        raise UsageError(f"U must be {args.n}x{args.n}, got {U.rows}x{U.cols}")
    print(f"invertible: {'yes' if is_invertible(U) else 'no'}")
    G = GrassmannGraph(ctx, args.n, args.m)
    maps = [automorphism_linear(G, U)]
    if args.n == 2 * args.m:
        maps.append(automorphism_dual(G, U))
    ok = True
    for f in maps:
        good = verify_automorphism(G, f)
        ok &= good
        verdict = "verified" if good else "NOT an automorphism"
        if good and f.is_identity():
            verdict = "identity automorphism, verified"
        print(f"{f.kind}: {verdict}  digest={f.digest()}")
    return 0 if ok else 1


COMMANDS = {"enum": cmd_enum, "graph": cmd_graph, "verify": cmd_verify, "aut": cmd_aut}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cm = budget_limit(args.budget) if args.budget else nullcontext()
        with cm:
            return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"zgrass: {exc}", file=sys.stderr)
        return 2
    except (ValueError, UsageError, OSError) as exc:
        print(f"zgrass: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
