"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a verification check
failed, 3 the verification budget ran out before the corpus was covered.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import constructions as C
from . import games as G
from . import measures as M
from . import verify as V
from .boolfun import ArityError, BoolFun, ParseError, loads_tt, parse_expr
from .dtree import (
    Leaf, computes, conj_depth, dumps, from_json, to_dot, to_json, tree_depth,
    tree_rank, tree_size,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- input -----------------------------------------------------------------

def _load_function(args) -> BoolFun:
    if getattr(args, "fn", None):
        return parse_expr(args.fn)
    if getattr(args, "tt", None):
        with open(args.tt) as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            d = json.loads(text)
            fn = d.get("function", d)
            from .boolfun import hex_to_table
            return BoolFun(int(fn["n"]), hex_to_table(fn["hex"], int(fn["n"])), name=fn.get("name"))
        return loads_tt(text)
    raise UsageError("give a function with --fn EXPR or --tt FILE")


def _add_function_args(p, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--fn", metavar="EXPR", help="function expression, e.g. PARITY:4 or COMPOSE(AND:2;OR:2)")
    g.add_argument("--tt", metavar="FILE", help="truth-table file (n=<arity> then hex) or a measure JSON")


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _table(rows) -> str:
    w = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


# -- subcommands -----------------------------------------------------------

def cmd_measure(args) -> int:
    f = _load_function(args)
    w = None
    if args.weights:
        try:
            w = [int(x) for x in args.weights.split(",")]
        except ValueError:
            raise UsageError(f"weights must be comma-separated integers, got {args.weights!r}")
    rep = M.measure_report(f, w, heavy=args.heavy)
    _write(None, rep.to_json() if args.json else _table(rep.rows()))
    return EXIT_OK


def cmd_table1(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    rows = V.table1(args.n)
    if args.json:
        _write(None, json.dumps(rows, indent=2))
    else:
        head = ("family",) + V.TABLE1_COLUMNS + ("closed form",)
        body = [(r["family"],) + tuple(str(r["computed"][c]) for c in V.TABLE1_COLUMNS)
                + ("ok" if r["match"] else "MISMATCH " + json.dumps(r["expected"]),) for r in rows]
        widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
        lines = ["  ".join(x[i].ljust(widths[i]) for i in range(len(head))).rstrip() for x in [head] + body]
        _write(None, "\n".join(lines))
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_FAILED


def _compose_parts(f: BoolFun):
    o = f.origin
    if o and o[0] == "compose":
        return o[1], list(o[2])
    if o and o[0] == "iterate" and o[2] >= 2:
        from .boolfun import iterate
        return o[1], [iterate(o[1], o[2] - 1)] * o[1].arity
    raise UsageError("--method compose needs a COMPOSE(...) or ITER(...) expression")


def cmd_construct(args) -> int:
    f = _load_function(args)
    if args.method == "cert":
        T = C.cert_tree(f)
    elif args.method == "sparsity":
        T = C.sparsity_tree(f)
    elif args.method == "compose":
        outer, gs = _compose_parts(f)
        if outer.is_constant() or any(g.is_constant() for g in gs):
            raise UsageError("composition construction needs non-constant outer and inner functions")
        rs = [M.values(g)[0] for g in gs]
        Tf = M.opt_weighted_depth(outer, rs)[1]
        T = C.composed_tree(Tf, [M.opt_rank(g)[1] for g in gs], [g.arity for g in gs])
    else:
        raise UsageError(f"unknown method {args.method!r}; available: cert, sparsity, compose")
    if not computes(T, f):
        print("internal error: constructed tree does not compute f", file=sys.stderr)
        return EXIT_FAILED
    _write(args.out, dumps(T))
    if args.dot:
        _write(args.dot, to_dot(T))
    if args.out not in (None, "-"):
        print(f"rank {tree_rank(T)}  depth {tree_depth(T)}  size {tree_size(T)}")
    return EXIT_OK


def cmd_game(args) -> int:
    f = _load_function(args)
    try:
        prover = G.make_prover(args.prover, f)
        delayer = G.make_delayer(args.delayer, f)
    except KeyError as exc:
        raise UsageError(exc.args[0])
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.delayer in G.ASYM_ONLY and not args.asym:
        raise UsageError(f"delayer {args.delayer!r} plays the asymmetric game; add --asym")
    if args.asym and args.delayer not in G.ASYM_ONLY:
        raise UsageError(f"--asym needs an asymmetric delayer: {', '.join(sorted(G.ASYM_ONLY))}")
    t = G.play(f, prover, delayer, asym=args.asym)
    _write(None, t.to_json() if args.json else t.pretty())
    return EXIT_OK


def cmd_verify(args) -> int:
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("DTRANK_JOBS", "1"))
    suites = [s for s in args.suite.split(",") if s]
    try:
        V.resolve_checks(suites)
    except KeyError as exc:
        raise UsageError(exc.args[0])
    kind = args.corpus
    if kind == "exhaustive" and args.n > 4:
        raise UsageError("exhaustive corpora are limited to --n 4; use --corpus symmetric or random")
    if kind == "symmetric" and args.n > 10:
        raise UsageError("symmetric corpora are limited to --n 10")
    fs = V.corpus(kind, n=args.n, count=args.count, seed=args.seed, max_arity=args.n)
    claims = list(V.CLAIMS) if "all" in suites and not args.no_claims else []
    rep = V.run_suite(fs, suites, jobs=jobs, budget=args.budget, claims=claims, heavy=args.heavy)
    _write(None, rep.to_json() if args.json else rep.table())
    if not rep.ok:
        return EXIT_FAILED
    return EXIT_BUDGET if rep.incomplete else EXIT_OK


def cmd_convert(args) -> int:
    if args.tree:
        with open(args.tree) as fh:
            T = from_json(fh.read())
    else:
        f = _load_function(args)
        T = M.opt_size(f)[1] if args.to == "conj" else C.conj_from_simple(M.opt_size(f)[1])
    if args.to == "conj":
        if not isinstance(T, Leaf) and not hasattr(T, "var"):
            raise UsageError("input is already a conjunction tree")
        out = C.conj_from_simple(T)
        info = f"conj depth {conj_depth(out)}  bound {C.conj_balance_bound(tree_size(T))}"
    else:
        if hasattr(T, "var"):
            raise UsageError("input is a simple tree; use --to conj")
        out = C.simple_from_conj(T)
        info = f"rank {tree_rank(out)}  conj depth {conj_depth(T)}"
    _write(args.out, json.dumps(to_json(out)))
    if args.dot:
        _write(args.dot, to_dot(out))
    print(info, file=sys.stderr)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dtrank", description="Decision-tree rank and related measures of Boolean functions.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="every measure of one function")
    _add_function_args(m)
    m.add_argument("--weights", help="comma-separated variable weights for weighted depth")
    fmt = m.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--table", action="store_true", help="aligned text (default)")
    m.add_argument("--heavy", action="store_true", help="allow arities 15-16")
    m.set_defaults(run=cmd_measure)

    t = sub.add_parser("table1", help="measures of the simple symmetric families at one arity")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--json", action="store_true")
    t.set_defaults(run=cmd_table1)

    c = sub.add_parser("construct", help="build a tree by one of the explicit constructions")
    _add_function_args(c)
    c.add_argument("--method", required=True, help="cert, sparsity or compose")
    c.add_argument("--out", help="tree JSON file (stdout if omitted)")
    c.add_argument("--dot", help="also write Graphviz source here")
    c.set_defaults(run=cmd_construct)

    g = sub.add_parser("game", help="play one Prover-Delayer game and print the transcript")
    _add_function_args(g)
    g.add_argument("--prover", default="optimal", help=f"one of: {', '.join(sorted(G.PROVERS))}")
    g.add_argument("--delayer", default="optimal", help=f"one of: {', '.join(sorted(G.DELAYERS))}")
    g.add_argument("--asym", action="store_true", help="asymmetric (probability) game")
    g.add_argument("--json", action="store_true")
    g.set_defaults(run=cmd_game)

    v = sub.add_parser("verify", help="run the check harness over a corpus")
    v.add_argument("--suite", default="all", help=f"comma-separated suites or checks; suites: {', '.join(V.SUITES)}")
    v.add_argument("--n", type=int, default=3, help="arity (max arity for the catalog)")
    v.add_argument("--corpus", default="exhaustive", choices=["exhaustive", "symmetric", "catalog", "random"])
    v.add_argument("--count", type=int, default=100, help="random corpus size")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=None, help="worker processes (default $DTRANK_JOBS or 1)")
    v.add_argument("--budget", type=float, default=None, help="wall-clock limit in seconds")
    v.add_argument("--no-claims", action="store_true", help="skip the standalone counterexample claims")
    v.add_argument("--heavy", action="store_true", help="run the 16-variable claim")
    v.add_argument("--json", action="store_true")
    v.set_defaults(run=cmd_verify)

    k = sub.add_parser("convert", help="convert between simple and conjunction trees")
    k.add_argument("--to", required=True, choices=["conj", "simple"])
    src = k.add_mutually_exclusive_group(required=True)
    src.add_argument("--tree", metavar="FILE", help="tree JSON to convert")
    src.add_argument("--fn", metavar="EXPR", help="start from a size-optimal tree of this function")
    src.add_argument("--tt", metavar="FILE")
    k.add_argument("--out")
    k.add_argument("--dot")
    k.set_defaults(run=cmd_convert)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, ParseError, ArityError, M.CapExceeded, ValueError, OSError) as exc:
        print(f"dtrank {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
