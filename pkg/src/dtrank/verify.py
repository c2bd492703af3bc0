"""Theorem harness: corpora of functions, named checks and a pass/fail report.

Every check compares exact integers.  Bounds stated with logarithms are
compared in floating point with an additive slack of ``SLACK`` after both
sides have been computed from exact integers.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import constructions as C
from . import fourier as F
from . import games as G
from . import measures as M
from .boolfun import (
    AND, MAJ, OR, PARITY, THR, TRIBES_D, BoolFun, all_functions, compose, dual, from_profile,
    iterate, negate, parse_expr, symmetric_profile,
)
from .dtree import (
    computes, conj_computes, conj_depth, leaf_counts, tree_depth, tree_rank, tree_size,
    tree_weighted_depth,
)

SLACK = 1e-9


# -- corpora ---------------------------------------------------------------

def exhaustive(n: int) -> Iterator[BoolFun]:
    if n > 4:
        raise ValueError("exhaustive corpora are limited to arity 4")
    return all_functions(n)


def all_symmetric(n: int) -> Iterator[BoolFun]:
    if n > 10:
        raise ValueError("symmetric corpora are limited to arity 10")
    for code in range(1 << (n + 1)):
        yield from_profile([code >> w & 1 for w in range(n + 1)])


def random_functions(n: int, count: int, seed: int) -> Iterator[BoolFun]:
    rng = random.Random(seed)
    for _ in range(count):
        yield BoolFun(n, rng.getrandbits(1 << n))


def compositions(outer: Sequence[BoolFun], inner: Sequence[BoolFun]) -> Iterator[BoolFun]:
    for f in outer:
        for g in inner:
            yield compose(f, [g] * f.arity)


CATALOG_EXPRS = [
    "CONST:0:3", "CONST:1:3",
    *[f"{name}:{n}" for name in ("AND", "OR", "PARITY", "MAJ") for n in range(1, 7)],
    *[f"THR:{k}:{n}" for n in range(1, 7) for k in range(1, n + 1)],
    "TRIBES:2x2", "TRIBES:2x3", "TRIBES:3x2", "TRIBES:3x3",
    "TRIBES_D:2x2", "TRIBES_D:2x3", "TRIBES_D:3x2", "TRIBES_D:3x3",
    "COMPOSE(AND:2;PARITY:2)", "COMPOSE(AND:2;PARITY:3)", "COMPOSE(AND:3;PARITY:2)",
    "COMPOSE(AND:3;PARITY:3)", "ITER(MAJ:3,2)", "ITER(PARITY:2,2)",
    "MAJ_OR_PARITY:6", "MAJ_OR_PARITY:6:3", "MAJ_OR_PARITY:8", "MAJ_OR_PARITY:8:4",
]


def catalog_corpus(max_arity: int = 9) -> Iterator[BoolFun]:
    for e in CATALOG_EXPRS:
        f = parse_expr(e)
        if f.arity <= max_arity:
            yield f


def corpus(kind: str, **params) -> Iterator[BoolFun]:
    """Named corpora: exhaustive(n), symmetric(n), catalog(max_arity), random(n, count, seed),
    compositions(outer, inner)."""
    if kind == "exhaustive":
        return exhaustive(params["n"])
    if kind in ("symmetric", "all-symmetric"):
        return all_symmetric(params["n"])
    if kind == "catalog":
        return catalog_corpus(params.get("max_arity", 9))
    if kind == "random":
        return random_functions(params["n"], params.get("count", 100), params.get("seed", 0))
    if kind == "compositions":
        return compositions(params["outer"], params["inner"])
    raise ValueError(f"unknown corpus {kind!r}; available: exhaustive, symmetric, catalog, random, compositions")


# -- per-function context ---------------------------------------------------

class Ctx:
    """Lazily computed measures of one function, shared by all checks.

    ``corrupt`` maps a measure name to a function applied to its value; the
    suite self-test uses it to make sure a wrong measure is noticed.
    """

    def __init__(self, f: BoolFun, memo: M.Memo, corrupt: Optional[dict] = None):
        self.f = f
        self.n = f.arity
        self.memo = memo
        self.corrupt = corrupt or {}
        self._cache: dict = {}

    def _get(self, key, fn):
        if key not in self._cache:
            v = fn()
            if key in self.corrupt:
                v = self.corrupt[key](v)
            self._cache[key] = v
        return self._cache[key]

    @property
    def rank(self) -> int:
        return self._get("rank", lambda: M.values(self.f, self.memo)[0])

    @property
    def depth(self) -> int:
        return self._get("depth", lambda: M.values(self.f, self.memo)[1])

    @property
    def size(self) -> int:
        return self._get("size", lambda: M.values(self.f, self.memo)[2])

    @property
    def certs(self) -> dict:
        return self._get("certs", lambda: M.cert_summary(self.f))

    @property
    def c0(self):
        return self._get("cert0", lambda: self.certs["cert0"])

    @property
    def c1(self):
        return self._get("cert1", lambda: self.certs["cert1"])

    @property
    def c(self):
        return self._get("cert", lambda: self.certs["cert"])

    @property
    def cmin(self):
        return self._get("cert_min", lambda: self.certs["cert_min"])

    @property
    def kill(self) -> int:
        return self._get("kill", lambda: M.kill_number(self.f)[0])

    @property
    def spar(self) -> int:
        return self._get("spar", lambda: F.spar(self.f))

    @property
    def profile(self):
        return self._get("profile", lambda: symmetric_profile(self.f))

    @property
    def constant(self) -> bool:
        return self.f.is_constant()

    def tree(self, kind: str):
        fn = {"rank": M.opt_rank, "depth": M.opt_depth, "size": M.opt_size}[kind]
        return self._get(f"tree_{kind}", lambda: fn(self.f, self.memo)[1])


def _log2(x: int) -> float:
    return math.log2(x)


# -- checks ----------------------------------------------------------------

@dataclass
class Check:
    name: str
    description: str
    run: Callable[[Ctx], Optional[str]]
    applies: Callable[[Ctx], bool] = lambda ctx: True
    group: str = "function"


def _fail(cond: bool, msg: str) -> Optional[str]:
    return None if cond else msg


def _rank_size(x: Ctx):
    r, s, n = x.rank, x.size, x.n
    if (1 << r) > s:
        return f"2^rank {1 << r} > size {s}"
    if not x.constant:
        ub = r * math.log2(math.e * n / r)
        if _log2(s) > ub + SLACK:
            return f"log2 size {_log2(s):.6f} > rank*log2(e n/rank) {ub:.6f}"
    return None


def _depth_sparsity(x: Ctx):
    sp, s, d = x.spar, x.size, x.depth
    return _fail(sp <= s * (1 << d) <= 1 << (2 * d), f"spar {sp}, size {s}, depth {d}")


def _rank_sparsity_depth(x: Ctx):
    bound = x.rank * (1 + math.log2(x.spar))
    return _fail(x.depth <= bound + SLACK, f"depth {x.depth} > {bound:.6f}")


def _kill_rank(x: Ctx):
    return _fail(x.kill <= x.rank, f"kill {x.kill} > rank {x.rank}")


def _cert_sandwich(x: Ctx):
    a = x.cmin
    b = (x.c0 - 1) * (x.c1 - 1) + 1
    c = (x.c - 1) ** 2 + 1
    if x.constant:
        return _fail(x.rank == 0 and a == 0, f"constant with rank {x.rank}, cert_min {a}")
    return _fail(a <= x.rank <= b <= c, f"cert_min {a}, rank {x.rank}, (C0-1)(C1-1)+1 {b}, (C-1)^2+1 {c}")


def _depth_cert(x: Ctx):
    return _fail(x.c <= x.depth <= x.c0 * x.c1, f"C {x.c}, depth {x.depth}, C0*C1 {x.c0 * x.c1}")


def _symmetric_rank(x: Ctx):
    g = M.gap(x.profile)
    return _fail(x.rank == x.n - g, f"rank {x.rank} != n - gap = {x.n - g}")


def _symmetric_cert(x: Ctx):
    gm = M.gap_min(x.profile)
    if x.c != x.n - gm:
        return f"C {x.c} != n - gap_min = {x.n - gm}"
    if not x.constant:
        if not (x.n - x.c + 1 <= x.rank <= x.c):
            return f"rank {x.rank} outside [n-C+1, C] = [{x.n - x.c + 1}, {x.c}]"
        if x.depth != x.n:
            return f"non-constant symmetric function with depth {x.depth} < n"
    return None


def _symmetric_weighted(x: Ctx):
    if x.constant:
        return None
    w = list(range(1, x.n + 1))
    d = M.opt_weighted_depth(x.f, w)[0]
    return _fail(d == sum(w), f"weighted depth {d} != sum of weights {sum(w)}")


def _game_rank(x: Ctx):
    v = G.game_value(x.f)
    return _fail(v == x.rank, f"game value {v} != rank {x.rank}")


def _asym_size(x: Ctx):
    v = G.asym_game_value(x.f)
    if v != x.size:
        return f"asymmetric value 2^{_log2(v):.4f} != size {x.size}"
    return _fail(_log2(v) + SLACK >= G.game_value(x.f), "asymmetric value below symmetric value")


def _optimal_play(x: Ctx):
    s = G.play(x.f, G.OptimalProver(x.f), G.OptimalDelayer()).score
    if s != x.rank:
        return f"optimal prover vs optimal delayer scored {s}, rank {x.rank}"
    a = G.play(x.f, G.OptimalAsymProver(), G.OptimalAsymDelayer(), asym=True).score
    return _fail(a == x.size, f"optimal asymmetric play scored {a}, size {x.size}")


def _halving(x: Ctx):
    bad = F.halving_failures(x.f)
    return _fail(not bad, f"halving fails for S masks {bad[:4]}")


def _neg_dual(x: Ctx):
    base = (x.rank, x.depth, x.size)
    for name, g in (("negation", negate(x.f)), ("dual", dual(x.f))):
        v = M.values(g, x.memo)
        if v != base:
            return f"{name} has (rank, depth, size) {v}, function has {base}"
    return None


def _subfunction(x: Ctx):
    for v in range(1, x.n + 1):
        for b in (0, 1):
            r = M.values(x.f.fix(v, b), x.memo)[0]
            if r > x.rank:
                return f"x{v}={b} restriction has rank {r} > {x.rank}"
    return None


def _witnesses(x: Ctx):
    for kind, measure, val in (("rank", tree_rank, x.rank), ("depth", tree_depth, x.depth),
                               ("size", tree_size, x.size)):
        T = x.tree(kind)
        if not computes(T, x.f):
            return f"{kind} witness does not compute f"
        if measure(T) != val:
            return f"{kind} witness has {kind} {measure(T)} != {val}"
    return None


_wd_memo: dict = {}


def _weighted(x: Ctx):
    ones = [1] * x.n
    d = M.opt_weighted_depth(x.f, ones, _wd_memo)[0]
    if d != x.depth:
        return f"unit-weight depth {d} != depth {x.depth}"
    T = x.tree("depth")
    base = tree_weighted_depth(T, ones)
    for i in range(x.n):
        w = list(ones)
        w[i] += 1
        if tree_weighted_depth(T, w) > base + 1:
            return f"raising w{i + 1} raised weighted depth by more than 1"
    return None


def _cert_tree(x: Ctx):
    T = C.cert_tree(x.f)
    if not computes(T, x.f):
        return "cert tree does not compute f"
    bound = (x.c0 - 1) * (x.c1 - 1) + 1 if not x.constant else 0
    return _fail(tree_rank(T) <= bound, f"cert tree rank {tree_rank(T)} > {bound}")


def _sparsity_tree(x: Ctx):
    T = C.sparsity_tree(x.f)
    if not computes(T, x.f):
        return "sparsity tree does not compute f"
    bound = x.rank * (1 + math.log2(x.spar))
    st = F.spar_tilde(x.f)
    if st >= 1:
        bound = min(bound, x.rank * (1 + math.log2(st)))
    return _fail(tree_depth(T) <= bound + SLACK, f"sparsity tree depth {tree_depth(T)} > {bound:.6f}")


def _conj_balance(x: Ctx):
    Cj = C.conj_from_simple(x.tree("size"))
    if not conj_computes(Cj, x.f):
        return "balanced conjunction tree does not compute f"
    d = conj_depth(Cj)
    bound = C.conj_balance_bound(x.size)
    if d > bound:
        return f"conjunction depth {d} > ceil(2 log_1.5 size) = {bound}"
    T = C.simple_from_conj(Cj)
    if not computes(T, x.f):
        return "simple tree from conjunction tree does not compute f"
    if tree_rank(T) > d:
        return f"simple tree rank {tree_rank(T)} > conjunction depth {d}"
    return _fail(x.rank <= d, f"rank {x.rank} > conjunction depth {d}")


def _conj_exact(x: Ctx):
    e = C.exact_conj_depth(x.f)
    bound = C.conj_balance_bound(x.size)
    return _fail(x.rank <= e <= bound, f"rank {x.rank}, exact conj depth {e}, ceil(2 log_1.5 size) {bound}")


def _cert_prover(x: Ctx):
    if x.constant:
        return None
    s = G.best_delayer_score(x.f, G.CertProver())
    bound = (x.c0 - 1) * (x.c1 - 1) + 1
    return _fail(s <= bound, f"certificate prover concedes {s} > {bound}")


# composition checks -------------------------------------------------------

def _compose_parts(x: Ctx):
    o = x.f.origin
    if o and o[0] == "compose":
        return o[1], list(o[2])
    if o and o[0] == "iterate" and o[2] >= 2:
        return o[1], [iterate(o[1], o[2] - 1)] * o[1].arity
    return None


def _is_compose(x: Ctx) -> bool:
    parts = _compose_parts(x)
    return parts is not None and not parts[0].is_constant() and all(not g.is_constant() for g in parts[1])


def _compose_weighted(x: Ctx):
    f, gs = _compose_parts(x)
    rs = [M.values(g, x.memo)[0] for g in gs]
    ub = M.opt_weighted_depth(f, rs)[0]
    lb = M.opt_weighted_depth(f, [r - 1 for r in rs])[0] + 1
    if not (lb <= x.rank <= ub):
        return f"rank {x.rank} outside [Depth_w(f, r-1)+1, Depth_w(f, r)] = [{lb}, {ub}]"
    rf = M.values(f, x.memo)[0]
    if x.rank < max([rf] + rs):
        return f"rank {x.rank} below a component rank"
    Tf = M.opt_weighted_depth(f, rs)[1]
    T = C.composed_tree(Tf, [M.opt_rank(g, x.memo)[1] for g in gs], [g.arity for g in gs])
    if not computes(T, x.f):
        return "composed tree does not compute the composition"
    return _fail(tree_rank(T) <= tree_weighted_depth(Tf, rs),
                 f"composed tree rank {tree_rank(T)} > weighted depth {tree_weighted_depth(Tf, rs)}")


def _uniform_compose(x: Ctx) -> bool:
    if not _is_compose(x):
        return False
    _, gs = _compose_parts(x)
    return all(g == gs[0] for g in gs)


def _compose_sandwich(x: Ctx):
    f, gs = _compose_parts(x)
    g = gs[0]
    df = M.values(f, x.memo)[1]
    rg, dg = M.values(g, x.memo)[0], M.values(g, x.memo)[1]
    if not (df * (rg - 1) + 1 <= x.rank <= df * rg):
        return f"rank {x.rank} outside [{df * (rg - 1) + 1}, {df * rg}]"
    return _fail(x.depth == df * dg, f"depth {x.depth} != {df}*{dg}")


def _is_iterate(x: Ctx) -> bool:
    o = x.f.origin
    return bool(o and o[0] == "iterate" and not o[1].is_constant())


def _iterated(x: Ctx):
    base, k = x.f.origin[1], x.f.origin[2]
    r, d, _ = M.values(base, x.memo)
    lo, hi = d ** (k - 1) * (r - 1) + 1, d ** (k - 1) * r
    return _fail(lo <= x.rank <= hi, f"rank {x.rank} outside [{lo}, {hi}]")


def _is_tribes(x: Ctx) -> bool:
    o = x.f.origin
    return bool(o and o[0] in ("tribes", "tribes_d"))


def _tribes_leaves(x: Ctx):
    kind, n, m = x.f.origin
    zeros, ones = leaf_counts(x.tree("size"))
    if kind == "tribes":
        zeros, ones = ones, zeros
    return _fail(ones >= m ** n and zeros >= n,
                 f"size-optimal tree has {ones} settling leaves (need {m ** n}) and {zeros} others (need {n})")


CHECKS: list[Check] = [
    Check("rank-size", "rank <= log2 size, and log2 size <= rank*log2(e*n/rank) when non-constant", _rank_size),
    Check("depth-sparsity", "log2 spar <= log2 size + depth <= 2*depth", _depth_sparsity),
    Check("rank-sparsity-depth", "depth <= rank*(1 + log2 spar)", _rank_sparsity_depth),
    Check("kill-rank", "smallest constant subcube co-dimension <= rank", _kill_rank),
    Check("cert-sandwich", "C_min <= rank <= (C0-1)(C1-1)+1 <= (C-1)^2+1", _cert_sandwich),
    Check("depth-cert", "C <= depth <= C0*C1", _depth_cert),
    Check("symmetric-rank-gap", "symmetric: rank = n - Gap", _symmetric_rank, lambda x: x.profile is not None),
    Check("symmetric-cert-gap", "symmetric: C = n - Gap_min; non-constant: n-C+1 <= rank <= C and depth = n",
          _symmetric_cert, lambda x: x.profile is not None),
    Check("symmetric-weighted", "non-constant symmetric: weighted depth is the sum of the weights",
          _symmetric_weighted, lambda x: x.profile is not None and x.n <= 6),
    Check("game-rank", "symmetric game value (direct minimax) = rank", _game_rank),
    Check("asym-size", "asymmetric game value = log2 size >= symmetric value", _asym_size),
    Check("optimal-play", "optimal strategies against each other score exactly rank / size", _optimal_play,
          lambda x: x.n <= 9),
    Check("halving", "a subcube making f constant means every parallel subcube halves spar~", _halving,
          lambda x: x.n <= 6),
    Check("neg-dual", "negation and dual keep rank, depth and size", _neg_dual),
    Check("subfunction-rank", "fixing a variable never raises rank", _subfunction),
    Check("witnesses", "extracted optimal trees compute f and attain the optimum", _witnesses),
    Check("weighted-depth", "unit weights give depth; raising one weight adds at most 1", _weighted,
          lambda x: x.n <= 9),
    Check("cert-tree", "certificate construction computes f with rank <= (C0-1)(C1-1)+1", _cert_tree),
    Check("sparsity-tree", "kill-number construction computes f with depth <= rank*(1+log2 spar)", _sparsity_tree),
    Check("conj-balance", "balanced conjunction tree: depth <= ceil(2 log_1.5 size), back-conversion rank <= its depth",
          _conj_balance),
    Check("conj-exact", "rank <= exact conjunction depth <= ceil(2 log_1.5 size)", _conj_exact, lambda x: x.n <= 3),
    Check("cert-prover", "certificate prover concedes at most (C0-1)(C1-1)+1 points", _cert_prover,
          lambda x: x.n <= 6),
    Check("compose-weighted", "Depth_w(f,[r_i-1])+1 <= rank(f o g) <= Depth_w(f,[r_i]); composed tree meets the upper bound",
          _compose_weighted, _is_compose, "composition"),
    Check("compose-sandwich", "Depth(f)(Rank(g)-1)+1 <= Rank(f o g) <= Depth(f)Rank(g), Depth(f o g) = Depth(f)Depth(g)",
          _compose_sandwich, _uniform_compose, "composition"),
    Check("iterated-rank", "D^(k-1)(R-1)+1 <= rank of the k-fold iterate <= D^(k-1)R", _iterated, _is_iterate,
          "composition"),
    Check("tribes-leaves", "size-optimal Tribes tree has >= m^n leaves of the settling value and >= n of the other",
          _tribes_leaves, _is_tribes, "composition"),
]

CHECKS_BY_NAME = {c.name: c for c in CHECKS}

SUITES = {
    "all": [c.name for c in CHECKS],
    "symmetric": ["symmetric-rank-gap", "symmetric-cert-gap"],
    "measures": ["rank-size", "depth-sparsity", "rank-sparsity-depth", "kill-rank", "cert-sandwich",
                 "depth-cert", "symmetric-rank-gap", "symmetric-cert-gap", "neg-dual", "subfunction-rank"],
    "games": ["game-rank", "asym-size", "optimal-play", "cert-prover"],
    "constructions": ["cert-tree", "sparsity-tree", "conj-balance", "conj-exact"],
    "composition": ["compose-weighted", "compose-sandwich", "iterated-rank", "tribes-leaves"],
}


def resolve_checks(names: Iterable[str]) -> list[Check]:
    out = []
    for name in names:
        if name in SUITES:
            out.extend(CHECKS_BY_NAME[c] for c in SUITES[name])
        elif name in CHECKS_BY_NAME:
            out.append(CHECKS_BY_NAME[name])
        else:
            raise KeyError(f"unknown check {name!r}; available: {', '.join(list(SUITES) + list(CHECKS_BY_NAME))}")
    seen, uniq = set(), []
    for c in out:
        if c.name not in seen:
            seen.add(c.name)
            uniq.append(c)
    return uniq


# -- standalone claims ------------------------------------------------------

def claim_min_cert_not_lower_bound() -> tuple[bool, str]:
    """Some function has rank below min(C0, C1): THR^t_n OR PARITY_n for n in {6, 8}."""
    lines, ok_any = [], False
    for n in (6, 8):
        for t in (n // 2, n // 2 + 1):
            f = BoolFun(n, THR(t, n).table | PARITY(n).table)
            r = M.values(f)[0]
            cs = M.cert_summary(f)
            g = M.gap(symmetric_profile(f))
            holds = r < min(cs["cert0"], cs["cert1"])
            ok_any |= holds
            lines.append(f"n={n} t={t}: rank {r} C0 {cs['cert0']} C1 {cs['cert1']} gap {g} -> {'holds' if holds else 'fails'}")
    return ok_any, "; ".join(lines)


def claim_avg_cert_neither_bound() -> tuple[bool, str]:
    f, g = AND(3), TRIBES_D(3, 2)
    cf, cg = M.cert_avg(f), M.cert_avg(g)
    rf, rg = M.values(f)[0], M.values(g)[0]
    ok = cf == Fraction(5, 4) and rf < cf and cg == Fraction(155, 64) and cg < rg
    return ok, f"AND_3: rank {rf} < C_avg {cf}; TRIBES_D(3,2): C_avg {cg} < rank {rg}"


def claim_cert_not_upper_bound(heavy: bool = False) -> tuple[bool, str]:
    k = 2 if heavy else 1
    f = iterate(compose(AND(2), [OR(2), OR(2)]), k)
    cs = M.cert_summary(f, heavy=heavy)
    r = M.rank_value(f, heavy=heavy)
    c = cs["cert"]
    need = Fraction(c * c, 4) + 1
    ok = cs["cert0"] == cs["cert1"] == 2 ** k and r >= need
    return ok, f"k={k}: C0 {cs['cert0']} C1 {cs['cert1']} rank {r} >= C^2/4+1 = {need}"


CLAIMS = {
    "min-cert-not-lower-bound": claim_min_cert_not_lower_bound,
    "avg-cert-neither-bound": claim_avg_cert_neither_bound,
    "cert-not-upper-bound": claim_cert_not_upper_bound,
}


# -- report ----------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    description: str
    applied: int = 0
    passed: int = 0
    first_failure: Optional[dict] = None

    @property
    def failed(self) -> int:
        return self.applied - self.passed

    def merge(self, other: "CheckResult") -> None:
        self.applied += other.applied
        self.passed += other.passed
        if self.first_failure is None:
            self.first_failure = other.first_failure


@dataclass
class Report:
    results: dict = field(default_factory=dict)
    claims: dict = field(default_factory=dict)
    functions: int = 0
    incomplete: bool = False
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.failed == 0 for r in self.results.values()) and all(c[0] for c in self.claims.values())

    def merge(self, other: "Report") -> None:
        self.functions += other.functions
        self.incomplete |= other.incomplete
        for name, r in other.results.items():
            if name in self.results:
                self.results[name].merge(r)
            else:
                self.results[name] = r
        self.claims.update(other.claims)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "incomplete": self.incomplete,
            "functions": self.functions,
            "elapsed_seconds": round(self.elapsed, 3),
            "checks": [
                {"name": r.name, "description": r.description, "applied": r.applied, "passed": r.passed,
                 "failed": r.failed, "first_failure": r.first_failure}
                for r in sorted(self.results.values(), key=lambda r: r.name)
            ],
            "claims": [{"name": k, "ok": v[0], "detail": v[1]} for k, v in sorted(self.claims.items())],
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def table(self) -> str:
        rows = [("check", "applied", "passed", "failed", "first failure")]
        for r in sorted(self.results.values(), key=lambda r: r.name):
            ff = ""
            if r.first_failure:
                ff = f"TT:{r.first_failure['hex']}:{r.first_failure['n']} {r.first_failure['detail']}"
            rows.append((r.name, str(r.applied), str(r.passed), str(r.failed), ff))
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = ["  ".join(row[i].ljust(widths[i]) for i in range(4)) + "  " + row[4] for row in rows]
        for k, (ok, detail) in sorted(self.claims.items()):
            lines.append(f"claim {k}: {'PASS' if ok else 'FAIL'}  {detail}")
        status = "PASS" if self.ok else "FAIL"
        if self.incomplete:
            status += " (incomplete: budget exceeded)"
        lines.append(f"{status}: {self.functions} functions in {self.elapsed:.1f}s")
        return "\n".join(lines)


def _run_chunk(functions: list, names: list, corrupt: Optional[dict], deadline: Optional[float]) -> Report:
    checks = [CHECKS_BY_NAME[n] for n in names]
    rep = Report(results={c.name: CheckResult(c.name, c.description) for c in checks})
    memo = M.Memo(max_entries=4_000_000)
    for f in functions:
        if deadline is not None and time.time() > deadline:
            rep.incomplete = True
            break
        ctx = Ctx(f, memo, corrupt)
        rep.functions += 1
        for c in checks:
            if not c.applies(ctx):
                continue
            res = rep.results[c.name]
            res.applied += 1
            try:
                msg = c.run(ctx)
            except Exception as exc:  # a crash inside a check counts as a failure
                msg = f"{type(exc).__name__}: {exc}"
            if msg is None:
                res.passed += 1
            elif res.first_failure is None:
                res.first_failure = {"hex": f.hex(), "n": f.arity, "name": f.name, "detail": msg}
    return rep


def run_suite(functions: Iterable[BoolFun], checks: Iterable[str] = ("all",), jobs: int = 1,
              budget: Optional[float] = None, claims: Iterable[str] = (), corrupt: Optional[dict] = None,
              heavy: bool = False, chunk: int = 2048) -> Report:
    """Run the named checks over every function; ``budget`` is a wall-clock limit in seconds."""
    start = time.time()
    deadline = start + budget if budget is not None else None
    names = [c.name for c in resolve_checks(checks)]
    report = Report(results={n: CheckResult(n, CHECKS_BY_NAME[n].description) for n in names})
    it = iter(functions)
    chunks = iter(lambda: list(itertools.islice(it, chunk)), [])
    if jobs <= 1:
        for part in chunks:
            report.merge(_run_chunk(part, names, corrupt, deadline))
            if report.incomplete:
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_chunk, part, names, corrupt, deadline) for part in chunks]
            for fut in futures:
                report.merge(fut.result())
    for name in claims:
        if name not in CLAIMS:
            raise KeyError(f"unknown claim {name!r}; available: {', '.join(CLAIMS)}")
        fn = CLAIMS[name]
        report.claims[name] = fn(heavy) if name == "cert-not-upper-bound" else fn()
    report.elapsed = time.time() - start
    return report


def conj_literal_log_failures(n: int) -> list[tuple[str, int, int]]:
    """Functions of arity n whose exact conjunction depth exceeds log2 of their tree size."""
    out = []
    memo = M.Memo()
    for f in exhaustive(n):
        s = M.values(f, memo)[2]
        e = C.exact_conj_depth(f)
        if (1 << e) > s:
            out.append((f.hex(), e, s))
    return out


# -- symmetric closed forms ------------------------------------------------

TABLE1_COLUMNS = ("depth", "cert0", "cert1", "cert", "gap", "rank")


def table1_closed_form(kind: str, n: int, k: Optional[int] = None) -> dict:
    """Closed-form values for the simple symmetric families."""
    if kind == "constant":
        vals = (0, 0, 0, 0, n, 0)
    elif kind == "and":
        vals = (n, 1, n, n, n - 1, 1)
    elif kind == "or":
        vals = (n, n, 1, n, n - 1, 1)
    elif kind == "parity":
        vals = (n, n, n, n, 0, n)
    elif kind == "maj":
        h = n // 2
        if n % 2 == 0:
            vals = (n, h, h + 1, h + 1, h, h)
        else:
            vals = (n, h + 1, h + 1, h + 1, h, h + 1)
    elif kind == "thr":
        g = max(k - 1, n - k)
        vals = (n, n - k + 1, k, max(n - k + 1, k), g, n - g)
    else:
        raise ValueError(f"unknown family {kind!r}")
    return dict(zip(TABLE1_COLUMNS, vals))


def table1_families(n: int) -> list[tuple[str, str, Optional[int], BoolFun]]:
    rows = [("constant", "0", None, BoolFun(n, 0)), ("and", f"AND_{n}", None, AND(n)),
            ("or", f"OR_{n}", None, OR(n)), ("parity", f"PARITY_{n}", None, PARITY(n)),
            ("maj", f"MAJ_{n}", None, MAJ(n))]
    rows += [("thr", f"THR^{k}_{n}", k, THR(k, n)) for k in range(1, n + 1)]
    return rows


def table1(n: int, memo: Optional[M.Memo] = None) -> list[dict]:
    """Each family row with computed values, closed-form values and whether they agree."""
    out = []
    for kind, label, k, f in table1_families(n):
        cs = M.cert_summary(f)
        r, d, _ = M.values(f, memo)
        got = {"depth": d, "cert0": cs["cert0"], "cert1": cs["cert1"], "cert": cs["cert"],
               "gap": M.gap(symmetric_profile(f)), "rank": r}
        want = table1_closed_form(kind, n, k)
        out.append({"family": label, "computed": got, "expected": want, "match": got == want})
    return out
