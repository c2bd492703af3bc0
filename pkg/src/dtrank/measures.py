"""Exact decision-tree measures, certificate complexities, kill number and Gap.

Optimal rank, depth and size come from one memoised recursion over
subfunctions.  The memo key is the truth table of the subfunction with its
ignored variables projected out, which is sound because all three measures
depend only on the function and a query of an ignored variable never helps.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from . import bits
from .boolfun import BoolFun, Subcube, symmetric_profile
from .dtree import DTree, Query, combine_rank, from_json, leaf, to_json
from . import fourier

log = logging.getLogger(__name__)

EXACT_CAP = 14
HEAVY_CAP = 16
INF = float("inf")


class CapExceeded(ValueError):
    pass


def check_cap(f: BoolFun, heavy: bool = False, cap: Optional[int] = None) -> None:
    limit = cap if cap is not None else (HEAVY_CAP if heavy else EXACT_CAP)
    if f.arity > limit:
        raise CapExceeded(f"arity {f.arity} exceeds exact-search cap {limit}")


class Memo:
    """Cache of exact values keyed by canonical ``(arity, table)``.

    Inserts are idempotent, so a memo may be shared between calls (and
    threads).  With ``max_entries`` set the cache is cleared when it fills up;
    this only costs recomputation.
    """

    def __init__(self, max_entries: Optional[int] = None,
                 progress: Optional[Callable[[int], None]] = None, every: int = 100_000):
        self.data: dict = {}
        self.max_entries = max_entries
        self.progress = progress
        self.every = every
        self.inserts = 0

    def get(self, key):
        return self.data.get(key)

    def put(self, key, value):
        if self.max_entries is not None and len(self.data) >= self.max_entries:
            self.data.clear()
        self.data[key] = value
        self.inserts += 1
        if self.progress is not None and self.inserts % self.every == 0:
            self.progress(self.inserts)

    def __len__(self):
        return len(self.data)


# -- rank / depth / size ---------------------------------------------------

_SHARED = Memo(max_entries=2_000_000)


def _shared(n: int) -> Memo:
    """Process-wide memo for (rank, depth, size); large arities get a private one."""
    return _SHARED if n <= 10 else Memo()

def _rds(n: int, t: int, memo: Memo) -> tuple[int, int, int]:
    """(rank, depth, size) of a function whose variables are all relevant."""
    key = (n, t)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if bits.is_constant(t, n):
        val = (0, 0, 1)
    else:
        br = bd = bs = 1 << 30
        for i in range(n):
            c0 = bits.cofactor(t, n, i, 0)
            c1 = bits.cofactor(t, n, i, 1)
            k0, s0, _ = bits.strip(c0, n - 1)
            k1, s1, _ = bits.strip(c1, n - 1)
            r0, d0, z0 = _rds(k0, s0, memo)
            r1, d1, z1 = _rds(k1, s1, memo)
            r = r0 + 1 if r0 == r1 else (r0 if r0 > r1 else r1)
            if r < br:
                br = r
            d = 1 + (d0 if d0 > d1 else d1)
            if d < bd:
                bd = d
            if z0 + z1 < bs:
                bs = z0 + z1
        val = (br, bd, bs)
    memo.put(key, val)
    return val


def _rank_only(n: int, t: int, memo: Memo) -> int:
    key = (n, t)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if bits.is_constant(t, n):
        memo.put(key, 0)
        return 0
    best = n
    for i in range(n):
        k0, s0, _ = bits.strip(bits.cofactor(t, n, i, 0), n - 1)
        r0 = _rank_only(k0, s0, memo)
        if r0 > best:
            continue
        k1, s1, _ = bits.strip(bits.cofactor(t, n, i, 1), n - 1)
        r1 = _rank_only(k1, s1, memo)
        r = r0 + 1 if r0 == r1 else max(r0, r1)
        if r < best:
            best = r
            if best == 1:
                break
    memo.put(key, best)
    return best


def values(f: BoolFun, memo: Optional[Memo] = None, heavy: bool = False) -> tuple[int, int, int]:
    """(Rank(f), Depth(f), DTSize(f))."""
    check_cap(f, heavy)
    k, t, _ = bits.strip(f.table, f.arity)
    return _rds(k, t, memo if memo is not None else _shared(k))


def rank_value(f: BoolFun, memo: Optional[Memo] = None, heavy: bool = False) -> int:
    """Rank(f) alone; cheaper than :func:`values` on large arities."""
    check_cap(f, heavy)
    k, t, _ = bits.strip(f.table, f.arity)
    return _rank_only(k, t, memo if memo is not None else Memo())


def _extract(f: BoolFun, score: Callable[[int, int], object],
             combine: Callable[[int, object, object], object]) -> DTree:
    """Rebuild an optimal tree: lowest variable achieving the optimum, 0-branch first."""
    built: dict = {}

    def build(n: int, t: int, vars_: tuple[int, ...]) -> DTree:
        if bits.is_constant(t, n):
            return leaf(t & 1)
        key = (n, t, vars_)
        if key in built:
            return built[key]
        target = score(n, t)
        for i in range(n):
            if not bits.depends_on(t, n, i):
                continue
            c0 = bits.cofactor(t, n, i, 0)
            c1 = bits.cofactor(t, n, i, 1)
            if combine(vars_[i], score(n - 1, c0), score(n - 1, c1)) == target:
                rest = vars_[:i] + vars_[i + 1:]
                node = Query(vars_[i], build(n - 1, c0, rest), build(n - 1, c1, rest))
                built[key] = node
                return node
        raise AssertionError("no variable attains the optimum")

    return build(f.arity, f.table, tuple(range(1, f.arity + 1)))


def _score_fn(memo: Memo, idx: int):
    def score(n, t):
        k, s, _ = bits.strip(t, n)
        return _rds(k, s, memo)[idx]
    return score


def opt_rank(f: BoolFun, memo: Optional[Memo] = None, heavy: bool = False) -> tuple[int, DTree]:
    """Minimum rank of a tree computing f, with a witness tree."""
    memo = memo if memo is not None else _shared(f.arity)
    r = values(f, memo, heavy)[0]
    return r, _extract(f, _score_fn(memo, 0), lambda v, a, b: combine_rank(a, b))


def opt_depth(f: BoolFun, memo: Optional[Memo] = None, heavy: bool = False) -> tuple[int, DTree]:
    memo = memo if memo is not None else _shared(f.arity)
    d = values(f, memo, heavy)[1]
    return d, _extract(f, _score_fn(memo, 1), lambda v, a, b: 1 + max(a, b))


def opt_size(f: BoolFun, memo: Optional[Memo] = None, heavy: bool = False) -> tuple[int, DTree]:
    memo = memo if memo is not None else _shared(f.arity)
    s = values(f, memo, heavy)[2]
    return s, _extract(f, _score_fn(memo, 2), lambda v, a, b: a + b)


def _wd(n: int, t: int, w: tuple[int, ...], memo: dict) -> int:
    key = (n, t, w)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if bits.is_constant(t, n):
        best = 0
    else:
        best = 1 << 30
        for i in range(n):
            rest = w[:i] + w[i + 1:]
            k0, s0, kept0 = bits.strip(bits.cofactor(t, n, i, 0), n - 1)
            k1, s1, kept1 = bits.strip(bits.cofactor(t, n, i, 1), n - 1)
            d0 = _wd(k0, s0, tuple(rest[j] for j in kept0), memo)
            d1 = _wd(k1, s1, tuple(rest[j] for j in kept1), memo)
            best = min(best, w[i] + max(d0, d1))
    memo[key] = best
    return best


def opt_weighted_depth(f: BoolFun, w: Sequence[int], memo: Optional[dict] = None,
                       heavy: bool = False) -> tuple[int, DTree]:
    """Minimum over trees computing f of the heaviest root-to-leaf query weight."""
    check_cap(f, heavy)
    w = tuple(int(x) for x in w)
    if len(w) != f.arity:
        raise ValueError(f"expected {f.arity} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise ValueError("weights must be non-negative")
    memo = memo if memo is not None else {}
    k, s, kept = bits.strip(f.table, f.arity)
    value = _wd(k, s, tuple(w[j] for j in kept), memo)

    def build(n, t, vars_):
        if bits.is_constant(t, n):
            return leaf(t & 1)
        ws = tuple(w[v - 1] for v in vars_)
        target = _score_w(n, t, ws, memo)
        for i in range(n):
            if not bits.depends_on(t, n, i):
                continue
            rest = vars_[:i] + vars_[i + 1:]
            rw = ws[:i] + ws[i + 1:]
            c0 = bits.cofactor(t, n, i, 0)
            c1 = bits.cofactor(t, n, i, 1)
            if ws[i] + max(_score_w(n - 1, c0, rw, memo), _score_w(n - 1, c1, rw, memo)) == target:
                return Query(vars_[i], build(n - 1, c0, rest), build(n - 1, c1, rest))
        raise AssertionError("no variable attains the optimum")

    return value, build(f.arity, f.table, tuple(range(1, f.arity + 1)))


def _score_w(n, t, ws, memo):
    k, s, kept = bits.strip(t, n)
    return _wd(k, s, tuple(ws[j] for j in kept), memo)


# -- subcubes and certificates ---------------------------------------------

def _axis_arrays(n: int):
    """Per-axis digit grids broadcastable to shape (3,)*n."""
    out = []
    for k in range(n):
        shape = [1] * n
        shape[k] = 3
        out.append(np.arange(3, dtype=np.int8).reshape(shape))
    return out


def _constant_array(f: BoolFun) -> np.ndarray:
    """Array of shape (3,)*n: value of f on each subcube, or -1 if not constant.

    Axis k is variable k+1; digit 2 means the variable is free.
    """
    n = f.arity
    arr = f.to_array().astype(np.int8).reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1)))
    for k in range(n):
        a0 = np.take(arr, 0, axis=k)
        a1 = np.take(arr, 1, axis=k)
        a2 = np.where(a0 == a1, a0, np.int8(-1))
        arr = np.stack([a0, a1, a2], axis=k)
    return arr


@lru_cache(maxsize=2048)
def _constant_array_cached(n: int, t: int) -> np.ndarray:
    a = _constant_array(BoolFun(n, t))
    a.setflags(write=False)
    return a


def _codim_array(n: int) -> np.ndarray:
    codim = np.zeros((3,) * n, dtype=np.int8)
    for g in _axis_arrays(n):
        codim = codim + (g != 2).astype(np.int8)
    return codim


SMALL_SUBCUBE_ARITY = 5


@lru_cache(maxsize=None)
def _subcube_masks(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """All subcubes as (codim, support, values, input mask), in tie-break order."""
    out = []
    for support in range(1 << n):
        v = 0
        while True:
            m = 0
            for x in range(1 << n):
                if x & support == v:
                    m |= 1 << x
            out.append((support.bit_count(), support, v, m))
            if v == support:
                break
            v = (v - support) & support
    out.sort()
    return tuple(out)


def _small_cert_profile(n: int, t: int) -> tuple[int, ...]:
    prof = [0] * (1 << n)
    remaining = bits.full_mask(n)
    for c, _, _, m in _subcube_masks(n):
        sub = t & m
        if sub == 0 or sub == m:
            new = m & remaining
            if new:
                remaining &= ~new
                while new:
                    low = new & -new
                    prof[low.bit_length() - 1] = c
                    new ^= low
                if not remaining:
                    break
    return tuple(prof)


def _small_kill(n: int, t: int) -> tuple[int, int, int]:
    for c, s, v, m in _subcube_masks(n):
        sub = t & m
        if sub == 0 or sub == m:
            return c, s, v
    raise AssertionError("unreachable: single points are constant")


@lru_cache(maxsize=1 << 16)
def _cert_profile(n: int, t: int) -> tuple[int, ...]:
    if n <= SMALL_SUBCUBE_ARITY:
        return _small_cert_profile(n, t)
    return _numpy_cert_profile(n, t)


def _numpy_cert_profile(n: int, t: int) -> tuple[int, ...]:
    """Certificate sizes through the 3^n subcube array (zeta-style min over the free digit)."""
    const = _constant_array_cached(n, t) if n <= 12 else _constant_array(BoolFun(n, t))
    best = np.where(const >= 0, _codim_array(n), np.int8(127)).astype(np.int8)
    for k in range(n):
        b2 = np.take(best, 2, axis=k)
        b0 = np.minimum(np.take(best, 0, axis=k), b2)
        b1 = np.minimum(np.take(best, 1, axis=k), b2)
        best = np.stack([b0, b1, b2], axis=k)
    pts = best[(slice(0, 2),) * n]
    return tuple(int(v) for v in pts.transpose(tuple(range(n - 1, -1, -1))).reshape(-1))


def cert_profile(f: BoolFun, heavy: bool = False) -> tuple[int, ...]:
    """Minimum certificate size for every input, indexed by input."""
    check_cap(f, heavy)
    return _cert_profile(f.arity, f.table)


def cert_at(f: BoolFun, a, heavy: bool = False) -> int:
    from .boolfun import _input_index
    return cert_profile(f, heavy)[_input_index(f, a)]


def _cert_max(f: BoolFun, b: Optional[int], heavy: bool) -> int:
    prof = cert_profile(f, heavy)
    vals = [c for x, c in enumerate(prof) if b is None or (f.table >> x & 1) == b]
    return max(vals, default=0)


def cert0(f: BoolFun, heavy: bool = False) -> int:
    return _cert_max(f, 0, heavy)


def cert1(f: BoolFun, heavy: bool = False) -> int:
    return _cert_max(f, 1, heavy)


def cert(f: BoolFun, heavy: bool = False) -> int:
    return _cert_max(f, None, heavy)


def cert_min(f: BoolFun, heavy: bool = False) -> int:
    return min(cert_profile(f, heavy))


def cert_avg(f: BoolFun, heavy: bool = False) -> Fraction:
    prof = cert_profile(f, heavy)
    return Fraction(sum(prof), len(prof))


def cert_summary(f: BoolFun, heavy: bool = False) -> dict:
    prof = cert_profile(f, heavy)
    c0 = c1 = 0
    t = f.table
    for x, c in enumerate(prof):
        if t >> x & 1:
            c1 = max(c1, c)
        else:
            c0 = max(c0, c)
    return {"cert0": c0, "cert1": c1, "cert": max(c0, c1), "cert_min": min(prof),
            "cert_avg": Fraction(sum(prof), len(prof))}


def _digits(J: Subcube, n: int) -> tuple[int, ...]:
    return tuple((J.values >> k & 1) if J.support >> k & 1 else 2 for k in range(n))


def is_constant_on(f: BoolFun, J: Subcube) -> bool:
    if f.arity <= 12:
        return bool(_constant_array_cached(f.arity, f.table)[_digits(J, f.arity)] >= 0)
    return bits.is_constant(bits.restrict_masks(f.table, f.arity, J.support, J.values), f.arity - J.codim)


def min_certificate(f: BoolFun, a) -> list[int]:
    """Lexicographically first minimum-size certificate (variable list) for input a."""
    from .boolfun import _input_index
    x = _input_index(f, a)
    size = cert_profile(f)[x]
    for combo in itertools.combinations(range(1, f.arity + 1), size):
        support = sum(1 << (v - 1) for v in combo)
        if is_constant_on(f, Subcube(support, x & support)):
            return list(combo)
    raise AssertionError("certificate profile inconsistent with subcube table")


class ConstantSubcubeTable:
    """Read-only mapping Subcube -> bool (is f constant on it), over all 3^n subcubes."""

    def __init__(self, f: BoolFun):
        self.f = f
        self.array = _constant_array(f)

    def __getitem__(self, J: Subcube) -> bool:
        return bool(self.array[_digits(J, self.f.arity)] >= 0)

    def value(self, J: Subcube) -> Optional[int]:
        v = int(self.array[_digits(J, self.f.arity)])
        return None if v < 0 else v

    def __len__(self):
        return 3 ** self.f.arity

    def __iter__(self):
        n = self.f.arity
        for digits in itertools.product(range(3), repeat=n):
            s = v = 0
            for k, d in enumerate(digits):
                if d != 2:
                    s |= 1 << k
                    v |= d << k
            yield Subcube(s, v)

    def items(self):
        for J in self:
            yield J, self[J]


def constant_subcube_table(f: BoolFun, heavy: bool = False) -> ConstantSubcubeTable:
    check_cap(f, heavy)
    return ConstantSubcubeTable(f)


@lru_cache(maxsize=1 << 16)
def _kill(n: int, t: int) -> tuple[int, int, int]:
    if n <= SMALL_SUBCUBE_ARITY:
        return _small_kill(n, t) if not bits.is_constant(t, n) else (0, 0, 0)
    if bits.is_constant(t, n):
        return 0, 0, 0
    const = _constant_array_cached(n, t) if n <= 12 else _constant_array(BoolFun(n, t))
    codim = _codim_array(n)
    ok = const >= 0
    c = int(codim[ok].min())
    cands = np.argwhere(ok & (codim == c))
    best = None
    for row in cands:
        s = v = 0
        for k, d in enumerate(row):
            if d != 2:
                s |= 1 << k
                v |= int(d) << k
        if best is None or (s, v) < best:
            best = (s, v)
    return c, best[0], best[1]


def kill_number(f: BoolFun, heavy: bool = False) -> tuple[int, Subcube]:
    """Least co-dimension of a subcube on which f is constant, with the witness.

    Ties are broken by smallest support mask, then smallest value mask.
    """
    check_cap(f, heavy)
    c, s, v = _kill(f.arity, f.table)
    return c, Subcube(s, v)


# -- symmetric functions ---------------------------------------------------

def _runs(profile: Sequence[int]) -> list[int]:
    runs = []
    length = 1
    for a, b in zip(profile, profile[1:]):
        if a == b:
            length += 1
        else:
            runs.append(length)
            length = 1
    runs.append(length)
    return runs


def gap(profile: Sequence[int]) -> int:
    """Longest constant run of the weight profile, minus one."""
    return max(_runs(profile)) - 1


def gap_min(profile: Sequence[int]) -> int:
    """Shortest maximal constant run of the weight profile, minus one."""
    return min(_runs(profile)) - 1


# -- report ----------------------------------------------------------------

def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_frac(s: str) -> Fraction:
    p, _, q = s.partition("/")
    return Fraction(int(p), int(q or 1))


@dataclass
class MeasureReport:
    arity: int
    table: str
    name: Optional[str]
    rank: int
    depth: int
    size: int
    cert0: int
    cert1: int
    cert: int
    cert_min: int
    cert_avg: Fraction
    kill: int
    spar: int
    spar_tilde: int
    gap: Optional[int] = None
    gap_min: Optional[int] = None
    weights: Optional[tuple[int, ...]] = None
    weighted_depth: Optional[int] = None
    rank_tree: Optional[DTree] = field(default=None, repr=False)
    depth_tree: Optional[DTree] = field(default=None, repr=False)
    size_tree: Optional[DTree] = field(default=None, repr=False)
    weighted_tree: Optional[DTree] = field(default=None, repr=False)

    def function(self) -> BoolFun:
        from .boolfun import hex_to_table
        return BoolFun(self.arity, hex_to_table(self.table, self.arity), name=self.name)

    def to_dict(self) -> dict:
        d = {
            "function": {"n": self.arity, "hex": self.table, "name": self.name},
            "rank": self.rank,
            "depth": self.depth,
            "size": self.size,
            "weights": list(self.weights) if self.weights is not None else None,
            "weighted_depth": self.weighted_depth,
            "cert0": self.cert0,
            "cert1": self.cert1,
            "cert": self.cert,
            "cert_min": self.cert_min,
            "cert_avg": _frac_str(self.cert_avg),
            "kill": self.kill,
            "gap": self.gap,
            "gap_min": self.gap_min,
            "spar": self.spar,
            "spar_tilde": self.spar_tilde,
            "witnesses": {
                k: (to_json(v) if v is not None else None)
                for k, v in (("rank", self.rank_tree), ("depth", self.depth_tree),
                             ("size", self.size_tree), ("weighted_depth", self.weighted_tree))
            },
        }
        return d

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "MeasureReport":
        w = d.get("witnesses") or {}

        def tree(k):
            return from_json(w[k]) if w.get(k) is not None else None

        fn = d["function"]
        return cls(
            arity=fn["n"], table=fn["hex"], name=fn.get("name"),
            rank=d["rank"], depth=d["depth"], size=d["size"],
            cert0=d["cert0"], cert1=d["cert1"], cert=d["cert"], cert_min=d["cert_min"],
            cert_avg=_parse_frac(d["cert_avg"]), kill=d["kill"],
            spar=d["spar"], spar_tilde=d["spar_tilde"],
            gap=d.get("gap"), gap_min=d.get("gap_min"),
            weights=tuple(d["weights"]) if d.get("weights") is not None else None,
            weighted_depth=d.get("weighted_depth"),
            rank_tree=tree("rank"), depth_tree=tree("depth"), size_tree=tree("size"),
            weighted_tree=tree("weighted_depth"),
        )

    @classmethod
    def from_json(cls, text: str) -> "MeasureReport":
        return cls.from_dict(json.loads(text))

    def rows(self) -> list[tuple[str, str]]:
        out = [("function", self.name or f"TT:{self.table}:{self.arity}"), ("arity", str(self.arity)),
               ("rank", str(self.rank)), ("depth", str(self.depth)), ("size", str(self.size))]
        if self.weights is not None:
            out.append((f"weighted_depth{list(self.weights)}", str(self.weighted_depth)))
        out += [("cert0", str(self.cert0)), ("cert1", str(self.cert1)), ("cert", str(self.cert)),
                ("cert_min", str(self.cert_min)), ("cert_avg", str(self.cert_avg)),
                ("kill", str(self.kill)), ("spar", str(self.spar)), ("spar_tilde", str(self.spar_tilde))]
        if self.gap is not None:
            out += [("gap", str(self.gap)), ("gap_min", str(self.gap_min))]
        return out


def measure_report(f: BoolFun, w: Optional[Sequence[int]] = None, memo: Optional[Memo] = None,
                   heavy: bool = False, witnesses: bool = True) -> MeasureReport:
    """Every measure of f; Gap fields only for symmetric f."""
    check_cap(f, heavy)
    memo = memo if memo is not None else _shared(f.arity)
    r, d, s = values(f, memo, heavy)
    cs = cert_summary(f, heavy)
    k, _ = kill_number(f, heavy)
    spec = fourier.wht(f)
    prof = symmetric_profile(f)
    rep = MeasureReport(
        arity=f.arity, table=f.hex(), name=f.name, rank=r, depth=d, size=s,
        cert0=cs["cert0"], cert1=cs["cert1"], cert=cs["cert"], cert_min=cs["cert_min"],
        cert_avg=cs["cert_avg"], kill=k, spar=spec.spar(), spar_tilde=spec.spar_tilde(),
        gap=gap(prof) if prof is not None else None,
        gap_min=gap_min(prof) if prof is not None else None,
    )
    if w is not None:
        rep.weights = tuple(int(x) for x in w)
        rep.weighted_depth, rep.weighted_tree = opt_weighted_depth(f, w, heavy=heavy)
    if witnesses:
        rep.rank_tree = opt_rank(f, memo, heavy)[1]
        rep.depth_tree = opt_depth(f, memo, heavy)[1]
        rep.size_tree = opt_size(f, memo, heavy)[1]
    return rep
