"""Simple and conjunction-query decision trees and their structural measures.

Trees are immutable and may share subtrees; every measure is computed on the
unfolded tree with memoisation keyed by node identity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .boolfun import BoolFun


@dataclass(frozen=True, eq=False)
class Leaf:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("leaf label must be 0 or 1")


@dataclass(frozen=True, eq=False)
class Query:
    """Query variable ``var`` (1-based); ``lo`` is the 0-branch."""

    var: int
    lo: "DTree"
    hi: "DTree"

    def __post_init__(self):
        if self.var < 1:
            raise ValueError("variables are numbered from 1")


@dataclass(frozen=True, eq=False)
class ConjQuery:
    """Query the conjunction of ``pos`` literals and negated ``neg`` literals.

    Masks use bit ``i-1`` for variable ``i``; ``hi`` is taken when the
    conjunction holds.
    """

    pos: int
    neg: int
    lo: "ConjTree"
    hi: "ConjTree"

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError("a variable cannot appear both positively and negatively")
        if not (self.pos | self.neg):
            raise ValueError("empty conjunction")


DTree = Union[Leaf, Query]
ConjTree = Union[Leaf, ConjQuery]

LEAF0 = Leaf(0)
LEAF1 = Leaf(1)


def leaf(b: int) -> Leaf:
    return LEAF1 if b else LEAF0


def _fold(T, on_leaf: Callable, on_node: Callable):
    memo: dict[int, object] = {}

    def go(t):
        key = id(t)
        if key in memo:
            return memo[key]
        if isinstance(t, Leaf):
            r = on_leaf(t)
        else:
            r = on_node(t, go(t.lo), go(t.hi))
        memo[key] = r
        return r

    return go(T)


def combine_rank(r0: int, r1: int) -> int:
    return r0 + 1 if r0 == r1 else max(r0, r1)


def tree_rank(T) -> int:
    """Strahler number: leaves 0; equal children bump by one, else the max."""
    return _fold(T, lambda _: 0, lambda _, a, b: combine_rank(a, b))


def tree_depth(T) -> int:
    return _fold(T, lambda _: 0, lambda _, a, b: 1 + max(a, b))


def tree_size(T) -> int:
    """Number of leaves."""
    return _fold(T, lambda _: 1, lambda _, a, b: a + b)


def leaf_counts(T) -> tuple[int, int]:
    """(number of 0-leaves, number of 1-leaves)."""
    return _fold(
        T,
        lambda t: (1 - t.value, t.value),
        lambda _, a, b: (a[0] + b[0], a[1] + b[1]),
    )


def tree_weighted_depth(T: DTree, w: Sequence[int]) -> int:
    """Maximum total weight of queried variables along a root-to-leaf path."""
    return _fold(T, lambda _: 0, lambda t, a, b: w[t.var - 1] + max(a, b))


def tree_vars(T) -> set[int]:
    out: set[int] = set()

    def node(t, a, b):
        if isinstance(t, Query):
            out.add(t.var)
        else:
            out.update(_mask_vars(t.pos | t.neg))
        return None

    _fold(T, lambda _: None, node)
    return out


def _index(x) -> int:
    if isinstance(x, int):
        return x
    idx = 0
    for i, b in enumerate(x):
        if b:
            idx |= 1 << i
    return idx


def eval_tree(T: DTree, x) -> int:
    x = _index(x)
    while isinstance(T, Query):
        T = T.hi if x >> (T.var - 1) & 1 else T.lo
    return T.value


def computes(T: DTree, f: BoolFun) -> bool:
    """True iff T agrees with f on all 2^n inputs."""
    if tree_vars(T) and max(tree_vars(T)) > f.arity:
        return False
    return all(eval_tree(T, x) == (f.table >> x & 1) for x in range(1 << f.arity))


def tree_table(T: DTree, n: int) -> int:
    t = 0
    for x in range(1 << n):
        if eval_tree(T, x):
            t |= 1 << x
    return t


def is_reduced(T: DTree) -> bool:
    """No variable is queried twice on a root-to-leaf path."""

    def go(t, seen: frozenset) -> bool:
        if isinstance(t, Leaf):
            return True
        if t.var in seen:
            return False
        s = seen | {t.var}
        return go(t.lo, s) and go(t.hi, s)

    return go(T, frozenset())


def same_tree(a, b) -> bool:
    if a is b:
        return True
    if isinstance(a, Leaf) or isinstance(b, Leaf):
        return isinstance(a, Leaf) and isinstance(b, Leaf) and a.value == b.value
    if type(a) is not type(b):
        return False
    if isinstance(a, Query):
        if a.var != b.var:
            return False
    elif (a.pos, a.neg) != (b.pos, b.neg):
        return False
    return same_tree(a.lo, b.lo) and same_tree(a.hi, b.hi)


def has_redundant_query(T: DTree) -> bool:
    """Lint: some query has structurally identical children."""
    return bool(_fold(T, lambda _: False, lambda t, a, b: a or b or same_tree(t.lo, t.hi)))


def graft(T: DTree, T0, T1):
    """Replace every b-labelled leaf of T by T_b (subtrees are shared)."""
    return _fold(
        T,
        lambda t: T1 if t.value else T0,
        lambda t, a, b: Query(t.var, a, b) if isinstance(t, Query) else ConjQuery(t.pos, t.neg, a, b),
    )


def relabel(T: DTree, mapping: Callable[[int], int]) -> DTree:
    """Rename variables with ``mapping(var)``."""
    return _fold(T, lambda t: t, lambda t, a, b: Query(mapping(t.var), a, b))


def complete_tree(vars_: Sequence[int], leaf_fn: Callable[[dict], object]):
    """Complete tree over ``vars_`` (first one at the root); leaves built from the path."""

    def go(k: int, path: dict):
        if k == len(vars_):
            return leaf_fn(dict(path))
        v = vars_[k]
        path[v] = 0
        lo = go(k + 1, path)
        path[v] = 1
        hi = go(k + 1, path)
        del path[v]
        return Query(v, lo, hi)

    return go(0, {})


# -- conjunction trees -----------------------------------------------------

def conj_holds(q: ConjQuery, x: int) -> bool:
    return (x & q.pos) == q.pos and not (x & q.neg)


def conj_eval(C: ConjTree, x) -> int:
    x = _index(x)
    while isinstance(C, ConjQuery):
        C = C.hi if conj_holds(C, x) else C.lo
    return C.value


def conj_depth(C: ConjTree) -> int:
    return tree_depth(C)


def conj_computes(C: ConjTree, f: BoolFun) -> bool:
    return all(conj_eval(C, x) == (f.table >> x & 1) for x in range(1 << f.arity))


def _mask_vars(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


# -- (AND, OR) query trees -------------------------------------------------

@dataclass(frozen=True, eq=False)
class AndOrQuery:
    """Query AND (``kind == "and"``) or OR of the variables in ``mask``."""

    kind: str
    mask: int
    lo: object
    hi: object


def and_or_eval(A, x) -> int:
    x = _index(x)
    while isinstance(A, AndOrQuery):
        if A.kind == "and":
            val = (x & A.mask) == A.mask
        else:
            val = bool(x & A.mask)
        A = A.hi if val else A.lo
    return A.value


def and_or_from_conj(C: ConjTree):
    """Split each conjunction into AND(pos) then NOT OR(neg); depth at most doubles."""

    def node(t, lo, hi):
        if not t.neg:
            return AndOrQuery("and", t.pos, lo, hi)
        inner = AndOrQuery("or", t.neg, hi, lo)
        if not t.pos:
            return inner
        return AndOrQuery("and", t.pos, lo, inner)

    return _fold(C, lambda t: t, node)


def conj_from_and_or(A) -> ConjTree:
    """AND(S) is the conjunction of S; OR(S) is the negated conjunction of its negations."""

    def node(t, lo, hi):
        if t.kind == "and":
            return ConjQuery(t.mask, 0, lo, hi)
        return ConjQuery(0, t.mask, hi, lo)

    return _fold(A, lambda t: t, node)


# -- serialisation ---------------------------------------------------------

def to_json(T) -> dict:
    def node(t, lo, hi):
        if isinstance(t, Query):
            return {"var": t.var, "lo": lo, "hi": hi}
        return {"pos": _mask_vars(t.pos), "neg": _mask_vars(t.neg), "lo": lo, "hi": hi}

    return _fold(T, lambda t: {"leaf": t.value}, node)


def from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "leaf" in obj:
        return leaf(int(obj["leaf"]))
    lo, hi = from_json(obj["lo"]), from_json(obj["hi"])
    if "var" in obj:
        return Query(int(obj["var"]), lo, hi)
    if "pos" in obj or "neg" in obj:
        pos = sum(1 << (int(i) - 1) for i in obj.get("pos", []))
        neg = sum(1 << (int(i) - 1) for i in obj.get("neg", []))
        return ConjQuery(pos, neg, lo, hi)
    raise ValueError(f"unrecognised tree node: {sorted(obj)}")


def dumps(T) -> str:
    return json.dumps(to_json(T), sort_keys=False, separators=(",", ":"))


def to_dot(T, name: str = "T") -> str:
    """Graphviz source; 0-leaves are boxes, 1-leaves double boxes; lo edges dashed."""
    lines = [f"digraph {name} {{", "  node [fontname=Helvetica];"]
    ids: dict[int, str] = {}

    def visit(t) -> str:
        if id(t) in ids:
            return ids[id(t)]
        nid = f"n{len(ids)}"
        ids[id(t)] = nid
        if isinstance(t, Leaf):
            shape = "box" if t.value == 0 else "box, peripheries=2"
            lines.append(f'  {nid} [label="{t.value}", shape={shape}];')
            return nid
        if isinstance(t, Query):
            label = f"x{t.var}"
        else:
            lits = [f"x{i}" for i in _mask_vars(t.pos)] + [f"!x{i}" for i in _mask_vars(t.neg)]
            label = " & ".join(lits)
        lines.append(f'  {nid} [label="{label}", shape=ellipse];')
        lo, hi = visit(t.lo), visit(t.hi)
        lines.append(f'  {nid} -> {lo} [label="0", style=dashed];')
        lines.append(f'  {nid} -> {hi} [label="1"];')
        return nid

    visit(T)
    lines.append("}")
    return "\n".join(lines) + "\n"


def rank_size_chain_holds(T) -> bool:
    """rank <= log2(size) <= depth for a single tree."""
    r, s, d = tree_rank(T), tree_size(T), tree_depth(T)
    return (1 << r) <= s <= (1 << d) and r <= math.log2(s) <= d
