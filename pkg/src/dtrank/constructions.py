"""Explicit tree constructions, each checkable against the bound it promises."""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from . import bits
from .boolfun import BoolFun
from .dtree import (
    ConjQuery,
    ConjTree,
    DTree,
    Leaf,
    Query,
    _fold,
    _mask_vars,
    complete_tree,
    graft,
    leaf,
    tree_size,
    tree_vars,
)
from .measures import check_cap, cert_profile, kill_number, min_certificate


def _sub(f: BoolFun, vars_: tuple[int, ...], assignment: dict[int, int]):
    """Restrict f (whose variables are ``vars_`` in original numbering)."""
    t, n = f.table, f.arity
    for pos in range(n - 1, -1, -1):
        v = vars_[pos]
        if v in assignment:
            t = bits.cofactor(t, n, pos, assignment[v])
            n -= 1
    rest = tuple(v for v in vars_ if v not in assignment)
    return BoolFun(n, t), rest


# -- certificate-based construction ----------------------------------------

def cert_tree(f: BoolFun) -> DTree:
    """Tree of rank at most (C0-1)(C1-1)+1.

    When every 1-input has a single-literal certificate the tree is a chain
    of those literals.  Otherwise it spells out a minimum certificate of the
    smallest 0-input as a complete tree and recurses below it.
    """
    check_cap(f)
    return _cert_tree(f, tuple(range(1, f.arity + 1)))


def _cert_tree(f: BoolFun, vars_: tuple[int, ...]) -> DTree:
    c = f.constant_value()
    if c is not None:
        return leaf(c)
    prof = cert_profile(f)
    c1 = max(p for x, p in enumerate(prof) if f.table >> x & 1)
    if c1 == 1:
        for pos in range(f.arity):
            for b in (0, 1):
                g = f.fix(pos + 1, b)
                if g.constant_value() == 1:
                    rest = vars_[:pos] + vars_[pos + 1:]
                    other = _cert_tree(f.fix(pos + 1, 1 - b), rest)
                    lo, hi = (LEAF_ONE, other) if b == 0 else (other, LEAF_ONE)
                    return Query(vars_[pos], lo, hi)
        raise AssertionError("no single-literal 1-certificate")
    a = next(x for x in range(1 << f.arity) if not f.table >> x & 1)
    cert_vars = [vars_[p - 1] for p in min_certificate(f, a)]

    def at_leaf(path: dict) -> DTree:
        g, rest = _sub(f, vars_, path)
        return _cert_tree(g, rest)

    return complete_tree(cert_vars, at_leaf)


LEAF_ONE = leaf(1)


# -- sparsity-based construction -------------------------------------------

def sparsity_tree(f: BoolFun) -> DTree:
    """Query the variables of a smallest constant-making subcube, then recurse."""
    check_cap(f)
    return _sparsity_tree(f, tuple(range(1, f.arity + 1)))


def _sparsity_tree(f: BoolFun, vars_: tuple[int, ...]) -> DTree:
    c = f.constant_value()
    if c is not None:
        return leaf(c)
    _, J = kill_number(f)
    qvars = [vars_[p - 1] for p in J.vars()]

    def at_leaf(path: dict) -> DTree:
        g, rest = _sub(f, vars_, path)
        return _sparsity_tree(g, rest)

    return complete_tree(qvars, at_leaf)


# -- composition -----------------------------------------------------------

def composed_tree(T_f: DTree, inner: Sequence[DTree],
                  inner_arities: Optional[Sequence[int]] = None) -> DTree:
    """Tree for f o (g_1..g_n): each query of x_i becomes a copy of g_i's tree.

    Block i of the composed function holds the variables of g_i, blocks in
    order.  Without ``inner_arities`` each block is as wide as the largest
    variable its tree queries.
    """
    if inner_arities is None:
        inner_arities = [max(tree_vars(T), default=0) for T in inner]
    if len(inner_arities) != len(inner):
        raise ValueError("need one arity per inner tree")
    used = tree_vars(T_f)
    if used and max(used) > len(inner):
        raise ValueError(f"outer tree queries x{max(used)} but only {len(inner)} inner trees given")
    for i, T in enumerate(inner):
        if isinstance(T, Leaf):
            raise ValueError(f"inner tree {i + 1} is constant")
        vs = tree_vars(T)
        if vs and max(vs) > inner_arities[i]:
            raise ValueError(f"inner tree {i + 1} queries beyond its arity")
    offsets = [0]
    for k in inner_arities:
        offsets.append(offsets[-1] + k)
    shifted = [_shift(T, offsets[i]) for i, T in enumerate(inner)]
    return _fold(T_f, lambda t: t, lambda t, lo, hi: graft(shifted[t.var - 1], lo, hi))


def _shift(T: DTree, off: int) -> DTree:
    return _fold(T, lambda t: t, lambda t, lo, hi: Query(t.var + off, lo, hi))


# -- simple <-> conjunction trees ------------------------------------------

def conj_from_simple(T: DTree) -> ConjTree:
    """Balance a simple tree of size s into a conjunction tree of depth at most 2 log_{3/2} s.

    At each step a node v with between s/3 and 2s/3 leaves below it is found
    by walking toward the larger child.  The query is membership in v's
    subcube: if it holds, continue with v's subtree, otherwise with the tree
    where v is cut out (its parent replaced by v's sibling).
    """
    if isinstance(T, Leaf):
        return T
    s = tree_size(T)
    path: list[tuple[Query, int]] = []
    node = T
    while True:
        sz = tree_size(node)
        if 3 * sz >= s and 3 * sz < 2 * s:
            break
        a, b = tree_size(node.lo), tree_size(node.hi)
        step = 0 if a >= b else 1
        path.append((node, step))
        node = node.hi if step else node.lo
    pos = neg = 0
    reachable = True
    for q, b in path:
        bit = 1 << (q.var - 1)
        if b:
            if neg & bit:
                reachable = False
            pos |= bit
        else:
            if pos & bit:
                reachable = False
            neg |= bit
    rest = _cut(path)
    if not reachable:
        return conj_from_simple(rest)
    return ConjQuery(pos, neg, conj_from_simple(rest), conj_from_simple(node))


def _cut(path: list[tuple[Query, int]]) -> DTree:
    """The tree with the node at the end of ``path`` removed (parent replaced by sibling)."""
    parent, b = path[-1]
    sub = parent.lo if b else parent.hi
    for q, step in reversed(path[:-1]):
        sub = Query(q.var, q.lo, sub) if step else Query(q.var, sub, q.hi)
    return sub


def conj_balance_bound(s: int) -> int:
    """ceil(2 log_{3/2} s), computed without floating error on exact powers."""
    if s <= 1:
        return 0
    d = 0
    # smallest d with (3/2)^d >= s^2, i.e. 3^d >= s^2 * 2^d
    while 3 ** d < s * s * 2 ** d:
        d += 1
    return d


def simple_from_conj(C: ConjTree) -> DTree:
    """Evaluate each conjunction literal by literal (ascending variable order)."""

    def node(t: ConjQuery, lo: DTree, hi: DTree) -> DTree:
        lits = [(v, 1) for v in _mask_vars(t.pos)] + [(v, 0) for v in _mask_vars(t.neg)]
        lits.sort()
        out = hi
        for v, want in reversed(lits):
            out = Query(v, out, lo) if want == 0 else Query(v, lo, out)
        return out

    return _fold(C, lambda t: t, node)


# -- exact conjunction depth (tiny arities) --------------------------------

EXACT_CONJ_CAP = 4


@lru_cache(maxsize=None)
def _conj_masks(n: int) -> tuple[int, ...]:
    """Input masks of every non-empty conjunction of literals on n variables."""
    out = []
    for support in range(1, 1 << n):
        v = 0
        while True:
            m = 0
            for x in range(1 << n):
                if x & support == v:
                    m |= 1 << x
            out.append(m)
            if v == support:
                break
            v = (v - support) & support
    return tuple(sorted(set(out)))


def exact_conj_depth(f: BoolFun) -> int:
    """Minimum depth of a conjunction-query tree computing f (arity at most 4)."""
    if f.arity > EXACT_CONJ_CAP:
        raise ValueError(f"exact conjunction depth is limited to arity {EXACT_CONJ_CAP}")
    masks = _conj_masks(f.arity)
    ones = f.table
    memo: dict[int, int] = {}

    def depth(A: int, bound: int) -> int:
        """Depth for input set A; answers >= bound may be reported as bound."""
        on = A & ones
        if on == 0 or on == A:
            return 0
        if A in memo:
            return memo[A]
        best = bound
        for m in masks:
            inside = A & m
            if inside == 0 or inside == A:
                continue
            if best <= 1:
                break
            d1 = depth(inside, best - 1)
            if 1 + d1 >= best:
                continue
            d0 = depth(A & ~m, best - 1)
            cand = 1 + max(d0, d1)
            if cand < best:
                best = cand
        if best < bound:
            memo[A] = best
        return best

    return depth(bits.full_mask(f.arity), f.arity + 1)
