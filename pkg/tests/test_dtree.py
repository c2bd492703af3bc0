from __future__ import annotations

import json
import math

from hypothesis import given, strategies as st

from dtrank.boolfun import AND, PARITY, BoolFun
from dtrank.dtree import (
    LEAF0, LEAF1, ConjQuery, Query, and_or_eval, and_or_from_conj, complete_tree, computes,
    conj_computes, conj_depth, conj_eval, conj_from_and_or, dumps, eval_tree, from_json, graft,
    has_redundant_query, is_reduced, leaf, leaf_counts, rank_size_chain_holds, to_dot, to_json,
    tree_depth, tree_rank, tree_size, tree_table, tree_weighted_depth,
)


def parity_tree(n):
    return complete_tree(list(range(1, n + 1)), lambda path: leaf(sum(path.values()) % 2))


def caterpillar(n):
    T = LEAF1
    for v in range(n, 0, -1):
        T = Query(v, T, LEAF1) if v % 2 else Query(v, LEAF0, T)
    return T


@st.composite
def trees(draw, n=4, depth=4):
    if depth == 0 or draw(st.booleans()):
        return leaf(draw(st.integers(0, 1)))
    return Query(draw(st.integers(1, n)), draw(trees(n, depth - 1)), draw(trees(n, depth - 1)))


def test_rank_examples():
    assert tree_rank(LEAF0) == 0
    for d in range(5):
        assert tree_rank(parity_tree(d)) == d
    assert tree_rank(caterpillar(5)) == 1


def test_depth_size_examples():
    assert tree_depth(LEAF1) == 0 and tree_size(LEAF1) == 1
    assert tree_size(parity_tree(3)) == 8
    assert leaf_counts(parity_tree(3)) == (4, 4)


@given(trees())
def test_rank_log_size_depth_chain(T):
    assert rank_size_chain_holds(T)
    assert 2 ** tree_rank(T) <= tree_size(T) <= 2 ** tree_depth(T)


@given(trees())
def test_some_child_has_smaller_rank(T):
    def walk(t):
        if isinstance(t, Query):
            assert min(tree_rank(t.lo), tree_rank(t.hi)) < tree_rank(t)
            walk(t.lo)
            walk(t.hi)
    walk(T)


def test_weighted_depth():
    T = parity_tree(3)
    assert tree_weighted_depth(T, [1, 1, 1]) == tree_depth(T)
    assert tree_weighted_depth(LEAF0, [5]) == 0
    assert tree_weighted_depth(T, [2, 3, 4]) == 9


def test_computes_and_lint():
    ident = Query(1, LEAF0, LEAF1)
    assert computes(ident, BoolFun(1, 0b10))
    assert computes(parity_tree(3), PARITY(3))
    wasteful = Query(1, Query(2, LEAF0, LEAF0), LEAF1)
    assert computes(wasteful, BoolFun(2, 0b1010))
    assert has_redundant_query(wasteful)
    assert is_reduced(wasteful)
    assert not is_reduced(Query(1, Query(1, LEAF0, LEAF1), LEAF1))
    assert is_reduced(parity_tree(3))


def test_graft_ranks():
    pair = Query(3, LEAF0, LEAF1)
    T = graft(parity_tree(2), pair, pair)
    assert tree_rank(T) == 3
    assert tree_rank(graft(parity_tree(2), LEAF0, LEAF1)) == 2


@given(trees(n=3), trees(n=3), trees(n=3))
def test_graft_upper_bound(T, T0, T1):
    r = tree_rank(graft(T, T0, T1))
    assert r <= tree_rank(T) + max(tree_rank(T0), tree_rank(T1))


def test_conjunction_trees():
    C = ConjQuery(0b111, 0, LEAF0, LEAF1)
    assert conj_computes(C, AND(3)) and conj_depth(C) == 1
    single = ConjQuery(0b10, 0, LEAF0, LEAF1)
    assert all(conj_eval(single, x) == eval_tree(Query(2, LEAF0, LEAF1), x) for x in range(4))
    neg = ConjQuery(0b01, 0b10, LEAF0, LEAF1)
    assert [conj_eval(neg, x) for x in range(4)] == [0, 1, 0, 0]


def test_and_or_roundtrip():
    C = ConjQuery(0b011, 0b100, ConjQuery(0b100, 0, LEAF0, LEAF1), LEAF1)
    A = and_or_from_conj(C)
    back = conj_from_and_or(A)
    for x in range(8):
        assert and_or_eval(A, x) == conj_eval(C, x) == conj_eval(back, x)


@given(trees())
def test_json_roundtrip(T):
    assert tree_table(from_json(json.loads(dumps(T))), 4) == tree_table(T, 4)
    assert to_json(from_json(to_json(T))) == to_json(T)


def test_conj_json_roundtrip():
    C = ConjQuery(0b011, 0b100, LEAF0, LEAF1)
    assert to_json(from_json(to_json(C))) == {"pos": [1, 2], "neg": [3], "lo": {"leaf": 0}, "hi": {"leaf": 1}}


def test_dot_is_stable():
    T = parity_tree(2)
    a, b = to_dot(T), to_dot(parity_tree(2))
    assert a == b
    assert a.startswith("digraph T {") and a.rstrip().endswith("}")
    assert a.count("->") == 2 * 3


def test_log_chain_on_parity():
    T = parity_tree(4)
    assert tree_rank(T) == math.log2(tree_size(T)) == tree_depth(T)
