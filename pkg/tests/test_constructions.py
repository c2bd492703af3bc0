from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from dtrank import constructions as C
from dtrank import measures as M
from dtrank.boolfun import AND, OR, PARITY, BoolFun, all_functions, compose
from dtrank.dtree import (
    LEAF0, LEAF1, ConjQuery, Leaf, Query, complete_tree, computes, conj_computes, conj_depth, leaf,
    same_tree, tree_depth, tree_rank,
)

arity4 = st.integers(0, (1 << 16) - 1).map(lambda t: BoolFun(4, t))


def test_cert_tree_examples():
    T = C.cert_tree(OR(3))
    assert computes(T, OR(3)) and tree_rank(T) == 1
    assert isinstance(C.cert_tree(BoolFun(2, 15)), Leaf)


def test_sparsity_tree_examples():
    T = C.sparsity_tree(PARITY(3))
    assert computes(T, PARITY(3)) and tree_depth(T) == 3
    assert C.sparsity_tree(BoolFun(3, 0)) == LEAF0


@settings(max_examples=150, deadline=None)
@given(arity4)
def test_cert_and_sparsity_bounds(f):
    c = M.cert_summary(f)
    T = C.cert_tree(f)
    assert computes(T, f)
    if not f.is_constant():
        assert tree_rank(T) <= (c["cert0"] - 1) * (c["cert1"] - 1) + 1
    S = C.sparsity_tree(f)
    from dtrank.fourier import spar
    assert computes(S, f)
    assert tree_depth(S) <= M.values(f)[0] * (1 + math.log2(spar(f))) + 1e-9


def test_composed_tree_examples():
    Tf = M.opt_rank(AND(3))[1]
    Tg = M.opt_rank(OR(3))[1]
    T = C.composed_tree(Tf, [Tg] * 3, [3] * 3)
    h = compose(AND(3), [OR(3)] * 3)
    assert computes(T, h) and tree_rank(T) <= 3
    assert M.values(h)[0] == 3

    Tf = M.opt_rank(AND(2))[1]
    Tp = M.opt_rank(PARITY(2))[1]
    h = compose(AND(2), [PARITY(2)] * 2)
    T = C.composed_tree(Tf, [Tp] * 2, [2, 2])
    assert computes(T, h) and tree_rank(T) <= 4
    assert M.values(h)[0] == 3


def test_composed_tree_with_rank_one_inner_trees():
    Tf = M.opt_depth(PARITY(3))[1]
    inner = [M.opt_rank(AND(2))[1]] * 3
    T = C.composed_tree(Tf, inner, [2] * 3)
    assert computes(T, compose(PARITY(3), [AND(2)] * 3))
    assert tree_rank(T) <= tree_depth(Tf)


def test_composed_tree_rejects_bad_input():
    with pytest.raises(ValueError):
        C.composed_tree(Query(1, LEAF0, LEAF1), [LEAF1], [1])
    with pytest.raises(ValueError):
        C.composed_tree(Query(2, LEAF0, LEAF1), [Query(1, LEAF0, LEAF1)], [1])


def test_conj_balance_bound_values():
    assert C.conj_balance_bound(1) == 0
    assert C.conj_balance_bound(8) == 11
    for s in range(2, 200):
        d = C.conj_balance_bound(s)
        assert 1.5 ** d >= s * s and 1.5 ** (d - 1) < s * s


def test_conj_from_simple_examples():
    for n in range(1, 7):
        chain = M.opt_size(AND(n))[1]
        Cj = C.conj_from_simple(chain)
        assert conj_computes(Cj, AND(n))
        assert conj_depth(Cj) <= C.conj_balance_bound(n + 1)
    par = complete_tree([1, 2, 3], lambda p: leaf(sum(p.values()) % 2))
    Cj = C.conj_from_simple(par)
    assert conj_computes(Cj, PARITY(3)) and conj_depth(Cj) <= 11
    assert C.conj_from_simple(LEAF1) == LEAF1


@settings(max_examples=150, deadline=None)
@given(arity4)
def test_conj_roundtrip_bounds(f):
    s, T = M.opt_size(f)
    Cj = C.conj_from_simple(T)
    assert conj_computes(Cj, f)
    assert conj_depth(Cj) <= C.conj_balance_bound(s)
    back = C.simple_from_conj(Cj)
    assert computes(back, f) and tree_rank(back) <= conj_depth(Cj)


def test_simple_from_conj_examples():
    T = C.simple_from_conj(ConjQuery(0b1111, 0, LEAF0, LEAF1))
    assert computes(T, AND(4)) and tree_rank(T) == 1
    simple = Query(1, Query(2, LEAF0, LEAF1), LEAF1)
    as_conj = ConjQuery(0b1, 0, ConjQuery(0b10, 0, LEAF0, LEAF1), LEAF1)
    assert same_tree(C.simple_from_conj(as_conj), simple)


def test_exact_conj_depth():
    assert C.exact_conj_depth(AND(4)) == 1
    assert C.exact_conj_depth(PARITY(3)) == 3
    with pytest.raises(ValueError):
        C.exact_conj_depth(BoolFun(5, 0))


def test_exact_conj_depth_sandwich_arity3():
    literal_failures = 0
    for f in all_functions(3):
        r, _, s = M.values(f)
        e = C.exact_conj_depth(f)
        assert r <= e <= C.conj_balance_bound(s)
        literal_failures += (1 << e) > s
    # the plain log2-size form fails on a handful of arity-3 functions, e.g. table 0x61
    assert literal_failures == 16
    assert C.exact_conj_depth(BoolFun(3, 0x61)) == 3 and M.values(BoolFun(3, 0x61))[2] == 7
