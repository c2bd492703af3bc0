from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from dtrank import bits
from dtrank.boolfun import (
    AND, MAJ, MAJ_OR_PARITY, OR, PARITY, THR, TRIBES, TRIBES_D, ArityError, BoolFun, ParseError,
    Subcube, all_functions, compose, dual, dumps_tt, evaluate, from_profile, hex_to_table, iterate,
    loads_tt, negate, parse_expr, restrict, symmetric_profile, table_to_hex,
)


def tables(max_n=5):
    return st.integers(0, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1)))


def test_evaluate_examples():
    assert evaluate(AND(2), (1, 1)) == 1
    assert evaluate(PARITY(3), (1, 1, 0)) == 0
    assert evaluate(TRIBES_D(2, 2), (1, 0, 0, 1)) == 1
    assert evaluate(AND(2), 3) == 1


def test_evaluate_rejects_wrong_width():
    with pytest.raises(ArityError):
        evaluate(AND(2), (1, 1, 1))
    with pytest.raises(ArityError):
        evaluate(AND(2), 4)


def test_restrict_examples():
    g = restrict(AND(3), Subcube.from_assignment({1: 0}))
    assert g.arity == 2 and g.table == 0
    assert restrict(PARITY(3), Subcube.from_assignment({2: 1})) == negate(PARITY(2))
    assert restrict(MAJ(3), Subcube.from_assignment({1: 1})) == OR(2)


@given(tables(4), st.data())
def test_restrict_matches_pointwise(nt, data):
    n, t = nt
    f = BoolFun(n, t)
    support = data.draw(st.integers(0, (1 << n) - 1))
    values = data.draw(st.integers(0, (1 << n) - 1)) & support
    g = restrict(f, Subcube(support, values))
    free = [i for i in range(n) if not support >> i & 1]
    for y in range(1 << len(free)):
        x = values
        for j, i in enumerate(free):
            if y >> j & 1:
                x |= 1 << i
        assert g(y) == f(x)


def test_compose_examples():
    assert compose(AND(2), [OR(2), OR(2)]) == TRIBES_D(2, 2)
    ident = BoolFun(1, 0b10)
    assert compose(MAJ(3), [ident] * 3) == MAJ(3)
    assert compose(MAJ(3), [MAJ(3)] * 3).arity == 9


def test_iterate_examples():
    assert iterate(MAJ(3), 1) == MAJ(3)
    assert iterate(compose(AND(2), [OR(2), OR(2)]), 2).arity == 16
    assert iterate(PARITY(2), 2) == PARITY(4)


def test_negate_dual():
    for n in range(1, 6):
        assert dual(AND(n)) == OR(n)
    for n, m in [(2, 2), (2, 3), (3, 2)]:
        assert dual(TRIBES(n, m)) == TRIBES_D(n, m)


@given(tables())
def test_negate_and_dual_are_involutions(nt):
    f = BoolFun(*nt)
    assert negate(negate(f)) == f
    assert dual(dual(f)) == f


def test_symmetric_profile():
    assert symmetric_profile(MAJ(3)) == (0, 0, 1, 1)
    assert symmetric_profile(TRIBES_D(2, 2)) is None
    assert symmetric_profile(THR(2, 3)) == (0, 0, 1, 1)
    assert from_profile([0, 1, 0, 1]) == PARITY(3)


def test_catalog_tables():
    # enumerated under the documented bit order: bit x holds f(x), x_1 is the low bit
    assert TRIBES_D(2, 2).table == 0xEEE0
    assert TRIBES_D(2, 2).hex() == "0eee"
    assert parse_expr("THR:2:3") == parse_expr("MAJ:3")
    assert parse_expr("ITER(MAJ:3,2)").arity == 9
    assert MAJ(4) == THR(3, 4)
    assert MAJ_OR_PARITY(6).table == THR(4, 6).table | PARITY(6).table


def test_parse_forms():
    assert parse_expr("NOT(AND:3)") == negate(AND(3))
    assert parse_expr("DUAL(TRIBES:2x3)") == TRIBES_D(2, 3)
    assert parse_expr("COMPOSE(AND:2;PARITY:2)") == parse_expr("COMPOSE(AND:2;PARITY:2,PARITY:2)")
    assert parse_expr("TT:0eee:4") == TRIBES_D(2, 2)


@pytest.mark.parametrize("text", ["AND:", "FOO:3", "COMPOSE(AND:2;", "TT:zz:2", "AND:3)"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ValueError)):
        parse_expr(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_expr("AND:")
    assert info.value.pos == 4


@given(tables(6))
def test_hex_roundtrip(nt):
    n, t = nt
    assert hex_to_table(table_to_hex(t, n), n) == t
    f = BoolFun(n, t)
    assert loads_tt(dumps_tt(f)) == f


def test_all_functions_counts():
    assert sum(1 for _ in all_functions(2)) == 16
    assert len({f.table for f in all_functions(3)}) == 256


@given(tables(5))
def test_strip_keeps_exactly_the_relevant_variables(nt):
    n, t = nt
    k, s, kept = bits.strip(t, n)
    assert kept == tuple(i for i in range(n) if bits.depends_on(t, n, i))
    assert k == len(kept)
    assert all(bits.depends_on(s, k, i) for i in range(k))
