from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from dtrank import fourier as F
from dtrank.boolfun import AND, PARITY, BoolFun, all_functions, negate


def naive_coeff(f: BoolFun, S: int) -> int:
    return sum((-1) ** (f(x) + bin(x & S).count("1")) for x in range(1 << f.arity))


tables = st.integers(0, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1)))


def test_parity_and_constant_spectra():
    for n in range(1, 7):
        sp = F.wht(PARITY(n))
        assert sp.nonzero() == {(1 << n) - 1: 2 ** n}
        assert F.spar(PARITY(n)) == 1 and F.spar_tilde(PARITY(n)) == 1
    z = F.wht(BoolFun(3, 0))
    assert z.nonzero() == {0: 8}
    assert F.spar(BoolFun(3, 0)) == 1 and F.spar_tilde(BoolFun(3, 0)) == 0


def test_and2_spectrum():
    sp = F.wht(AND(2))
    assert [sp[S] for S in range(4)] == [2, 2, 2, -2]
    assert F.spar(AND(2)) == 4


@given(tables)
def test_butterfly_matches_naive_sum(nt):
    f = BoolFun(*nt)
    sp = F.wht(f)
    assert all(sp[S] == naive_coeff(f, S) for S in range(1 << f.arity))
    assert sp.parseval_ok()


@given(tables)
def test_inverse_and_json(nt):
    f = BoolFun(*nt)
    sp = F.wht(f)
    assert F.inverse_wht(sp) == f
    assert F.Spectrum.from_json(sp.to_json()) == sp


@given(tables)
def test_sparsity_relations(nt):
    f = BoolFun(*nt)
    st_, sp = F.spar_tilde(f), F.spar(f)
    assert st_ <= sp <= st_ + 1
    assert (st_ == 0) == f.is_constant()
    assert F.spar(negate(f)) == sp


def test_halving_examples():
    assert F.halving_check(PARITY(2), 0b11)
    assert F.halving_check(AND(2), 0b01)
    with pytest.raises(ValueError):
        F.halving_check(AND(2), 0)


def test_halving_exhaustive_arity3():
    for f in all_functions(3):
        assert F.halving_failures(f) == []
        assert all(F.halving_check(f, S) for S in range(1, 8))
