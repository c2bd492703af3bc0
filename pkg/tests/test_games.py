from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dtrank import games as G
from dtrank import measures as M
from dtrank.boolfun import AND, OR, PARITY, TRIBES, TRIBES_D, BoolFun, all_functions, parse_expr


def test_game_values():
    assert G.game_value(PARITY(3)) == 3
    assert G.game_value(AND(5)) == 1
    for f in all_functions(3):
        assert G.game_value(f) == M.values(f)[0]


def test_asym_values():
    assert G.asym_game_value(OR(2)) == 3
    assert G.asym_game_value(BoolFun(2, 0)) == 1
    for n in range(1, 6):
        assert G.asym_game_value(PARITY(n)) == 2 ** n


@settings(max_examples=80, deadline=None)
@given(st.integers(0, (1 << 16) - 1))
def test_optimal_strategies_meet_rank_and_size(t):
    f = BoolFun(4, t)
    r, _, s = M.values(f)
    assert G.play(f, G.OptimalProver(f), G.OptimalDelayer()).score == r
    assert G.best_delayer_score(f, G.OptimalProver(f)) == r
    assert G.best_prover_score(f, G.OptimalDelayer()) == r
    a = G.play(f, G.OptimalAsymProver(), G.OptimalAsymDelayer(), asym=True)
    assert a.score == s
    assert math.log2(s) + 1e-9 >= r


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("make", [TRIBES, TRIBES_D])
def test_tribes_strategies_pin_score(n, make):
    f = make(n, n)
    assert G.best_delayer_score(f, G.make_prover("tribes-rowmajor", f)) == n
    assert G.best_prover_score(f, G.make_delayer("tribes", f)) == n


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3)])
def test_andparity_strategies_pin_score(n, m):
    f = parse_expr(f"COMPOSE(AND:{n};PARITY:{m})")
    want = n * (m - 1) + 1
    assert G.best_delayer_score(f, G.make_prover("andparity", f)) == want
    assert G.best_prover_score(f, G.make_delayer("andparity", f)) == want


def test_tribes_transcript_example():
    f = TRIBES(3, 3)
    t = G.play(f, G.make_prover("tribes-rowmajor", f), G.make_delayer("optimal", f))
    assert t.score == 3
    assert t.final_value in (0, 1)


def test_cert_prover_bound_sample():
    for t in range(0, 1 << 16, 997):
        f = BoolFun(4, t)
        if f.is_constant():
            continue
        c = M.cert_summary(f)
        assert G.best_delayer_score(f, G.CertProver()) <= (c["cert0"] - 1) * (c["cert1"] - 1) + 1


def test_compose_strategies_on_iterated_majority():
    f = parse_expr("ITER(MAJ:3,2)")
    r = M.values(f)[0]
    assert r == 5
    assert G.best_delayer_score(f, G.make_prover("compose", f)) <= r
    assert G.best_prover_score(f, G.make_delayer("compose", f)) >= r


def test_asym_tribes_delayer():
    f = TRIBES_D(3, 3)
    score = G.best_asym_prover_score(f, G.make_delayer("asym-tribes", f))
    assert score == 27
    assert math.log2(score) >= 3 * math.log2(3) - 1e-9


def test_strategy_fault_names_offender():
    class Stubborn:
        name = "stubborn"

        def next_query(self, state):
            return 1

        def choose(self, state, var):
            return 0

    with pytest.raises(G.StrategyFault) as info:
        G.play(AND(3), Stubborn(), G.OptimalDelayer())
    assert "stubborn" in str(info.value)


def test_bad_probabilities_rejected():
    class Greedy:
        def probabilities(self, state, var):
            return (Fraction(1, 2), Fraction(2, 3))

    with pytest.raises(G.StrategyFault):
        G.play(AND(2), G.OptimalAsymProver(), Greedy(), asym=True)


def test_registry_errors_list_names():
    with pytest.raises(KeyError) as info:
        G.make_prover("nope", AND(2))
    assert "optimal" in str(info.value)
    with pytest.raises(ValueError):
        G.make_prover("tribes-rowmajor", AND(2))


def test_transcript_json_and_replay_determinism():
    f = parse_expr("MAJ:5")
    a = G.play(f, G.OptimalProver(f), G.OptimalDelayer())
    b = G.play(f, G.OptimalProver(f), G.OptimalDelayer())
    assert a.to_json() == b.to_json()
    d = json.loads(a.to_json())
    assert d["score"] == M.values(f)[0] and len(d["rounds"]) == len(a.rounds)
    t = G.play(TRIBES_D(2, 2), G.OptimalAsymProver(), G.OptimalAsymDelayer(), asym=True)
    assert json.loads(t.to_json())["score"] in ("7/1", "7")
    assert "score" in t.pretty()
