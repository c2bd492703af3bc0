"""Prover-Delayer games on Boolean functions.

In each round the Prover queries a free variable.  In the symmetric game the
Delayer answers 0, 1 or defers; a deferral scores one point and lets the
Prover pick the bit.  In the asymmetric game the Delayer announces
probabilities (p0, p1), the Prover picks the bit b and the Delayer scores
log2(1/p_b).  A game ends once the function restricted to the assignment is
constant.

Strategies are objects whose decisions depend only on the current
:class:`GameState`.  Strategies whose decisions depend on the assignment alone
(not on the order of past rounds) set ``history_free = True``, which lets the
best-response searches share work between transpositions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from . import bits
from .boolfun import BoolFun, Subcube, restrict
from .dtree import DTree, Leaf, tree_rank
from .measures import _SHARED, check_cap, cert_profile, min_certificate, opt_depth, opt_rank, values

DEFER = "defer"
Response = Union[int, str]

_shared_memo = _SHARED


class StrategyFault(RuntimeError):
    """A strategy made an illegal move."""

    def __init__(self, who: str, message: str):
        super().__init__(f"{who}: {message}")
        self.who = who


# -- state -----------------------------------------------------------------

@dataclass(frozen=True)
class Round:
    var: int
    response: object
    chosen: int
    points: object

    def to_json(self):
        resp = self.response
        if isinstance(resp, tuple):
            resp = [_frac(p) for p in resp]
        pts = self.points
        if isinstance(pts, Fraction):
            pts = _frac(pts)
        elif pts == math.inf:
            pts = "inf"
        return {"var": self.var, "response": resp, "chosen": self.chosen, "points": pts}


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GameState:
    """The original function, the assignment so far and the rounds played."""

    f: BoolFun
    assignment: Subcube = field(default_factory=Subcube)
    history: tuple = ()

    @property
    def restricted(self) -> BoolFun:
        return _restricted(self.f, self.assignment)

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.f.arity + 1) if not self.assignment.support >> (v - 1) & 1)

    def over(self) -> bool:
        return self.restricted.is_constant()

    def is_free(self, var: int) -> bool:
        return 1 <= var <= self.f.arity and not self.assignment.support >> (var - 1) & 1

    def value(self, var: int) -> Optional[int]:
        return self.assignment.value(var)

    def after(self, rnd: Round) -> "GameState":
        return GameState(self.f, self.assignment.with_var(rnd.var, rnd.chosen), self.history + (rnd,))

    def fixed(self, var: int, b: int) -> BoolFun:
        """Restriction after additionally setting ``var`` to ``b``."""
        return _restricted(self.f, self.assignment.with_var(var, b))

    @property
    def score(self):
        pts = [r.points for r in self.history]
        if any(isinstance(p, Fraction) or p == math.inf for p in pts):
            prod = Fraction(1)
            for p in pts:
                if p == math.inf:
                    return math.inf
                prod *= p
            return prod
        return sum(pts)


@lru_cache(maxsize=1 << 18)
def _restricted(f: BoolFun, J: Subcube) -> BoolFun:
    return restrict(f, J)


def _rank(g: BoolFun) -> int:
    return values(g, _shared_memo)[0]


def _size(g: BoolFun) -> int:
    return values(g, _shared_memo)[2]


# -- exact game values -----------------------------------------------------

@lru_cache(maxsize=1 << 20)
def _value(n: int, t: int) -> int:
    if bits.is_constant(t, n):
        return 0
    best = n
    for i in range(n):
        v0 = _value(n - 1, bits.cofactor(t, n, i, 0))
        v1 = _value(n - 1, bits.cofactor(t, n, i, 1))
        best = min(best, max(v0, v1, 1 + min(v0, v1)))
    return best


def game_value(f: BoolFun) -> int:
    """Points the Delayer can guarantee in the symmetric game, by direct minimax."""
    check_cap(f)
    return _value(f.arity, f.table)


@lru_cache(maxsize=1 << 20)
def _asym_size(n: int, t: int) -> int:
    if bits.is_constant(t, n):
        return 1
    best = 1 << n
    for i in range(n):
        s = _asym_size(n - 1, bits.cofactor(t, n, i, 0)) + _asym_size(n - 1, bits.cofactor(t, n, i, 1))
        best = min(best, s)
    return best


def asym_game_value(f: BoolFun) -> int:
    """The integer s with asymmetric game value log2(s).

    With optimal play the value of a position is the log of 2^V0 + 2^V1 for
    the best query, so 2^value obeys the same recursion as tree size.
    """
    check_cap(f)
    return _asym_size(f.arity, f.table)


# -- play ------------------------------------------------------------------

@dataclass
class Transcript:
    rounds: list
    asym: bool
    final_value: int

    @property
    def score(self):
        if not self.asym:
            return sum(r.points for r in self.rounds)
        prod = Fraction(1)
        for r in self.rounds:
            if r.points == math.inf:
                return math.inf
            prod *= r.points
        return prod

    @property
    def log2_score(self) -> float:
        s = self.score
        if not self.asym:
            return float(s)
        return math.inf if s == math.inf else math.log2(s)

    def to_dict(self) -> dict:
        s = self.score
        if self.asym:
            s = "inf" if s == math.inf else _frac(s)
        return {"asym": self.asym, "rounds": [r.to_json() for r in self.rounds],
                "score": s, "log2_score": None if self.log2_score == math.inf else self.log2_score,
                "final_value": self.final_value}

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def pretty(self) -> str:
        lines = []
        for k, r in enumerate(self.rounds, 1):
            resp = r.response
            if isinstance(resp, tuple):
                resp = f"p0={_frac(resp[0])} p1={_frac(resp[1])}"
            pts = r.points
            if isinstance(pts, Fraction):
                pts = f"x{_frac(pts)}"
            lines.append(f"{k:3d}. x{r.var}: {resp} -> {r.chosen} ({pts})")
        if self.asym:
            s = self.score
            shown = "inf" if s == math.inf else f"{_frac(s)} (log2 = {self.log2_score:.6f})"
            lines.append(f"score: {shown}")
        else:
            lines.append(f"score: {self.score}")
        lines.append(f"value: {self.final_value}")
        return "\n".join(lines)


def _check_probs(p, who: str) -> tuple[Fraction, Fraction]:
    try:
        p0, p1 = (Fraction(x) for x in p)
    except (TypeError, ValueError):
        raise StrategyFault(who, f"response {p!r} is not a probability pair")
    if p0 < 0 or p1 < 0 or p0 + p1 != 1:
        raise StrategyFault(who, f"probabilities {p0}, {p1} must be non-negative and sum to 1")
    return p0, p1


def _legal_query(state: GameState, prover) -> int:
    var = prover.next_query(state)
    if not isinstance(var, int) or not state.is_free(var):
        raise StrategyFault(_name(prover), f"queried x{var}, which is not a free variable")
    return var


def _name(s) -> str:
    return getattr(s, "name", type(s).__name__)


def step(state: GameState, prover, delayer, asym: bool = False) -> Round:
    """Play one round from ``state``."""
    var = _legal_query(state, prover)
    if asym:
        p0, p1 = _check_probs(delayer.probabilities(state, var), _name(delayer))
        b = prover.choose(state, var, (p0, p1))
        if b not in (0, 1):
            raise StrategyFault(_name(prover), f"chose {b!r}")
        pb = p1 if b else p0
        return Round(var, (p0, p1), b, math.inf if pb == 0 else 1 / pb)
    resp = delayer.respond(state, var)
    if resp == DEFER:
        b = prover.choose(state, var)
        if b not in (0, 1):
            raise StrategyFault(_name(prover), f"chose {b!r}")
        return Round(var, DEFER, b, 1)
    if resp not in (0, 1):
        raise StrategyFault(_name(delayer), f"answered {resp!r}")
    return Round(var, resp, resp, 0)


def play(f: BoolFun, prover, delayer, asym: bool = False) -> Transcript:
    state = GameState(f)
    rounds = []
    while not state.over():
        rnd = step(state, prover, delayer, asym)
        rounds.append(rnd)
        state = state.after(rnd)
    return Transcript(rounds, asym, state.restricted.constant_value())


# -- best responses --------------------------------------------------------

def best_delayer_score(f: BoolFun, prover) -> int:
    """Highest score any Delayer reaches against ``prover`` (exhaustive search)."""
    memo: dict = {}
    free_hist = getattr(prover, "history_free", False)

    def go(state: GameState) -> int:
        if state.over():
            return 0
        key = state.assignment if free_hist else state.history
        if key in memo:
            return memo[key]
        var = _legal_query(state, prover)
        best = -1
        for b in (0, 1):
            best = max(best, go(state.after(Round(var, b, b, 0))))
        c = prover.choose(state, var)
        if c not in (0, 1):
            raise StrategyFault(_name(prover), f"chose {c!r}")
        best = max(best, 1 + go(state.after(Round(var, DEFER, c, 1))))
        memo[key] = best
        return best

    return go(GameState(f))


def best_prover_score(f: BoolFun, delayer) -> int:
    """Lowest score any Prover holds ``delayer`` to (exhaustive search)."""
    memo: dict = {}
    free_hist = getattr(delayer, "history_free", False)

    def go(state: GameState) -> int:
        if state.over():
            return 0
        key = state.assignment if free_hist else state.history
        if key in memo:
            return memo[key]
        best = None
        for var in state.free:
            resp = delayer.respond(state, var)
            if resp == DEFER:
                s = 1 + min(go(state.after(Round(var, DEFER, c, 1))) for c in (0, 1))
            elif resp in (0, 1):
                s = go(state.after(Round(var, resp, resp, 0)))
            else:
                raise StrategyFault(_name(delayer), f"answered {resp!r}")
            if best is None or s < best:
                best = s
        memo[key] = best
        return best

    return go(GameState(f))


def best_asym_prover_score(f: BoolFun, delayer):
    """Smallest product of 1/p_b any Prover holds the asymmetric ``delayer`` to.

    Returns a Fraction, or ``math.inf`` if every line of play is infinite.
    """
    memo: dict = {}
    free_hist = getattr(delayer, "history_free", False)

    def go(state: GameState):
        if state.over():
            return Fraction(1)
        key = state.assignment if free_hist else state.history
        if key in memo:
            return memo[key]
        best = math.inf
        for var in state.free:
            p = _check_probs(delayer.probabilities(state, var), _name(delayer))
            for b in (0, 1):
                if p[b] == 0:
                    continue
                sub = go(state.after(Round(var, p, b, 1 / p[b])))
                if sub != math.inf:
                    best = min(best, sub / p[b])
        memo[key] = best
        return best

    return go(GameState(f))


def best_asym_delayer_score(f: BoolFun, prover, delayer):
    """Score of ``delayer`` against ``prover`` (both fixed); convenience for tests."""
    return play(f, prover, delayer, asym=True).score


# -- optimal strategies ----------------------------------------------------

class TreeProver:
    """Walk a decision tree; on a deferral take the child of smaller rank (ties to 0)."""

    history_free = True
    name = "tree"

    def __init__(self, tree: DTree):
        self.tree = tree
        self._ranks: dict = {}

    def _node(self, state: GameState):
        t = self.tree
        while not isinstance(t, Leaf):
            b = state.value(t.var)
            if b is None:
                return t
            t = t.hi if b else t.lo
        return None

    def next_query(self, state: GameState) -> int:
        node = self._node(state)
        if node is None:
            raise StrategyFault(self.name, "tree reached a leaf before the game ended")
        return node.var

    def _rank(self, t) -> int:
        k = id(t)
        if k not in self._ranks:
            self._ranks[k] = tree_rank(t)
        return self._ranks[k]

    def choose(self, state: GameState, var: int) -> int:
        node = self._node(state)
        return 1 if self._rank(node.hi) < self._rank(node.lo) else 0


class OptimalProver(TreeProver):
    """Tree-based prover using a rank-optimal tree."""

    name = "optimal"

    def __init__(self, f: BoolFun):
        super().__init__(opt_rank(f)[1])


class OptimalDelayer:
    """Answer the side whose restriction has strictly larger rank; defer on equal ranks."""

    history_free = True
    name = "optimal"

    def respond(self, state: GameState, var: int) -> Response:
        r0 = _rank(state.fixed(var, 0))
        r1 = _rank(state.fixed(var, 1))
        if r0 == r1:
            return DEFER
        return 0 if r0 > r1 else 1


class OptimalAsymProver:
    """Query a size-optimal root variable; pick the bit minimising size(restriction)/p_b."""

    history_free = True
    name = "asym-optimal"

    def next_query(self, state: GameState) -> int:
        best = None
        for v in state.free:
            s = _size(state.fixed(v, 0)) + _size(state.fixed(v, 1))
            if best is None or s < best[0]:
                best = (s, v)
        return best[1]

    def choose(self, state: GameState, var: int, p) -> int:
        s0 = _size(state.fixed(var, 0))
        s1 = _size(state.fixed(var, 1))
        if p[0] == 0:
            return 1
        if p[1] == 0:
            return 0
        return 1 if s1 * p[0] < s0 * p[1] else 0


class OptimalAsymDelayer:
    """p_b proportional to the optimal tree size of the restriction x_var = b."""

    history_free = True
    name = "asym-optimal"

    def probabilities(self, state: GameState, var: int):
        s0 = _size(state.fixed(var, 0))
        s1 = _size(state.fixed(var, 1))
        return Fraction(s0, s0 + s1), Fraction(s1, s0 + s1)


# -- Tribes ----------------------------------------------------------------

def _rows(n: int, m: int) -> list[list[int]]:
    return [list(range(i * m + 1, (i + 1) * m + 1)) for i in range(n)]


class TribesProver:
    """Row-major prover for Tribes.

    For the AND-of-ORs form a row is settled once it holds a 1 and deferrals
    are answered with 1; for the OR-of-ANDs form the roles of 0 and 1 swap.
    """

    history_free = True
    name = "tribes-rowmajor"

    def __init__(self, n: int, m: int, dual: bool):
        self.rows = _rows(n, m)
        self.settle = 1 if dual else 0

    def next_query(self, state: GameState) -> int:
        for row in self.rows:
            if any(state.value(v) == self.settle for v in row):
                continue
            for v in row:
                if state.is_free(v):
                    return v
        raise StrategyFault(self.name, "no row left to work on")

    def choose(self, state: GameState, var: int) -> int:
        return self.settle


class TribesDelayer:
    """Defer unless the queried variable is the last free one in its row; then answer the settling bit."""

    history_free = True
    name = "tribes"

    def __init__(self, n: int, m: int, dual: bool):
        self.m = m
        self.settle = 1 if dual else 0

    def respond(self, state: GameState, var: int) -> Response:
        row = (var - 1) // self.m
        others = [v for v in range(row * self.m + 1, (row + 1) * self.m + 1) if v != var]
        if all(not state.is_free(v) for v in others):
            return self.settle
        return DEFER


class AsymTribesDelayer:
    """On a query in a row with k free variables announce probability 1/k for the settling bit."""

    history_free = True
    name = "asym-tribes"

    def __init__(self, n: int, m: int, dual: bool = True):
        self.m = m
        self.settle = 1 if dual else 0

    def probabilities(self, state: GameState, var: int):
        row = (var - 1) // self.m
        k = sum(1 for v in range(row * self.m + 1, (row + 1) * self.m + 1) if state.is_free(v))
        p_settle = Fraction(1, k)
        return (1 - p_settle, p_settle) if self.settle == 1 else (p_settle, 1 - p_settle)


# -- AND of PARITY ---------------------------------------------------------

class AndParityProver:
    """Row-major; a deferral on a row's last variable makes that row's parity 0, else choose 0."""

    history_free = True
    name = "andparity"

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m

    def next_query(self, state: GameState) -> int:
        for v in range(1, self.n * self.m + 1):
            if state.is_free(v):
                return v
        raise StrategyFault(self.name, "no free variable")

    def choose(self, state: GameState, var: int) -> int:
        row = (var - 1) // self.m
        vs = range(row * self.m + 1, (row + 1) * self.m + 1)
        if var != vs[-1]:
            return 0
        par = 0
        for v in vs:
            if v != var:
                par ^= state.value(v) or 0
        return par


class AndParityDelayer:
    """Defer while the row has other free variables (or on the very last query); else make the row odd."""

    history_free = True
    name = "andparity"

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m

    def respond(self, state: GameState, var: int) -> Response:
        free = state.free
        if free == (var,):
            return DEFER
        row = (var - 1) // self.m
        vs = range(row * self.m + 1, (row + 1) * self.m + 1)
        if any(v != var and state.is_free(v) for v in vs):
            return DEFER
        par = 0
        for v in vs:
            if v != var:
                par ^= state.value(v)
        return 1 ^ par


# -- certificate prover ----------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _cert_plan(f: BoolFun, J: Subcube) -> tuple[tuple[int, int], ...]:
    g = _restricted(f, J)
    free = [v for v in range(1, f.arity + 1) if not J.support >> (v - 1) & 1]
    prof = cert_profile(g)
    c1 = max((p for x, p in enumerate(prof) if g.table >> x & 1), default=0)
    want = 1 if c1 == 1 else 0
    a = next(x for x in range(1 << g.arity) if (g.table >> x & 1) == want)
    return tuple((free[p - 1], a >> (p - 1) & 1) for p in min_certificate(g, a))


class CertProver:
    """Spell out certificates of the current restriction.

    While the restriction still has a 1-input without a single-variable
    certificate, take the smallest 0-input and query its smallest minimum
    certificate; deferrals follow that input.  Afterwards query one variable
    of a single-variable 1-certificate of the smallest 1-input.  The plan in
    force is recovered by replaying the history, so the strategy is stateless.
    """

    history_free = False
    name = "cert"

    def _plan(self, f: BoolFun, J: Subcube) -> list[tuple[int, int]]:
        return list(_cert_plan(f, J))

    def _current(self, state: GameState) -> list[tuple[int, int]]:
        J = Subcube()
        queue: list = []
        for rnd in state.history:
            if not queue:
                queue = self._plan(state.f, J)
            v, _ = queue.pop(0)
            if v != rnd.var:
                raise StrategyFault(self.name, "history does not follow the plan")
            J = J.with_var(rnd.var, rnd.chosen)
        if not queue:
            queue = self._plan(state.f, J)
        return queue

    def next_query(self, state: GameState) -> int:
        return self._current(state)[0][0]

    def choose(self, state: GameState, var: int) -> int:
        return self._current(state)[0][1]


# -- composition -----------------------------------------------------------

class ComposeProver:
    """Prover for f o (g_1..g_n) that walks a depth-optimal tree of f blockwise.

    At an outer query of x_i it plays the rank-tree prover of g_i inside
    block i until g_i's value is forced, then follows that value in f's tree.
    """

    history_free = True
    name = "compose"

    def __init__(self, f: BoolFun, gs):
        self.outer = opt_depth(f)[1]
        self.gs = list(gs)
        self.offsets = [0]
        for g in self.gs:
            self.offsets.append(self.offsets[-1] + g.arity)
        self.inner = [TreeProver(opt_rank(g)[1]) for g in self.gs]

    def _block_state(self, state: GameState, i: int) -> GameState:
        off, k = self.offsets[i], self.gs[i].arity
        sup = (state.assignment.support >> off) & ((1 << k) - 1)
        val = (state.assignment.values >> off) & ((1 << k) - 1)
        return GameState(self.gs[i], Subcube(sup, val))

    def _locate(self, state: GameState):
        t = self.outer
        while not isinstance(t, Leaf):
            i = t.var - 1
            bs = self._block_state(state, i)
            c = bs.restricted.constant_value()
            if c is None:
                return i, bs
            t = t.hi if c else t.lo
        raise StrategyFault(self.name, "outer tree reached a leaf before the game ended")

    def next_query(self, state: GameState) -> int:
        i, bs = self._locate(state)
        return self.offsets[i] + self.inner[i].next_query(bs)

    def choose(self, state: GameState, var: int) -> int:
        i, bs = self._locate(state)
        return self.inner[i].choose(bs, var - self.offsets[i])


ComposeDelayer = OptimalDelayer


# -- registry --------------------------------------------------------------

def _tribes_shape(f: BoolFun):
    origin = f.origin or ()
    if origin and origin[0] in ("tribes", "tribes_d"):
        return origin[1], origin[2], origin[0] == "tribes_d"
    raise ValueError("this strategy needs a TRIBES or TRIBES_D function")


def _andparity_shape(f: BoolFun):
    origin = f.origin or ()
    if origin and origin[0] == "compose":
        outer, gs = origin[1], origin[2]
        from .boolfun import AND, PARITY
        n = outer.arity
        if outer == AND(n) and gs and all(g == PARITY(gs[0].arity) for g in gs):
            return n, gs[0].arity
    raise ValueError("this strategy needs a COMPOSE(AND:n;PARITY:m,...) function")


def _compose_parts(f: BoolFun):
    origin = f.origin or ()
    if origin and origin[0] == "compose":
        return origin[1], origin[2]
    if origin and origin[0] == "iterate":
        from .boolfun import iterate
        base, k = origin[1], origin[2]
        if k == 1:
            raise ValueError("compose strategies need at least two levels")
        inner = iterate(base, k - 1)
        return base, [inner] * base.arity
    raise ValueError("this strategy needs a COMPOSE(...) or ITER(...) function")


PROVERS = {
    "optimal": lambda f: OptimalProver(f),
    "tribes-rowmajor": lambda f: TribesProver(*_tribes_shape(f)),
    "andparity": lambda f: AndParityProver(*_andparity_shape(f)),
    "cert": lambda f: CertProver(),
    "compose": lambda f: ComposeProver(*_compose_parts(f)),
    "asym-optimal": lambda f: OptimalAsymProver(),
}

DELAYERS = {
    "optimal": lambda f: OptimalDelayer(),
    "tribes": lambda f: TribesDelayer(*_tribes_shape(f)),
    "andparity": lambda f: AndParityDelayer(*_andparity_shape(f)),
    "compose": lambda f: ComposeDelayer(),
    "asym-optimal": lambda f: OptimalAsymDelayer(),
    "asym-tribes": lambda f: AsymTribesDelayer(*_tribes_shape(f)),
}

ASYM_ONLY = {"asym-optimal", "asym-tribes"}


def make_prover(name: str, f: BoolFun):
    if name not in PROVERS:
        raise KeyError(f"unknown prover {name!r}; available: {', '.join(sorted(PROVERS))}")
    return PROVERS[name](f)


def make_delayer(name: str, f: BoolFun):
    if name not in DELAYERS:
        raise KeyError(f"unknown delayer {name!r}; available: {', '.join(sorted(DELAYERS))}")
    return DELAYERS[name](f)
