"""Truth-table Boolean functions, subcubes, composition and the named catalog.

Bit order: variable ``i`` (1-based) is bit ``i-1`` of the input index, so
``x_1`` is the least significant bit.  In a composition the variables of
``g_1`` occupy the lowest block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import bits

ARITY_CAP = 16


class ArityError(ValueError):
    """Raised when an arity exceeds a cap or two arities disagree."""


@dataclass(frozen=True)
class BoolFun:
    """A total Boolean function on ``arity`` variables.

    ``table`` is an integer whose bit ``x`` is f(x).  ``name`` and ``origin``
    are descriptive metadata (how the function was built) and take no part in
    equality or hashing.
    """

    arity: int
    table: int
    name: Optional[str] = field(default=None, compare=False, repr=False)
    origin: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.arity < 0:
            raise ArityError("arity must be non-negative")
        if self.arity > ARITY_CAP:
            raise ArityError(f"arity {self.arity} exceeds cap {ARITY_CAP}")
        if self.table < 0 or self.table >> (1 << self.arity):
            raise ValueError("table does not fit in 2^arity bits")

    @property
    def n(self) -> int:
        return self.arity

    def __call__(self, x) -> int:
        return evaluate(self, x)

    def is_constant(self) -> bool:
        return bits.is_constant(self.table, self.arity)

    def constant_value(self) -> Optional[int]:
        if self.table == 0:
            return 0
        if self.table == bits.full_mask(self.arity):
            return 1
        return None

    def ones(self) -> int:
        return self.table.bit_count()

    def depends_on(self, var: int) -> bool:
        return bits.depends_on(self.table, self.arity, var - 1)

    def essential_vars(self) -> list[int]:
        return [i + 1 for i in range(self.arity) if bits.depends_on(self.table, self.arity, i)]

    def fix(self, var: int, b: int) -> "BoolFun":
        """Fix one variable; the remaining variables keep their order."""
        _check_var(self, var)
        return BoolFun(self.arity - 1, bits.cofactor(self.table, self.arity, var - 1, b))

    def to_array(self) -> np.ndarray:
        return table_to_array(self.table, self.arity)

    def hex(self) -> str:
        return table_to_hex(self.table, self.arity)

    def label(self) -> str:
        return self.name or f"TT:{self.hex()}:{self.arity}"

    @classmethod
    def from_array(cls, arr, name=None, origin=None) -> "BoolFun":
        arr = np.asarray(arr, dtype=np.uint8)
        n = int(arr.size).bit_length() - 1
        if arr.size != 1 << n:
            raise ValueError("truth table length must be a power of two")
        return cls(n, array_to_table(arr), name=name, origin=origin)

    @classmethod
    def from_function(cls, n: int, fn, name=None) -> "BoolFun":
        t = 0
        for x in range(1 << n):
            if fn(x):
                t |= 1 << x
        return cls(n, t, name=name)

    @classmethod
    def constant(cls, b: int, n: int = 0) -> "BoolFun":
        return cls(n, bits.full_mask(n) if b else 0, name=f"CONST:{int(bool(b))}:{n}")


@dataclass(frozen=True)
class Subcube:
    """A partial assignment: variables in ``support`` fixed to their bit in ``values``.

    Masks use bit ``i-1`` for variable ``i``.
    """

    support: int = 0
    values: int = 0

    def __post_init__(self):
        if self.values & ~self.support:
            raise ValueError("values must be a subset of support")
        if self.support < 0:
            raise ValueError("negative support mask")

    @property
    def codim(self) -> int:
        return self.support.bit_count()

    def vars(self) -> list[int]:
        return [i + 1 for i in range(self.support.bit_length()) if self.support >> i & 1]

    def assignment(self) -> dict[int, int]:
        return {v: self.values >> (v - 1) & 1 for v in self.vars()}

    def value(self, var: int) -> Optional[int]:
        if not self.support >> (var - 1) & 1:
            return None
        return self.values >> (var - 1) & 1

    def with_var(self, var: int, b: int) -> "Subcube":
        bit = 1 << (var - 1)
        return Subcube(self.support | bit, (self.values & ~bit) | (bit if b else 0))

    def contains(self, x: int) -> bool:
        return (x & self.support) == self.values

    def merge(self, other: "Subcube") -> "Subcube":
        if self.support & other.support:
            raise ValueError("subcubes overlap")
        return Subcube(self.support | other.support, self.values | other.values)

    @classmethod
    def from_assignment(cls, assignment: dict[int, int]) -> "Subcube":
        s = v = 0
        for var, b in assignment.items():
            if var < 1:
                raise ValueError("variables are numbered from 1")
            s |= 1 << (var - 1)
            if b:
                v |= 1 << (var - 1)
        return cls(s, v)


def _check_var(f: BoolFun, var: int) -> None:
    if not 1 <= var <= f.arity:
        raise ArityError(f"variable {var} out of range for arity {f.arity}")


def _input_index(f: BoolFun, x) -> int:
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if not 0 <= x < 1 << f.arity:
            raise ArityError(f"input {x} out of range for arity {f.arity}")
        return x
    xs = list(x)
    if len(xs) != f.arity:
        raise ArityError(f"expected {f.arity} input bits, got {len(xs)}")
    idx = 0
    for i, b in enumerate(xs):
        if b not in (0, 1, True, False):
            raise ValueError(f"input bit {b!r} is not 0/1")
        if b:
            idx |= 1 << i
    return idx


def evaluate(f: BoolFun, x) -> int:
    """f(x) for an input index or a sequence of bits (x_1 first)."""
    return f.table >> _input_index(f, x) & 1


def restrict(f: BoolFun, J: Subcube) -> BoolFun:
    if J.support >> f.arity:
        raise ArityError("subcube mentions variables beyond the arity")
    t = bits.restrict_masks(f.table, f.arity, J.support, J.values)
    return BoolFun(f.arity - J.codim, t)


# -- numpy bridges ---------------------------------------------------------

def table_to_array(t: int, n: int) -> np.ndarray:
    size = 1 << n
    raw = t.to_bytes(max(1, size // 8), "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]


def array_to_table(arr: np.ndarray) -> int:
    packed = np.packbits(np.asarray(arr, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def weights_array(n: int) -> np.ndarray:
    """Hamming weight of every input index."""
    w = np.zeros(1 << n, dtype=np.int64)
    idx = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        w += (idx >> i) & 1
    return w


# -- structural operations -------------------------------------------------

def compose(f: BoolFun, gs: Sequence[BoolFun], name: Optional[str] = None) -> BoolFun:
    """f(g_1(block_1), ..., g_n(block_n)) with blocks concatenated, g_1 lowest."""
    gs = list(gs)
    if len(gs) != f.arity:
        raise ArityError(f"outer function has arity {f.arity} but {len(gs)} inner functions given")
    total = sum(g.arity for g in gs)
    if total > ARITY_CAP:
        raise ArityError(f"composed arity {total} exceeds cap {ARITY_CAP}")
    idx = np.arange(1 << total, dtype=np.int64)
    outer_idx = np.zeros(1 << total, dtype=np.int64)
    offset = 0
    for i, g in enumerate(gs):
        block = (idx >> offset) & ((1 << g.arity) - 1)
        outer_idx |= g.to_array()[block].astype(np.int64) << i
        offset += g.arity
    arr = f.to_array()[outer_idx]
    if name is None and f.name and all(g.name for g in gs):
        name = f"COMPOSE({f.name};{','.join(g.name for g in gs)})"
    return BoolFun(total, array_to_table(arr), name=name, origin=("compose", f, tuple(gs)))


def iterate(f: BoolFun, k: int) -> BoolFun:
    """k-fold self composition: f, f o f, f o (f o f), ..."""
    if k < 1:
        raise ValueError("iteration count must be at least 1")
    if f.arity ** k > ARITY_CAP:
        raise ArityError(f"iterated arity {f.arity}^{k} exceeds cap {ARITY_CAP}")
    g = f
    for _ in range(k - 1):
        g = compose(f, [g] * f.arity)
    name = f"ITER({f.name},{k})" if f.name else None
    if k == 1:
        return BoolFun(f.arity, f.table, name=f.name, origin=f.origin)
    return BoolFun(g.arity, g.table, name=name, origin=("iterate", f, k))


def negate(f: BoolFun) -> BoolFun:
    name = f"NOT({f.name})" if f.name else None
    return BoolFun(f.arity, f.table ^ bits.full_mask(f.arity), name=name)


def dual(f: BoolFun) -> BoolFun:
    """x -> not f(not x)."""
    arr = f.to_array()[::-1] ^ 1
    name = f"DUAL({f.name})" if f.name else None
    return BoolFun(f.arity, array_to_table(arr), name=name)


def symmetric_profile(f: BoolFun) -> Optional[tuple[int, ...]]:
    """Values f_0..f_n by Hamming weight, or None if f is not symmetric."""
    arr = f.to_array()
    w = weights_array(f.arity)
    profile = []
    for k in range(f.arity + 1):
        vals = arr[w == k]
        if vals.min() != vals.max():
            return None
        profile.append(int(vals[0]))
    return tuple(profile)


def from_profile(profile: Sequence[int], name: Optional[str] = None) -> BoolFun:
    n = len(profile) - 1
    prof = np.asarray(profile, dtype=np.uint8)
    return BoolFun(n, array_to_table(prof[weights_array(n)]), name=name)


# -- catalog ---------------------------------------------------------------

def AND(n: int) -> BoolFun:
    return BoolFun(n, 1 << ((1 << n) - 1), name=f"AND:{n}")


def OR(n: int) -> BoolFun:
    return BoolFun(n, bits.full_mask(n) ^ 1, name=f"OR:{n}")


def PARITY(n: int) -> BoolFun:
    prof = [k & 1 for k in range(n + 1)]
    return from_profile(prof, name=f"PARITY:{n}")


def THR(k: int, n: int) -> BoolFun:
    """[weight >= k]."""
    if not 0 <= k <= n + 1:
        raise ValueError(f"threshold {k} out of range for arity {n}")
    return from_profile([int(w >= k) for w in range(n + 1)], name=f"THR:{k}:{n}")


def MAJ(n: int) -> BoolFun:
    """Majority; even arity uses threshold n/2 + 1."""
    if n < 1:
        raise ValueError("majority needs at least one variable")
    f = THR(n // 2 + 1, n)
    return BoolFun(n, f.table, name=f"MAJ:{n}")


def TRIBES(n: int, m: int) -> BoolFun:
    """OR of n disjoint ANDs of width m."""
    f = compose(OR(n), [AND(m)] * n)
    return BoolFun(f.arity, f.table, name=f"TRIBES:{n}x{m}", origin=("tribes", n, m))


def TRIBES_D(n: int, m: int) -> BoolFun:
    """AND of n disjoint ORs of width m."""
    f = compose(AND(n), [OR(m)] * n)
    return BoolFun(f.arity, f.table, name=f"TRIBES_D:{n}x{m}", origin=("tribes_d", n, m))


def MAJ_OR_PARITY(n: int, threshold: Optional[int] = None) -> BoolFun:
    """THR^k_n OR PARITY_n; the default threshold follows MAJ."""
    k = n // 2 + 1 if threshold is None else threshold
    t = THR(k, n).table | PARITY(n).table
    name = f"MAJ_OR_PARITY:{n}" if threshold is None else f"MAJ_OR_PARITY:{n}:{k}"
    return BoolFun(n, t, name=name)


def catalog(name: str, *params) -> BoolFun:
    """Build a named function, e.g. ``catalog("TRIBES_D", 2, 3)``."""
    key = name.upper()
    builders = {
        "AND": AND, "OR": OR, "PARITY": PARITY, "XOR": PARITY, "MAJ": MAJ,
        "THR": THR, "TRIBES": TRIBES, "TRIBES_D": TRIBES_D,
        "MAJ_OR_PARITY": MAJ_OR_PARITY,
        "CONST": lambda b, n=0: BoolFun.constant(b, n),
        "ITER": iterate, "NOT": negate, "DUAL": dual,
        "COMPOSE": lambda f, *gs: compose(f, gs if len(gs) != 1 else list(gs) * f.arity),
    }
    if key not in builders:
        raise KeyError(f"unknown function {name!r}; known: {', '.join(sorted(builders))}")
    return builders[key](*params)


# -- text formats ----------------------------------------------------------

def table_to_hex(t: int, n: int) -> str:
    """Hex digits, first digit holding inputs 0..3 (input 0 in its low bit)."""
    ndig = max(1, (1 << n) // 4)
    return "".join("0123456789abcdef"[(t >> (4 * k)) & 0xF] for k in range(ndig))


def hex_to_table(s: str, n: int) -> int:
    s = s.strip().lower()
    if s.startswith("0x"):
        s = s[2:]
    ndig = max(1, (1 << n) // 4)
    if len(s) != ndig:
        raise ValueError(f"expected {ndig} hex digits for arity {n}, got {len(s)}")
    t = 0
    for k, ch in enumerate(s):
        t |= int(ch, 16) << (4 * k)
    if t >> (1 << n):
        raise ValueError("hex string sets bits beyond 2^n")
    return t


def dumps_tt(f: BoolFun) -> str:
    return f"n={f.arity}\n{f.hex()}\n"


def loads_tt(text: str) -> BoolFun:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if len(lines) < 2 or not lines[0].startswith("n="):
        raise ValueError("truth-table file must start with 'n=<arity>' followed by a hex line")
    n = int(lines[0][2:])
    return BoolFun(n, hex_to_table("".join(lines[1:]), n))


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def ident(self) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a function name", start)
        return self.text[start:self.pos].upper()

    def word(self) -> tuple[str, int]:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a parameter", start)
        return self.text[start:self.pos], start

    def integer(self) -> int:
        w, at = self.word()
        if not w.isdigit():
            raise ParseError(f"expected an integer, got {w!r}", at)
        return int(w)

    def expr(self) -> BoolFun:
        at = self.pos
        name = self.ident()
        try:
            if self.peek() == "(":
                return self.call(name, at)
            return self.atom(name, at)
        except (ValueError, KeyError) as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(str(e).strip("'\""), at) from None

    def call(self, name: str, at: int) -> BoolFun:
        self.expect("(")
        if name == "ITER":
            f = self.expr()
            self.expect(",")
            k = self.integer()
            self.expect(")")
            return iterate(f, k)
        if name in ("NOT", "DUAL"):
            f = self.expr()
            self.expect(")")
            return negate(f) if name == "NOT" else dual(f)
        if name == "COMPOSE":
            f = self.expr()
            self.expect(";")
            gs = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                gs.append(self.expr())
            self.expect(")")
            if len(gs) == 1 and f.arity != 1:
                gs = gs * f.arity
            return compose(f, gs)
        raise ParseError(f"unknown combinator {name!r}", at)

    def atom(self, name: str, at: int) -> BoolFun:
        params: list[tuple[str, int]] = []
        while self.peek() == ":":
            self.pos += 1
            params.append(self.word())

        def ints(count):
            if len(params) != count:
                raise ParseError(f"{name} takes {count} parameter(s)", at)
            out = []
            for w, p in params:
                if not w.isdigit():
                    raise ParseError(f"expected an integer, got {w!r}", p)
                out.append(int(w))
            return out

        def shape():
            if len(params) != 1 or "x" not in params[0][0].lower():
                raise ParseError(f"{name} takes a shape like 3x2", at)
            a, _, b = params[0][0].lower().partition("x")
            if not (a.isdigit() and b.isdigit()):
                raise ParseError("bad shape", params[0][1])
            return int(a), int(b)

        if name == "TT":
            if len(params) != 2 or not params[1][0].isdigit():
                raise ParseError("TT takes TT:<hex>:<arity>", at)
            n = int(params[1][0])
            return BoolFun(n, hex_to_table(params[0][0], n))
        if name in ("TRIBES", "TRIBES_D"):
            return catalog(name, *shape())
        if name == "THR":
            return THR(*ints(2))
        if name == "CONST":
            b, n = ints(2)
            return BoolFun.constant(b, n)
        if name == "MAJ_OR_PARITY" and len(params) == 2:
            n, k = ints(2)
            return MAJ_OR_PARITY(n, k)
        if name in ("AND", "OR", "PARITY", "XOR", "MAJ", "MAJ_OR_PARITY"):
            return catalog(name, *ints(1))
        raise ParseError(f"unknown function {name!r}", at)


def parse_expr(text: str) -> BoolFun:
    """Parse expressions such as ``TRIBES_D:2x2`` or ``COMPOSE(AND:2;PARITY:2)``.

    Grammar::

        expr := NAME(':' param)* | ITER(expr, k) | NOT(expr) | DUAL(expr)
              | COMPOSE(expr; expr[, expr]*) | TT:<hex>:<n>

    A single inner function in COMPOSE is repeated for every outer variable.
    """
    if not text.isascii():
        raise ParseError("expression must be ASCII", next(i for i, c in enumerate(text) if not c.isascii()))
    p = _Parser(text)
    f = p.expr()
    p.ws()
    if p.pos != len(text):
        raise ParseError("unexpected trailing input", p.pos)
    return f


def all_functions(n: int) -> Iterable[BoolFun]:
    for t in range(1 << (1 << n)):
        yield BoolFun(n, t)
