"""Walsh-Hadamard spectra of Boolean functions in the +-1 encoding.

Coefficients are stored scaled by 2^n so they stay exact integers:
``coeffs[S] = sum_x (-1)^(f(x) + |x & S|)``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import bits
from .boolfun import BoolFun, Subcube, restrict, table_to_array, array_to_table

WHT_CAP = 16


def _butterfly(v: np.ndarray, n: int) -> np.ndarray:
    v = v.copy()
    h = 1
    while h < (1 << n):
        v = v.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        b = v[:, 1, :]
        v[:, 0, :] = a + b
        v[:, 1, :] = a - b
        v = v.reshape(-1)
        h <<= 1
    return v


class Spectrum:
    def __init__(self, n: int, coeffs: np.ndarray):
        self.n = n
        self.coeffs = coeffs

    def __getitem__(self, S: int) -> int:
        return int(self.coeffs[S])

    def __len__(self):
        return len(self.coeffs)

    def nonzero(self) -> dict[int, int]:
        return {int(S): int(self.coeffs[S]) for S in np.flatnonzero(self.coeffs)}

    def spar(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    def spar_tilde(self) -> int:
        return self.spar() - (1 if self.coeffs[0] != 0 else 0)

    def parseval_ok(self) -> bool:
        return int((self.coeffs.astype(np.int64) ** 2).sum()) == 4 ** self.n

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "coeffs": {str(k): v for k, v in self.nonzero().items()}})

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        d = json.loads(text)
        n = int(d["n"])
        c = np.zeros(1 << n, dtype=np.int64)
        for k, v in d["coeffs"].items():
            c[int(k)] = int(v)
        return cls(n, c)

    def __eq__(self, other):
        return isinstance(other, Spectrum) and self.n == other.n and np.array_equal(self.coeffs, other.coeffs)


def wht(f: BoolFun) -> Spectrum:
    if f.arity > WHT_CAP:
        raise ValueError(f"arity {f.arity} exceeds transform cap {WHT_CAP}")
    signs = 1 - 2 * table_to_array(f.table, f.arity).astype(np.int64)
    return Spectrum(f.arity, _butterfly(signs, f.arity))


def inverse_wht(spec: Spectrum) -> BoolFun:
    """Recover f from its spectrum (the transform is its own inverse up to 2^n)."""
    signs = _butterfly(spec.coeffs.astype(np.int64), spec.n) >> spec.n
    if not np.all((signs == 1) | (signs == -1)):
        raise ValueError("not the spectrum of a Boolean function")
    return BoolFun(spec.n, array_to_table((signs < 0).astype(np.uint8)))


@lru_cache(maxsize=1 << 17)
def _spar_tilde(n: int, t: int) -> int:
    return wht(BoolFun(n, t)).spar_tilde()


def spar(f: BoolFun) -> int:
    return wht(f).spar()


def spar_tilde(f: BoolFun) -> int:
    return _spar_tilde(f.arity, f.table)


def _assignments(support: int) -> Iterable[int]:
    """Every value mask inside ``support``."""
    v = 0
    while True:
        yield v
        if v == support:
            return
        v = (v - support) & support


def halving_check(f: BoolFun, S: int) -> bool:
    """If some assignment to S makes f constant, every assignment to S at least halves spar~.

    ``S`` is a variable mask (bit i-1 for variable i).
    """
    if S == 0:
        raise ValueError("S must be non-empty")
    if S >> f.arity:
        raise ValueError("S mentions variables beyond the arity")
    subs = [restrict(f, Subcube(S, v)) for v in _assignments(S)]
    if not any(g.is_constant() for g in subs):
        return True
    total = spar_tilde(f)
    return all(2 * spar_tilde(g) <= total for g in subs)


def halving_failures(f: BoolFun) -> list[int]:
    """Every non-empty variable mask S for which :func:`halving_check` fails."""
    n, t = f.arity, f.table
    total = _spar_tilde(n, t)
    bad = []
    for S in range(1, 1 << n):
        k = n - S.bit_count()
        tabs = [bits.restrict_masks(t, n, S, v) for v in _assignments(S)]
        if not any(bits.is_constant(g, k) for g in tabs):
            continue
        if any(2 * _spar_tilde(k, g) > total for g in tabs):
            bad.append(S)
    return bad
