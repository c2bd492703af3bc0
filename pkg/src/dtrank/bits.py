"""Low-level helpers for truth tables stored as Python integers.

Bit ``x`` of a table holds f(x); variable ``i`` (0-based here) is bit ``i``
of the input index.  All helpers are pure functions of ``(table, n)``.
"""

from __future__ import annotations

from functools import lru_cache


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def period_mask(total: int, period: int, keep: int) -> int:
    """Bits ``j < total`` with ``j % period < keep``; period and total powers of two."""
    m = (1 << keep) - 1
    p = period
    while p < total:
        m |= m << p
        p <<= 1
    return m & ((1 << total) - 1)


def cofactor(t: int, n: int, i: int, b: int) -> int:
    """Table of f with variable i fixed to b; the result has n-1 variables."""
    size = 1 << n
    s = 1 << i
    if b:
        t >>= s
    t &= period_mask(size, s << 1, s)
    half = size >> 1
    w = s
    while w < half:
        t = (t | (t >> w)) & period_mask(size, w << 2, w << 1)
        w <<= 1
    return t


def depends_on(t: int, n: int, i: int) -> bool:
    s = 1 << i
    return bool(((t >> s) ^ t) & period_mask(1 << n, s << 1, s))


def is_constant(t: int, n: int) -> bool:
    return t == 0 or t == full_mask(n)


def strip(t: int, n: int) -> tuple[int, int, tuple[int, ...]]:
    """Drop every variable the function ignores.

    Returns ``(k, table, kept)`` where ``kept`` lists the surviving 0-based
    variable positions in increasing order.
    """
    if n <= 6:
        return _strip_small(t, n)
    return _strip(t, n)


@lru_cache(maxsize=1 << 20)
def _strip_small(t: int, n: int) -> tuple[int, int, tuple[int, ...]]:
    return _strip(t, n)


def _strip(t: int, n: int) -> tuple[int, int, tuple[int, ...]]:
    kept = []
    for i in range(n - 1, -1, -1):
        if depends_on(t, n, i):
            kept.append(i)
        else:
            t = cofactor(t, n, i, 0)
            n -= 1
    kept.reverse()
    return n, t, tuple(kept)


def restrict_masks(t: int, n: int, support: int, values: int) -> int:
    """Fix every variable in ``support`` to its bit in ``values``."""
    for i in range(n - 1, -1, -1):
        if support >> i & 1:
            t = cofactor(t, n, i, values >> i & 1)
            n -= 1
    return t


def popcount(x: int) -> int:
    return bin(x).count("1")
