"""Exact integer helpers."""

from __future__ import annotations

import math


def iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) for n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def kth_root_exact(n: int, k: int) -> int | None:
    """m >= 0 with m^k = n, if any."""
    if n < 0:
        return None
    r = iroot(n, k)
    return r if r**k == n else None


def ilog(n: int, base: int) -> int:
    """floor(log_base n) for n >= 1."""
    if n < 1 or base < 2:
        raise ValueError("ilog needs n >= 1 and base >= 2")
    e, x = 0, base
    while x <= n:
        x *= base
        e += 1
    return e
