"""Maximum independent sets on small graphs given as adjacency bitmasks."""

from __future__ import annotations

import sys


def _alpha_fn(adj: list[int]):
    memo: dict[int, int] = {}

    def alpha(mask: int) -> int:
        if mask == 0:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit
        best_v, best_deg = -1, -1
        m = mask
        forced = -1
        while m:
            low = m & -m
            v = low.bit_length() - 1
            deg = (adj[v] & mask).bit_count()
            if deg <= 1:
                forced = v
                break
            if deg > best_deg:
                best_v, best_deg = v, deg
            m ^= low
        if forced >= 0:
            # Some maximum independent set contains a vertex of degree <= 1.
            res = 1 + alpha(mask & ~(adj[forced] | (1 << forced)))
        else:
            v = best_v
            res = max(alpha(mask & ~(1 << v)), 1 + alpha(mask & ~(adj[v] | (1 << v))))
        memo[mask] = res
        return res

    return alpha


def independence_number(adj: list[int]) -> int:
    n = len(adj)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * n + 1000))
    try:
        return _alpha_fn(adj)((1 << n) - 1)
    finally:
        sys.setrecursionlimit(old)


def lexmin_max_independent_set(adj: list[int]) -> list[int]:
    """The lexicographically least maximum independent set (sorted vertices)."""
    n = len(adj)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * n + 1000))
    try:
        alpha = _alpha_fn(adj)
        mask = (1 << n) - 1
        need = alpha(mask)
        chosen = []
        for v in range(n):
            if not mask >> v & 1:
                continue
            rest = mask & ~(adj[v] | (1 << v))
            if 1 + alpha(rest) == need:
                chosen.append(v)
                need -= 1
                mask = rest
            else:
                mask &= ~(1 << v)
        return chosen
    finally:
        sys.setrecursionlimit(old)


def greedy_independent_set(adj: list[int]) -> list[int]:
    taken = 0
    out = []
    for v in range(len(adj)):
        if not adj[v] & taken:
            taken |= 1 << v
            out.append(v)
    return out
