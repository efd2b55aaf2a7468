"""Subsets of [N] whose difference set contains no nonzero k-th power.

The large sets come from a digit construction: take a k-th-power-free residue
set A_p modulo a prime p = 1 (mod 2k) and use it for the base-p digits in
positions divisible by k, leaving the other digits free.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BadCongruence, NotPrime, ParameterError, TooLargeForExact, VerificationFailed
from .ff import is_prime
from .graphs import lexmin_max_independent_set
from .intmath import ilog, kth_root_exact

EXACT_LIMIT = 64


@dataclass(frozen=True)
class PowerFreeSet:
    k: int
    N: int
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {"k": self.k, "N": self.N, "elements": list(self.elements)}

    @staticmethod
    def from_json(obj: dict) -> PowerFreeSet:
        return PowerFreeSet(int(obj["k"]), int(obj["N"]), tuple(sorted(int(a) for a in obj["elements"])))


@dataclass(frozen=True)
class PowerViolation:
    a: int
    b: int
    root: int  # b - a == root**k


def kth_power_residues(p: int, k: int) -> set[int]:
    return {pow(x, k, p) for x in range(1, p)}


def smallest_prime_1_mod(m: int) -> int:
    p = m + 1
    while not is_prime(p):
        p += m
    return p


def default_prime(k: int) -> int:
    return smallest_prime_1_mod(2 * k)


def greedy_residue_seed(p: int, k: int) -> list[int]:
    """Scan residues mod p in order, keeping each one whose difference with
    every kept residue is not a nonzero k-th power."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p % (2 * k) != 1:
        raise BadCongruence(f"need p = 1 mod {2 * k}, got p = {p}")
    Q = kth_power_residues(p, k)
    kept: list[int] = []
    for r in range(p):
        if all((r - a) % p not in Q for a in kept):
            kept.append(r)
    return kept


def growth_exponent(k: int, p: int) -> float:
    """c_k = 1 - 1/k + log(k)/(k log p)."""
    return 1 - 1 / k + math.log(k) / (k * math.log(p))


def digit_construction(N: int, k: int, p: int | None = None) -> PowerFreeSet:
    """{1 + sum_i c_i p^i} inside [N], with c_i in A_p when k | i and c_i free
    otherwise.  Digits run over i = 0..L with L = floor(log_p N); the top digit
    only matters when N < p, where it yields {1 + a : a in A_p} cut to [N]."""
    if N < 1:
        raise ParameterError("N must be positive")
    if p is None:
        p = default_prime(k)
    seed = greedy_residue_seed(p, k)
    L = ilog(N, p)
    values = [1]
    for i in range(L + 1):
        choices = seed if i % k == 0 else range(p)
        w = p**i
        values = [v + c * w for v in values for c in choices if v + c * w <= N]
    out = PowerFreeSet(k, N, tuple(sorted(values)))
    bad = verify_power_free(out)
    if bad is not None:
        raise VerificationFailed(f"digit set has {bad.b} - {bad.a} = {bad.root}^{k}")
    return out


def _kth_power_mask(limit: int, k: int) -> np.ndarray:
    mask = np.zeros(limit + 1, dtype=bool)
    m = 1
    while m**k <= limit:
        mask[m**k] = True
        m += 1
    return mask


def verify_power_free(s: PowerFreeSet | Iterable[int], k: int | None = None) -> PowerViolation | None:
    """None if no two elements differ by a nonzero k-th power, else the
    lex-least offending pair (a < b)."""
    if isinstance(s, PowerFreeSet):
        k = s.k
        elems = s.elements
    else:
        elems = tuple(s)
    if k is None:
        raise ParameterError("k is required")
    arr = np.array(sorted(set(elems)), dtype=np.int64)
    if len(arr) < 2:
        return None
    mask = _kth_power_mask(int(arr[-1] - arr[0]), k)
    for i in range(len(arr) - 1):
        diffs = arr[i + 1 :] - arr[i]
        hit = np.flatnonzero(mask[diffs])
        if len(hit):
            b = int(arr[i + 1 + hit[0]])
            a = int(arr[i])
            return PowerViolation(a, b, kth_root_exact(b - a, k))
    return None


def power_difference_graph(N: int, k: int) -> list[int]:
    """Adjacency bitmasks on vertices 0..N-1 standing for 1..N."""
    adj = [0] * N
    m = 1
    while m**k < N:
        d = m**k
        for i in range(N - d):
            adj[i] |= 1 << (i + d)
            adj[i + d] |= 1 << i
        m += 1
    return adj


def max_power_free_exact(N: int, k: int, limit: int = EXACT_LIMIT) -> PowerFreeSet:
    """A maximum k-th-power-difference-free subset of [N]; ties go to the
    lexicographically least set."""
    if N > limit:
        raise TooLargeForExact(f"N = {N} is above the exact-search limit {limit}")
    if N < 1:
        return PowerFreeSet(k, N, ())
    chosen = lexmin_max_independent_set(power_difference_graph(N, k))
    return PowerFreeSet(k, N, tuple(v + 1 for v in chosen))


def comparison_rows(Ns: Iterable[int], k: int, p: int | None = None, exact_limit: int = EXACT_LIMIT):
    """Rows (N, k, constructed, exact or None, N^c_k)."""
    if p is None:
        p = default_prime(k)
    c = growth_exponent(k, p)
    for N in Ns:
        built = len(digit_construction(N, k, p))
        exact = len(max_power_free_exact(N, k)) if N <= exact_limit else None
        yield (N, k, built, exact, N**c)


def comparison_csv(Ns: Iterable[int], k: int, p: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "k", "constructed", "exact", "N^c_k"])
    for N, kk, built, exact, bound in comparison_rows(Ns, k, p):
        w.writerow([N, kk, built, "" if exact is None else exact, f"{bound:.6f}"])
    return buf.getvalue()
