"""Integer polynomials, Waring decompositions and the polynomial Phi_N.

Phi_N is a diagonal form over the index set I_k = {0} u {(a, b, g)}:

    Phi_N(x) = x_0^k + sum_a sum_b M^b (sum_{g <= G(a)} x_{abg}^a - sum_{g > G(a)} x_{abg}^a)

with M = floor(N^(1/k^2)).  ``nice_line_solve`` finds, for a given x, a
direction y with Phi_N(x + h y) = Phi_N(x) + h^k identically in h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BudgetInfeasible, IndexMismatch, ParameterError, SolveFailed
from .intmath import iroot


class IntPoly:
    """Polynomial with integer coefficients, stored low-first and trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @staticmethod
    def const(c: int) -> IntPoly:
        return IntPoly([c])

    @staticmethod
    def x() -> IntPoly:
        return IntPoly([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _lift(self, other) -> IntPoly:
        return other if isinstance(other, IntPoly) else IntPoly([other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return IntPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return IntPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out, base = IntPoly([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)


def coeff_box_member(f: IntPoly, s: int, M: int) -> bool:
    """f in X(s, M): degree below s and every coefficient in [-M, M]."""
    return len(f.coeffs) <= s and all(abs(c) <= M for c in f.coeffs)


# Waring decompositions

class WaringTable:
    """Minimal number of positive k-th powers summing to n, for n <= limit.

    Built in rounds: after round r, ``counts[n]`` is exact for every n that
    needs at most r powers.  Each round is a vectorised min over shifts.
    """

    def __init__(self, k: int, limit: int = 0):
        if k < 1:
            raise ParameterError("k must be positive")
        self.k = k
        self.counts = np.zeros(1, dtype=np.int32)
        if limit:
            self.ensure(limit)

    @property
    def limit(self) -> int:
        return len(self.counts) - 1

    def ensure(self, limit: int) -> None:
        if limit <= self.limit:
            return
        limit = max(limit, 2 * self.limit)
        k = self.k
        powers = [m**k for m in range(1, iroot(limit, k) + 1)]
        inf = np.iinfo(np.int32).max // 2
        c = np.full(limit + 1, inf, dtype=np.int32)
        c[0] = 0
        while True:
            nxt = c.copy()
            for v in powers:
                np.minimum(nxt[v:], c[:-v] + 1, out=nxt[v:])
            if np.array_equal(nxt, c):
                break
            c = nxt
        self.counts = c

    def count(self, n: int) -> int:
        if n < 0:
            raise ParameterError("negative target")
        if self.k == 1:
            return 1 if n > 0 else 0
        self.ensure(n)
        return int(self.counts[n])

    def decompose(self, n: int) -> list[int]:
        """Bases of a shortest representation, largest first."""
        if self.k == 1:
            return [n] if n > 0 else []
        self.ensure(n)
        out = []
        k = self.k
        while n > 0:
            need = self.counts[n] - 1
            x = iroot(n, k)
            while self.counts[n - x**k] != need:
                x -= 1
            out.append(x)
            n -= x**k
        return out

    def save(self, directory: str | Path) -> Path:
        path = Path(directory) / f"waring_k{self.k}_n{self.limit}.npy"
        np.save(path, self.counts)
        return path

    @staticmethod
    def load(path: str | Path, k: int) -> WaringTable:
        t = WaringTable(k)
        t.counts = np.load(path)
        return t


@lru_cache(maxsize=None)
def waring_table(k: int) -> WaringTable:
    return WaringTable(k, 1024)


def waring_decompose(n: int, k: int, budget: int | None = None) -> list[int]:
    terms = waring_table(k).decompose(n)
    if budget is not None and len(terms) > budget:
        raise BudgetInfeasible(f"{n} needs {len(terms)} {k}-th powers, budget {budget}")
    return terms


@dataclass(frozen=True)
class WaringParams:
    """G terms always suffice for targets >= T, measured up to ``checked``."""

    k: int
    G: int
    T: int
    checked: int


def waring_params(k: int, limit: int = 10_000) -> WaringParams:
    if k == 1:
        return WaringParams(1, 1, 0, limit)
    tab = waring_table(k)
    tab.ensure(limit)
    return WaringParams(k, int(tab.counts[: limit + 1].max()), 0, limit)


# The index set and Phi_N

@dataclass(frozen=True)
class WaringIndexSet:
    """Index 0 followed by (alpha, beta, gamma) in lexicographic order."""

    k: int
    G: tuple[int, ...]  # G[alpha - 1] for alpha in 1..k-1
    entries: tuple = field(repr=False)

    @property
    def ell(self) -> int:
        return self.k * self.k

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def position(self, alpha: int, beta: int, gamma: int) -> int:
        return self.entries.index((alpha, beta, gamma))


@lru_cache(maxsize=None)
def index_set(k: int) -> WaringIndexSet:
    if k < 2:
        raise ParameterError("k must be at least 2")
    G = tuple(waring_params(a).G for a in range(1, k))
    ell = k * k
    entries: list = [0]
    for a in range(1, k):
        for b in range(ell * (k - a) + 1):
            for g in range(1, 2 * G[a - 1] + 1):
                entries.append((a, b, g))
    return WaringIndexSet(k, G, tuple(entries))


def phi_base(N: int, k: int) -> int:
    return iroot(N, k * k)


def phi_terms(I: WaringIndexSet, N: int) -> list[tuple[int, int]]:
    """(weight, power) for each coordinate, so Phi = sum weight * x^power."""
    M = phi_base(N, I.k)
    out = []
    for e in I.entries:
        if e == 0:
            out.append((1, I.k))
        else:
            a, b, g = e
            sign = 1 if g <= I.G[a - 1] else -1
            out.append((sign * M**b, a))
    return out


def phi_eval(x: Sequence[int], N: int, k: int) -> int:
    I = index_set(k)
    if len(x) != len(I):
        raise IndexMismatch(f"expected {len(I)} coordinates, got {len(x)}")
    return sum(w * xi**a for (w, a), xi in zip(phi_terms(I, N), x))


def phi_shift_poly(x: Sequence[int], y: Sequence[int], N: int, k: int) -> IntPoly:
    """Phi_N(x + h y) as a polynomial in h."""
    I = index_set(k)
    if len(x) != len(I) or len(y) != len(I):
        raise IndexMismatch("coordinate count does not match the index set")
    coeffs = [0] * (k + 1)
    for (w, a), xi, yi in zip(phi_terms(I, N), x, y):
        for r in range(a + 1):
            coeffs[r] += w * math.comb(a, r) * xi ** (a - r) * yi**r
    return IntPoly(coeffs)


@dataclass(frozen=True)
class NiceLine:
    y: tuple[int, ...]
    sup_norm: int
    M: int

    @property
    def constant(self) -> float:
        """Measured C_k = ||y||_inf / M."""
        return self.sup_norm / self.M


def _signed_digits(R: int, M: int, top: int) -> list[int]:
    """Base-M digits of R for positions 0..top-1 with the rest in position top,
    all carrying the sign of R."""
    sign = -1 if R < 0 else 1
    r = abs(R)
    out = []
    for _ in range(top):
        r, d = divmod(r, M)
        out.append(sign * d)
    out.append(sign * r)
    return out


def nice_line_solve(x: Sequence[int], N: int, k: int) -> NiceLine:
    """Direction y with y_0 = 1 and Phi_N(x + h y) - Phi_N(x) = h^k.

    Coordinates are fixed for alpha = k-1 down to 1.  At level alpha the
    coefficient of h^alpha (with level-alpha coordinates still zero) is -R;
    R is split into base-M digits R_b and each digit is written as a
    difference of two sums of alpha-th powers.
    """
    I = index_set(k)
    if len(x) != len(I):
        raise IndexMismatch(f"expected {len(I)} coordinates, got {len(x)}")
    M = phi_base(N, k)
    if M < 1:
        raise ParameterError("N too small for the base M")
    terms = phi_terms(I, N)
    y = [0] * len(I)
    y[0] = 1
    for alpha in range(k - 1, 0, -1):
        coef = 0
        for (w, a), xi, yi in zip(terms, x, y):
            if a >= alpha and yi:
                coef += w * math.comb(a, alpha) * xi ** (a - alpha) * yi**alpha
        R = -coef
        G = I.G[alpha - 1]
        top = I.ell * (k - alpha)
        for beta, Rb in enumerate(_signed_digits(R, M, top)):
            pos = waring_decompose(max(Rb, 0), alpha, G)
            neg = waring_decompose(max(-Rb, 0), alpha, G)
            base = I.position(alpha, beta, 1)
            for g, v in enumerate(pos):
                y[base + g] = v
            for g, v in enumerate(neg):
                y[base + G + g] = v
    shift = phi_shift_poly(x, y, N, k) - phi_eval(x, N, k)
    if shift != IntPoly([0] * k + [1]):
        raise SolveFailed(f"shift polynomial {shift} is not h^{k}")
    return NiceLine(tuple(y), max(abs(v) for v in y), M)


# Finite-difference identities for the product argument

def boole_sum(k: int, f: IntPoly) -> IntPoly:
    return sum((IntPoly([(-1) ** i * math.comb(k - 1, i)]) * (f - i) ** k for i in range(k)), IntPoly())


def boole_centered_sum(k: int, f: IntPoly) -> IntPoly:
    return sum(
        (IntPoly([(-1) ** i * math.comb(k - 1, i)]) * (2 * f + (k - 1 - 2 * i)) ** k for i in range(k)),
        IntPoly(),
    )


def boole_sum_check(k: int, f: IntPoly) -> bool:
    """Both finite-difference identities hold for f:
    sum (-1)^i C(k-1,i) (f-i)^k = k! f - k!(k-1)/2 and the centred form
    sum (-1)^i C(k-1,i) (2f+k-1-2i)^k = k! 2^k f."""
    kf = math.factorial(k)
    lhs1 = boole_sum(k, f)
    rhs1 = IntPoly([kf]) * f - kf * (k - 1) // 2
    lhs2 = boole_centered_sum(k, f)
    rhs2 = IntPoly([kf * 2**k]) * f
    return lhs1 == rhs1 and lhs2 == rhs2


def box_product_ok(f: IntPoly, s: int, M: int, g: IntPoly, s2: int, M2: int) -> bool:
    """X(s,M) X(s2,M2) lies in X(s+s2, (s+s2) M M2), checked on one product."""
    if not (coeff_box_member(f, s, M) and coeff_box_member(g, s2, M2)):
        raise ParameterError("factors are not in their boxes")
    return coeff_box_member(f * g, s + s2, (s + s2) * M * M2)
