"""Matchings from the diagonal form Phi_N and a power-free set.

Points x of a sub-box with Phi_N(x) in A + s all satisfy
Phi_N(x + h y_x) = Phi_N(x) + h^k, so moving along y_x can only return to the
family when h^k is a difference of two elements of A, i.e. when h = 0.  The
shift s is the one that captures the most box points.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..diffsets import digit_construction
from ..errors import ParameterError, SubBoxEmpty
from ..ff import is_prime, make_field
from ..geom import AffineLine, Matching
from ..polyring import index_set, nice_line_solve, phi_base, phi_terms
from .report import ConstructionReport, finish

BOX_TARGET = 4096
A_CAP = 200_000


def default_box(N: int, k: int, target: int = BOX_TARGET) -> list[tuple[int, int]]:
    """x_0 over [1, N]; as many further coordinates over [1, 2] as keep the box
    near ``target`` points; the rest pinned to 1."""
    dim = len(index_set(k))
    free = max(0, int(math.log2(max(target // N, 1))))
    free = min(free, dim - 1)
    return [(1, N)] + [(1, 2)] * free + [(1, 1)] * (dim - 1 - free)


def value_histogram(terms: Sequence[tuple[int, int]], box: Sequence[tuple[int, int]]) -> Counter:
    """Distribution of sum_i w_i x_i^a_i over the box, by iterated convolution
    of the one-coordinate distributions."""
    hist = Counter({0: 1})
    for (w, a), (lo, hi) in zip(terms, box):
        vals = Counter(w * x**a for x in range(lo, hi + 1))
        nxt: Counter = Counter()
        for u, cu in hist.items():
            for v, cv in vals.items():
                nxt[u + v] += cu * cv
        hist = nxt
    return hist


def best_shift(hist: Counter, A: Sequence[int]) -> tuple[int, int, int]:
    """(s, score, number of shifts with a nonzero score) maximising
    #{x : Phi(x) - s in A}; ties go to the smallest s."""
    A = np.asarray(sorted(A), dtype=np.int64)
    vmin, vmax = min(hist), max(hist)
    lo = vmin - int(A[-1])
    score = np.zeros(vmax - int(A[0]) - lo + 1, dtype=np.int64)
    for v, c in hist.items():
        np.add.at(score, v - A - lo, c)
    idx = int(np.argmax(score))
    return idx + lo, int(score[idx]), int(np.count_nonzero(score))


@dataclass
class WaringFamily:
    """Box points with Phi_N(x) - s in A, each with its nice direction."""

    k: int
    N: int
    M: int
    box: list[tuple[int, int]]
    A: tuple[int, ...]
    shift: int
    points: list[tuple[int, ...]]
    directions: list[tuple[int, ...]]
    nonzero_shifts: int

    @property
    def sup_norm(self) -> int:
        return max((max(abs(c) for c in y) for y in self.directions), default=0)

    @property
    def average_floor(self) -> int:
        """Pigeonhole floor: the best shift captures at least the average."""
        total = len(self.A) * math.prod(hi - lo + 1 for lo, hi in self.box)
        return -(-total // max(self.nonzero_shifts, 1))


def waring_family(
    N: int, k: int, A: Sequence[int], box: Sequence[tuple[int, int]] | None = None
) -> WaringFamily:
    I = index_set(k)
    box = list(box) if box is not None else default_box(N, k)
    if len(box) != len(I):
        raise ParameterError(f"box needs {len(I)} ranges")
    if any(lo < 1 or hi > N or lo > hi for lo, hi in box):
        raise ParameterError("box ranges must lie in [1, N]")
    terms = phi_terms(I, N)
    hist = value_histogram(terms, box)
    s, score, nz = best_shift(hist, A)
    Aset = set(A)
    pts = []
    for x in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        val = sum(w * xi**a for (w, a), xi in zip(terms, x))
        if val - s in Aset:
            pts.append(x)
    if len(pts) != score:
        raise AssertionError("histogram and enumeration disagree")  # pragma: no cover
    if not pts:
        raise SubBoxEmpty("no box point lands in a shift of A")
    dirs = [nice_line_solve(x, N, k).y for x in pts]
    return WaringFamily(k, N, phi_base(N, k), box, tuple(sorted(A)), s, pts, dirs, nz)


def waring_lift(
    q: int, k: int, *, box: Sequence[tuple[int, int]] | None = None, verify: bool = True
) -> ConstructionReport:
    """Matching in F_q^{1+|I_k|}: points (z, x) for x in the family and
    z in [Z], direction (1, y_x).

    Z is the largest value with span + (Z-1) ||y||_inf < q, where span is the
    widest box side; then coordinates of two points on a common line differ by
    less than q and the integer argument carries over mod q."""
    if not is_prime(q):
        raise ParameterError("q must be prime")
    if k not in (2, 3):
        raise ParameterError("k must be 2 or 3")
    N = q // 4
    if N < 1:
        raise ParameterError("q too small")
    A = digit_construction(min(q**k, A_CAP), k).elements
    fam = waring_family(N, k, A, box)
    span = max(hi - lo for lo, hi in fam.box)
    Z = min(q, 1 + (q - 1 - span) // fam.sup_norm)
    F = make_field(q)
    pairs = []
    for x, y in zip(fam.points, fam.directions):
        xe = tuple(F(c) for c in x)
        ye = (F.one,) + tuple(F(c) for c in y)
        for z in range(1, Z + 1):
            pt = (F(z),) + xe
            pairs.append((pt, AffineLine(pt, ye)))
    m = Matching(F, 1 + len(fam.points[0]), pairs)
    return finish(
        "waring",
        m,
        Z * fam.average_floor,
        "Z ceil(|A| |box| / #shifts)",
        {"q": q, "k": k},
        verify=verify,
        extras={
            "N": N,
            "M": fam.M,
            "Z": Z,
            "shift": fam.shift,
            "family": len(fam.points),
            "sup_norm": fam.sup_norm,
            "C_k": fam.sup_norm / fam.M,
            "box": fam.box,
        },
    )
