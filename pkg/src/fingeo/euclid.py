"""Exact-rational point-line configurations in the unit cube.

A lattice configuration P in [N]^d x [M] with slopes (u_p, 1), |u_p| <= L and
LM <= N maps linearly to [0,1]^{d+1} by (n, m) -> (n/N, L m/N).  Because no
p' lies on p + Z s_p, every point stays at sup-distance >= 1/(2N) from every
other point's line.  Everything here is Fraction arithmetic.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .diffsets import max_power_free_exact
from .errors import DimensionMismatch, InvariantViolation, ZeroDirection
from .matchgen.planar import ruzsa_integer_points, ruzsa_sizes
from .nikodym import LatticeConfig

Vec = tuple[Fraction, ...]


def _vec(xs: Iterable) -> Vec:
    return tuple(Fraction(x) for x in xs)


def _prepare(p: Sequence, base: Sequence, direction: Sequence) -> tuple[Vec, Vec]:
    if not (len(p) == len(base) == len(direction)):
        raise DimensionMismatch("point, base and direction differ in length")
    d = _vec(direction)
    if not any(d):
        raise ZeroDirection("line direction is zero")
    w = tuple(Fraction(a) - Fraction(b) for a, b in zip(p, base))
    return w, d


def _sup_at(w: Vec, d: Vec, t: Fraction) -> Fraction:
    return max(abs(wi - t * di) for wi, di in zip(w, d))


def dinf_argmin(p: Sequence, base: Sequence, direction: Sequence) -> tuple[Fraction, Fraction]:
    """(min_t |p - base - t dir|_inf, a minimising t).

    The objective is the upper envelope of the 2D lines +-(w_i - t d_i); it is
    convex and unbounded in both directions, so its minimum sits where two of
    those lines with different slopes cross.  All crossings are tried."""
    w, d = _prepare(p, base, direction)
    lines = [(wi, -di) for wi, di in zip(w, d)] + [(-wi, di) for wi, di in zip(w, d)]
    best: tuple[Fraction, Fraction] | None = None
    for (a1, b1), (a2, b2) in itertools.combinations(lines, 2):
        if b1 == b2:
            continue
        t = (a1 - a2) / (b2 - b1)
        val = _sup_at(w, d, t)
        if best is None or (val, t) < best:
            best = (val, t)
    assert best is not None  # a nonzero direction gives lines of both signs
    return best


def dinf_point_line(p: Sequence, base: Sequence, direction: Sequence) -> Fraction:
    """Exact sup-norm distance from p to the line base + R direction."""
    return dinf_argmin(p, base, direction)[0]


def dinf_envelope(p: Sequence, base: Sequence, direction: Sequence) -> Fraction:
    """Same distance, computed independently: build the upper envelope of the
    lines sorted by slope, then walk its breakpoints until the slope turns
    nonnegative."""
    w, d = _prepare(p, base, direction)
    top: dict[Fraction, Fraction] = {}
    for wi, di in zip(w, d):
        for a, b in ((wi, -di), (-wi, di)):
            if b not in top or a > top[b]:
                top[b] = a
    hull: list[tuple[Fraction, Fraction]] = []  # (slope, intercept), slopes increasing
    for b in sorted(top):
        a = top[b]
        while len(hull) >= 2:
            (b1, a1), (b2, a2) = hull[-2], hull[-1]
            # the middle line never reaches the top if the outer two cross above it
            if (a2 - a1) * (b - b1) <= (b2 - b1) * (a - a1):
                hull.pop()
            else:
                break
        hull.append((b, a))
    for k, (b, a) in enumerate(hull):
        if b == 0:
            return a
        if b > 0:
            bp, ap = hull[k - 1]
            t = (ap - a) / (b - bp)
            return a + b * t
    raise AssertionError("envelope has no rising part")  # pragma: no cover


@dataclass
class EuclidConfig:
    """Points in [0,1]^dim, each on its own line base = point, given direction."""

    dim: int
    points: list[Vec]
    directions: list[Vec]
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.points) != len(self.directions):
            raise DimensionMismatch("one direction per point")
        for p, v in zip(self.points, self.directions):
            if len(p) != self.dim or len(v) != self.dim:
                raise DimensionMismatch(f"vectors must have length {self.dim}")
            if not any(v):
                raise ZeroDirection("line direction is zero")

    def __len__(self) -> int:
        return len(self.points)

    def in_unit_cube(self) -> bool:
        return all(0 <= c <= 1 for p in self.points for c in p)

    def to_json(self) -> dict:
        def enc(v: Vec) -> list[str]:
            return [f"{c.numerator}/{c.denominator}" for c in v]

        return {
            "dim": self.dim,
            "source": self.source,
            "pairs": [{"point": enc(p), "direction": enc(v)} for p, v in zip(self.points, self.directions)],
        }

    @staticmethod
    def from_json(obj: dict) -> EuclidConfig:
        pairs = obj["pairs"]
        return EuclidConfig(
            int(obj["dim"]),
            [_vec(pr["point"]) for pr in pairs],
            [_vec(pr["direction"]) for pr in pairs],
            dict(obj.get("source", {})),
        )


@dataclass(frozen=True)
class Separation:
    """Ok when ``ok``; otherwise the first (i, j) in lex order with
    d(p_i, l_j) < floor and that distance.  ``minimum`` is the smallest
    off-diagonal distance seen (None for fewer than two pairs)."""

    ok: bool
    i: int | None = None
    j: int | None = None
    value: Fraction | None = None
    minimum: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def certify_separation(cfg: EuclidConfig, floor: Fraction) -> Separation:
    floor = Fraction(floor)
    lowest = None
    for i, p in enumerate(cfg.points):
        for j, (b, v) in enumerate(zip(cfg.points, cfg.directions)):
            if i == j:
                continue
            dist = dinf_point_line(p, b, v)
            if dist < floor:
                return Separation(False, i, j, dist, dist if lowest is None else min(lowest, dist))
            lowest = dist if lowest is None else min(lowest, dist)
    return Separation(True, minimum=lowest)


def distances_csv(cfg: EuclidConfig) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["i", "j", "dinf"])
    for i, p in enumerate(cfg.points):
        for j, (b, v) in enumerate(zip(cfg.points, cfg.directions)):
            if i != j:
                dist = dinf_point_line(p, b, v)
                out.writerow([i, j, f"{dist.numerator}/{dist.denominator}"])
    return buf.getvalue()


def _check_members(cfg: LatticeConfig) -> None:
    if cfg.N < cfg.M * cfg.L:
        raise InvariantViolation("need N >= M L")
    pts = cfg.points
    for p in sorted(pts):
        s = cfg.slope(p)
        if s is None:
            raise InvariantViolation(f"point {p} has no slope")
        if len(s) != cfg.d + 1 or s[-1] != 1 or any(abs(c) > cfg.L for c in s[:-1]):
            raise InvariantViolation(f"slope {s} of {p} is not in [-L, L]^d x {{1}}")
        for t in range(1 - p[-1], cfg.M - p[-1] + 1):
            if t and tuple(a + t * b for a, b in zip(p, s)) in pts:
                raise InvariantViolation(f"point {p} sees another point at step {t}")


def lattice_to_euclid(cfg: LatticeConfig, *, certify: bool = True) -> EuclidConfig:
    """Image of the configuration under (n, m) -> (n/N, L m/N), each point
    paired with the image of its slope.  With ``certify`` the all-pairs
    separation at 1/(2N) is checked before returning."""
    _check_members(cfg)
    scale = [Fraction(1, cfg.N)] * cfg.d + [Fraction(cfg.L, cfg.N)]
    order = sorted(cfg.points)
    pts = [tuple(c * a for c, a in zip(scale, p)) for p in order]
    dirs = [tuple(c * a for c, a in zip(scale, cfg.slope(p))) for p in order]
    out = EuclidConfig(cfg.d + 1, pts, dirs, {"N": cfg.N, "M": cfg.M, "L": cfg.L})
    if not out.in_unit_cube():
        raise InvariantViolation("image leaves the unit cube")
    if certify:
        sep = certify_separation(out, Fraction(1, 2 * cfg.N))
        if not sep:
            raise InvariantViolation(f"pair ({sep.i}, {sep.j}) is only {sep.value} apart")
    return out


def proof_case(p: Sequence[int], p2: Sequence[int], s: Sequence[int], L: int, t: Fraction) -> int:
    """Which branch of the separation argument covers the step t from p
    towards p2: 1 if the last coordinate alone is more than 1/(2L) off,
    2 otherwise (then the integer step p2_last - p_last is the anchor)."""
    drift = abs(Fraction(p2[-1] - p[-1]) - t * s[-1])
    return 1 if drift > Fraction(1, 2 * L) else 2


def ruzsa_lattice(q: int, A: Sequence[int] | None = None) -> LatticeConfig:
    """Planar configuration {(x, y) : 2x - y^2 in A} in [q/3] x [sqrt(q)/2]
    with slopes (y, 1) and L = M.  A step t along (y, 1) changes 2x - y^2 by
    -t^2, so square-difference-freeness of A keeps the line clear."""
    N, M = ruzsa_sizes(q)
    if A is None:
        A = max_power_free_exact(q // 10, 2).elements
    pts = ruzsa_integer_points(q, A)
    return LatticeConfig(N, M, M, 1, frozenset(pts), {(x, y): (y, 1) for x, y in pts})
