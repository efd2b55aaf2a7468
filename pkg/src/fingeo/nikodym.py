"""Nikodym and weak Nikodym sets in F_q^d, and the lattice configurations that
project to planar Nikodym sets.

A set N is Nikodym when every point x has a direction v with the punctured
line {x + t v : t != 0} inside N; weak Nikodym asks this only for x outside N.
Sets are stored as boolean arrays over F_q^d in row-major order (the first
coordinate is the most significant digit of the index).
"""

from __future__ import annotations

import itertools
import json
import struct
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .diffsets import digit_construction
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvariantViolation,
    NotWeakNikodym,
    ParameterError,
    PrimeTooSmall,
)
from .ff import FieldSpec, is_prime, make_field
from .geom import AffineLine, Matching, point_codes
from .matchgen.waring import waring_family
from .polyring import index_set

DEFAULT_BUDGET = 10**10
_MAGIC = b"FGPS1\n"


@dataclass
class PointSet:
    """A subset of F_q^d with optional witness directions.

    ``witness[i]`` indexes into ``directions`` (or is -1) for the point with
    row-major index i."""

    field: FieldSpec
    d: int
    bits: np.ndarray
    directions: list[tuple[int, ...]] = field(default_factory=list)
    witness: np.ndarray | None = None

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (self.field.q**self.d,):
            raise DimensionMismatch("bitset length must be q^d")

    @staticmethod
    def empty(spec: FieldSpec, d: int) -> PointSet:
        return PointSet(spec, d, np.zeros(spec.q**d, dtype=bool))

    @staticmethod
    def full(spec: FieldSpec, d: int) -> PointSet:
        return PointSet(spec, d, np.ones(spec.q**d, dtype=bool))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return int(self.bits.sum())

    def __len__(self) -> int:
        return self.size

    def weights(self) -> np.ndarray:
        return self.q ** np.arange(self.d - 1, -1, -1, dtype=np.int64)

    def index(self, codes: Sequence[int]) -> int:
        return int(np.dot(np.asarray(codes, dtype=np.int64), self.weights()))

    def codes_of(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            index, r = divmod(index, self.q)
            out.append(r)
        return tuple(reversed(out))

    def __contains__(self, pt) -> bool:
        codes = point_codes(pt) if pt and hasattr(pt[0], "code") else pt
        return bool(self.bits[self.index(codes)])

    def coordinate(self, idx: np.ndarray, i: int) -> np.ndarray:
        return (idx // self.q ** (self.d - 1 - i)) % self.q

    def set_witness(self, index: int, direction: Sequence[int]) -> None:
        if self.witness is None:
            self.witness = np.full(self.q**self.d, -1, dtype=np.int32)
        direction = tuple(direction)
        try:
            k = self.directions.index(direction)
        except ValueError:
            self.directions.append(direction)
            k = len(self.directions) - 1
        self.witness[index] = k

    def witness_of(self, index: int) -> tuple[int, ...] | None:
        if self.witness is None or self.witness[index] < 0:
            return None
        return self.directions[int(self.witness[index])]

    # serialisation
    def to_bytes(self) -> bytes:
        header = json.dumps(
            {"p": self.field.p, "t": self.field.t, "d": self.d, "modulus": list(self.field.modulus)},
            sort_keys=True,
        ).encode()
        return _MAGIC + struct.pack("<I", len(header)) + header + np.packbits(self.bits).tobytes()

    @staticmethod
    def from_bytes(data: bytes) -> PointSet:
        if not data.startswith(_MAGIC):
            raise ParameterError("not a point-set file")
        off = len(_MAGIC)
        (hlen,) = struct.unpack("<I", data[off : off + 4])
        head = json.loads(data[off + 4 : off + 4 + hlen])
        spec = FieldSpec.from_json(head)
        n = spec.q ** head["d"]
        bits = np.unpackbits(np.frombuffer(data[off + 4 + hlen :], dtype=np.uint8))[:n].astype(bool)
        return PointSet(spec, head["d"], bits)

    def witness_json(self) -> dict:
        if self.witness is None:
            return {"directions": [], "witness": {}}
        idx = np.flatnonzero(self.witness >= 0)
        return {
            "directions": [list(v) for v in self.directions],
            "witness": {str(int(i)): int(self.witness[i]) for i in idx},
        }

    def load_witness_json(self, obj: dict) -> None:
        self.directions = [tuple(v) for v in obj["directions"]]
        self.witness = np.full(self.q**self.d, -1, dtype=np.int32)
        for k, v in obj["witness"].items():
            self.witness[int(k)] = int(v)


@dataclass
class NikodymCheck:
    ok: bool
    failing: tuple[int, ...] | None
    directions: list[tuple[int, ...]]
    witness: np.ndarray  # per-point index into directions, -1 where not needed

    def __bool__(self) -> bool:
        return self.ok


def canonical_direction_codes(q: int, d: int) -> Iterator[tuple[int, ...]]:
    """Directions with first nonzero coordinate 1, in lex order of codes."""
    for c in range(d):
        for rest in itertools.product(range(q), repeat=d - c - 1):
            yield (0,) * c + (1,) + rest


def _escapes(n: PointSet, v: tuple[int, ...], X: np.ndarray) -> np.ndarray:
    """For each index in X, whether {x + t v : t != 0} lies inside n."""
    F = n.field
    q, d = n.q, n.d
    if len(X) == 0:
        return np.zeros(0, dtype=bool)
    nz = [i for i in range(d) if v[i]]
    w = n.weights()
    members = None
    if len(X) * (q - 1) > n.bits.size // 2:
        members = np.flatnonzero(n.bits)
    if members is None:
        # walk the line point by point
        coords = {i: n.coordinate(X, i) for i in nz}
        base = X.copy()
        for i in nz:
            base -= coords[i] * w[i]
        ok = np.ones(len(X), dtype=bool)
        for t in range(1, q):
            idx = base.copy()
            for i in nz:
                idx += F.vadd(coords[i], F.mul_c(t, v[i])) * w[i]
            ok &= n.bits[idx]
        return ok
    # count members per line of direction v and compare with q - 1
    c = nz[0]

    def line_key(idx: np.ndarray) -> np.ndarray:
        xc = n.coordinate(idx, c)
        key = idx - xc * w[c]
        for i in nz[1:]:
            xi = n.coordinate(idx, i)
            key += (F.vsub(xi, F.vmul(xc, v[i])) - xi) * w[i]
        return key

    counts = np.bincount(line_key(members), minlength=n.bits.size)
    return counts[line_key(X)] - n.bits[X] == q - 1


def _search(n: PointSet, targets: np.ndarray, use_witnesses: bool, budget: int) -> NikodymCheck:
    q, d = n.q, n.d
    directions: list[tuple[int, ...]] = []
    dir_id: dict[tuple[int, ...], int] = {}
    witness = np.full(q**d, -1, dtype=np.int32)

    def record(v: tuple[int, ...], idx: np.ndarray) -> None:
        k = dir_id.get(v)
        if k is None:
            k = dir_id[v] = len(directions)
            directions.append(v)
        witness[idx] = k

    remaining = targets
    if use_witnesses and n.witness is not None and len(remaining):
        hints = n.witness[remaining]
        verified = np.zeros(len(remaining), dtype=bool)
        for k in np.unique(hints[hints >= 0]).tolist():
            v = tuple(n.directions[k])
            if not any(v):
                continue
            sel = np.flatnonzero(hints == k)
            ok = _escapes(n, v, remaining[sel])
            record(v, remaining[sel[ok]])
            verified[sel[ok]] = True
        remaining = remaining[~verified]
    if len(remaining):
        ndirs = (q**d - 1) // (q - 1)
        estimate = ndirs * min(len(remaining) * (q - 1), q**d) * d
        if estimate > budget:
            raise BudgetExceeded(f"estimated {estimate:.3g} operations exceed the budget {budget:.3g}")
        for v in canonical_direction_codes(q, d):
            ok = _escapes(n, v, remaining)
            if ok.any():
                record(v, remaining[ok])
                remaining = remaining[~ok]
                if not len(remaining):
                    break
    if len(remaining):
        return NikodymCheck(False, n.codes_of(int(remaining.min())), directions, witness)
    return NikodymCheck(True, None, directions, witness)


def is_weak_nikodym(n: PointSet, *, use_witnesses: bool = True, budget: int = DEFAULT_BUDGET) -> NikodymCheck:
    """Every point outside n has a punctured line inside n.  Stored witnesses
    are checked first; the remaining points are searched over canonical
    directions in lex order."""
    return _search(n, np.flatnonzero(~n.bits), use_witnesses, budget)


def is_nikodym(n: PointSet, *, use_witnesses: bool = True, budget: int = DEFAULT_BUDGET) -> NikodymCheck:
    """Every point of F_q^d has a punctured line inside n."""
    return _search(n, np.arange(n.bits.size, dtype=np.int64), use_witnesses, budget)


def attach(n: PointSet, check: NikodymCheck) -> PointSet:
    """Copy of n carrying the witnesses found by a successful check."""
    out = PointSet(n.field, n.d, n.bits.copy(), list(check.directions), check.witness.copy())
    return out


def matching_complement(m: Matching) -> PointSet:
    """F_q^d minus the matching's points; each removed point keeps its line
    direction as witness."""
    n = PointSet.full(m.field, m.d)
    n.witness = np.full(n.bits.size, -1, dtype=np.int32)
    ids: dict[tuple[int, ...], int] = {}
    for pt, line in m.pairs:
        i = n.index(point_codes(pt))
        n.bits[i] = False
        v = point_codes(line.dir)
        if v not in ids:
            ids[v] = len(n.directions)
            n.directions.append(v)
        n.witness[i] = ids[v]
    return n


def matching_from_weak_nikodym(n: PointSet, check: NikodymCheck) -> Matching:
    """The induced matching read off a weak Nikodym witness map."""
    F = n.field
    pairs = []
    for i in np.flatnonzero(~n.bits).tolist():
        pt = tuple(F.from_code(c) for c in n.codes_of(i))
        v = tuple(F.from_code(c) for c in check.directions[int(check.witness[i])])
        pairs.append((pt, AffineLine(pt, v)))
    return Matching(F, n.d, pairs)


def product_lift(n: PointSet, *, budget: int = DEFAULT_BUDGET) -> PointSet:
    """N x F_q in one dimension more.  Points (x, a) with x outside N reuse
    x's witness with a zero appended; points with x in N use (0, ..., 0, 1)."""
    check = is_weak_nikodym(n, budget=budget)
    if not check.ok:
        raise NotWeakNikodym(f"no escaping line at {check.failing}")
    q, d = n.q, n.d
    bits = np.repeat(n.bits, q)
    dirs = [tuple(v) + (0,) for v in check.directions]
    unit = (0,) * d + (1,)
    dirs.append(unit)
    wit = np.repeat(check.witness, q)
    wit[bits] = len(dirs) - 1
    return PointSet(n.field, d + 1, bits, dirs, wit.astype(np.int32))


# Lattice configurations

@dataclass
class LatticeConfig:
    """Points in [N]^d x [M] with integer slopes (u, 1), |u|_inf <= L.

    ``slopes`` lists explicit slopes; every other ambient point uses
    ``default_slope`` (None means the configuration only claims slopes for
    the listed points)."""

    N: int
    M: int
    L: int
    d: int
    points: frozenset
    slopes: dict
    default_slope: tuple[int, ...] | None = None

    def slope(self, v: tuple[int, ...]) -> tuple[int, ...] | None:
        s = self.slopes.get(v)
        return s if s is not None else self.default_slope

    def in_ambient(self, v: Sequence[int]) -> bool:
        return all(1 <= c <= self.N for c in v[: self.d]) and 1 <= v[self.d] <= self.M

    def ambient_size(self) -> int:
        return self.N**self.d * self.M

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "L": self.L,
            "d": self.d,
            "points": sorted(list(p) for p in self.points),
            "slopes": [[list(v), list(s)] for v, s in sorted(self.slopes.items())],
            "default_slope": None if self.default_slope is None else list(self.default_slope),
        }

    @staticmethod
    def from_json(obj: dict) -> LatticeConfig:
        return LatticeConfig(
            int(obj["N"]),
            int(obj["M"]),
            int(obj["L"]),
            int(obj["d"]),
            frozenset(tuple(p) for p in obj["points"]),
            {tuple(v): tuple(s) for v, s in obj["slopes"]},
            None if obj.get("default_slope") is None else tuple(obj["default_slope"]),
        )


@dataclass(frozen=True)
class EscapeFailure:
    v: tuple[int, ...]
    t: int


def _check_slope_shape(cfg: LatticeConfig, s: tuple[int, ...]) -> None:
    if len(s) != cfg.d + 1 or s[-1] != 1 or any(abs(c) > cfg.L for c in s[:-1]):
        raise InvariantViolation(f"slope {s} is not in [-L, L]^d x {{1}}")


def verify_escape(cfg: LatticeConfig, *, require_full: bool = True) -> EscapeFailure | None:
    """Check that v + t s_v misses the points for every t != 0.

    Explicit slopes are checked point by point; the default slope is checked
    from the other side, by walking back from every point along it.  Both
    checks are exhaustive (the last slope coordinate is 1, so only
    |t| < M can stay in the ambient box)."""
    if cfg.N < cfg.M * cfg.L:
        raise InvariantViolation("need N >= M L")
    for p in cfg.points:
        if len(p) != cfg.d + 1 or not cfg.in_ambient(p):
            raise InvariantViolation(f"point {p} is outside the ambient box")
    pts = cfg.points
    for v, s in sorted(cfg.slopes.items()):
        _check_slope_shape(cfg, s)
        for t in range(1 - v[-1], cfg.M - v[-1] + 1):
            if t and tuple(a + t * b for a, b in zip(v, s)) in pts:
                return EscapeFailure(v, t)
    if cfg.default_slope is not None:
        s = cfg.default_slope
        _check_slope_shape(cfg, s)
        bad = []
        for p in pts:
            for t in range(p[-1] - cfg.M, p[-1]):
                if t:
                    v = tuple(a - t * b for a, b in zip(p, s))
                    if cfg.in_ambient(v) and v not in cfg.slopes:
                        bad.append(EscapeFailure(v, t))
        if bad:
            return min(bad, key=lambda f: (f.v, f.t))
    elif require_full and len(cfg.slopes) < cfg.ambient_size():
        for v in itertools.product(*([range(1, cfg.N + 1)] * cfg.d + [range(1, cfg.M + 1)])):
            if v not in cfg.slopes:
                return EscapeFailure(v, 0)
    return None


def escape_config_from_points(points: Iterable[Sequence[int]], N: int, M: int, L: int, d: int) -> LatticeConfig:
    """Give every ambient point the lex-least slope in [-L, L]^d x {1} that
    escapes the points (small ambient boxes only)."""
    pts = frozenset(tuple(p) for p in points)
    slopes = {}
    candidates = [u + (1,) for u in itertools.product(range(-L, L + 1), repeat=d)]
    for v in itertools.product(*([range(1, N + 1)] * d + [range(1, M + 1)])):
        for s in candidates:
            if all(
                tuple(a + t * b for a, b in zip(v, s)) not in pts
                for t in range(1 - v[-1], M - v[-1] + 1)
                if t
            ):
                slopes[v] = s
                break
        else:
            raise InvariantViolation(f"ambient point {v} has no escaping slope")
    cfg = LatticeConfig(N, M, L, d, pts, slopes)
    if verify_escape(cfg) is not None:
        raise AssertionError("escape search produced a bad slope")  # pragma: no cover
    return cfg


def lattice_escape_set(
    k: int,
    N: int,
    *,
    box: Sequence[tuple[int, int]] | None = None,
    z_range: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> LatticeConfig:
    """Lattice escape configuration from the Waring-form family.

    P_0 = [Z] x Gamma with slopes (1, y_x) has no integer line returning to
    it.  Then P = P_0 x [N] x [M']: points over P_0 get (s, 0, 1), every other
    ambient point gets (0, ..., 0, 1, 1).  L is the largest slope entry and
    M' = N // L."""
    if k not in (2, 3):
        raise ParameterError("k must be 2 or 3")
    dim = len(index_set(k))
    if box is None:
        box = [(1, N)] + [(1, 2)] * min(2, dim - 1) + [(1, 1)] * max(0, dim - 3)
    A = digit_construction(min((4 * N) ** k, 200_000), k).elements
    fam = waring_family(N, k, A, box)
    L = max(1, fam.sup_norm)
    Mc = N // L
    if Mc < 1:
        raise ParameterError(f"slopes up to {L} exceed N = {N}")
    Z = N if z_range is None else z_range
    P0 = [(z,) + x for x in fam.points for z in range(1, Z + 1)]
    s0 = {(z,) + x: (1,) + y for x, y in zip(fam.points, fam.directions) for z in range(1, Z + 1)}
    size = len(P0) * N * Mc
    if size * Mc > budget:
        raise BudgetExceeded(f"configuration with {size} points is over budget")
    d = len(P0[0]) + 1
    points = []
    slopes = {}
    for u in P0:
        su = s0[u] + (0, 1)
        for n in range(1, N + 1):
            for m in range(1, Mc + 1):
                v = u + (n, m)
                points.append(v)
                slopes[v] = su
    cfg = LatticeConfig(N, Mc, L, d, frozenset(points), slopes, (0,) * (d - 1) + (1, 1))
    bad = verify_escape(cfg)
    if bad is not None:
        raise InvariantViolation(f"escape fails at {bad}")
    return cfg


def projection_map(cfg: LatticeConfig, q: int):
    base = 3 * cfg.N

    def phi(v: Sequence[int]) -> tuple[int, int]:
        return sum(c * base**i for i, c in enumerate(v[: cfg.d])) % q, v[cfg.d] % q

    return phi


def projection_injective(cfg: LatticeConfig, q: int) -> bool:
    """Enumerate B = [-(N-1), 2N]^d x [-(M-1), 2M] and check phi is injective."""
    phi = projection_map(cfg, q)
    seen = set()
    ranges = [range(-(cfg.N - 1), 2 * cfg.N + 1)] * cfg.d + [range(-(cfg.M - 1), 2 * cfg.M + 1)]
    for v in itertools.product(*ranges):
        img = phi(v)
        if img in seen:
            return False
        seen.add(img)
    return True


def project_to_plane(cfg: LatticeConfig, q: int, *, check: bool = True) -> PointSet:
    """F_q^2 minus phi(P), phi(n, m) = (sum n_i (3N)^(i-1), m) mod q.

    Witnesses follow the projection argument: phi(s_v) for w = phi(v) in the
    image of the ambient box, otherwise a vertical or horizontal line."""
    if not is_prime(q):
        raise ParameterError("q must be prime")
    if q <= (3 * cfg.N) ** cfg.d:
        raise PrimeTooSmall(f"need q > (3N)^d = {(3 * cfg.N) ** cfg.d}")
    if check:
        bad = verify_escape(cfg)
        if bad is not None:
            raise InvariantViolation(f"escape fails at {bad}")
    F = make_field(q)
    phi = projection_map(cfg, q)
    out = PointSet.full(F, 2)
    for p in cfg.points:
        a, b = phi(p)
        out.bits[a * q + b] = False
    preimage = {}
    for v in itertools.product(*([range(1, cfg.N + 1)] * cfg.d + [range(1, cfg.M + 1)])):
        preimage[phi(v)] = v
    for a in range(q):
        for b in range(q):
            v = preimage.get((a, b))
            if v is not None:
                s = cfg.slope(v)
                da, db = phi(s)
                direction = (1, db * pow(da, -1, q) % q) if da else (0, 1)
            elif not any((a, y) in preimage for y in range(1, cfg.M + 1)):
                direction = (0, 1)
            else:
                direction = (1, 0)
            out.set_witness(a * q + b, direction)
    return out


def random_point_set(spec: FieldSpec, d: int, density: float, rng: np.random.Generator) -> PointSet:
    return PointSet(spec, d, rng.random(spec.q**d) < density)
