"""Affine points, lines and hyperplanes over F_q, plus the induced-matching
verifiers.

A point is a tuple of ``FieldElem``.  Lines and hyperplanes are canonicalised on
construction, so two of them compare equal exactly when they have the same
point set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, ParameterError, ZeroDirection
from .ff import FieldElem, FieldSpec

Point = tuple  # tuple[FieldElem, ...]


def point(spec: FieldSpec, *codes: int) -> Point:
    """Build a point from integer codes."""
    return tuple(spec.from_code(c) for c in codes)


def point_codes(p: Sequence[FieldElem]) -> tuple[int, ...]:
    return tuple(x.code for x in p)


def _pivot(v: Sequence[FieldElem]) -> int:
    for i, x in enumerate(v):
        if x.code:
            return i
    raise ZeroDirection("direction vector is zero")


def normalize_direction(v: Sequence[FieldElem]) -> tuple:
    """Scale v so its first nonzero coordinate is 1."""
    c = _pivot(v)
    s = v[c].inverse()
    return tuple(x * s for x in v)


@dataclass(frozen=True)
class AffineLine:
    """The line {base + t*dir}.  After construction ``dir`` has first nonzero
    coordinate 1 and ``base`` is the code-lex-least point of the line."""

    base: tuple
    dir: tuple

    def __post_init__(self):
        if len(self.base) != len(self.dir):
            raise DimensionMismatch("base and direction lengths differ")
        v = normalize_direction(self.dir)
        c = _pivot(v)
        # Coordinates before the pivot are constant along the line and the
        # pivot coordinate takes every value, so the least point has a zero there.
        b0 = self.base[c]
        base = tuple(b - b0 * x for b, x in zip(self.base, v))
        object.__setattr__(self, "dir", v)
        object.__setattr__(self, "base", base)

    @property
    def field(self) -> FieldSpec:
        return self.dir[0].field

    @property
    def dim(self) -> int:
        return len(self.dir)

    def key(self) -> tuple:
        return point_codes(self.base) + point_codes(self.dir)

    def points(self) -> list[tuple]:
        return [tuple(b + t * v for b, v in zip(self.base, self.dir)) for t in self.field.elements()]

    def __repr__(self) -> str:
        return f"AffineLine(base={list(self.base)}, dir={list(self.dir)})"


def line_through(p: Sequence[FieldElem], v: Sequence[FieldElem]) -> AffineLine:
    return AffineLine(tuple(p), tuple(v))


def on_line(p: Sequence[FieldElem], line: AffineLine) -> bool:
    if len(p) != line.dim:
        raise DimensionMismatch("point and line dimensions differ")
    c = _pivot(line.dir)
    t = p[c] - line.base[c]
    return all(pi == b + t * v for pi, b, v in zip(p, line.base, line.dir))


@dataclass(frozen=True)
class Hyperplane:
    """{x : normal . x = constant}, normal scaled to first nonzero coordinate 1."""

    normal: tuple
    constant: FieldElem

    def __post_init__(self):
        c = _pivot(self.normal)
        s = self.normal[c].inverse()
        object.__setattr__(self, "normal", tuple(x * s for x in self.normal))
        object.__setattr__(self, "constant", self.constant * s)

    @property
    def field(self) -> FieldSpec:
        return self.constant.field

    @property
    def dim(self) -> int:
        return len(self.normal)

    def key(self) -> tuple:
        return point_codes(self.normal) + (self.constant.code,)

    def contains(self, p: Sequence[FieldElem]) -> bool:
        if len(p) != self.dim:
            raise DimensionMismatch("point and hyperplane dimensions differ")
        acc = self.field.zero
        for a, x in zip(self.normal, p):
            acc = acc + a * x
        return acc == self.constant

    def points(self) -> list[tuple]:
        F = self.field
        c = _pivot(self.normal)
        out = []
        others = [i for i in range(self.dim) if i != c]
        for vals in itertools.product(list(F.elements()), repeat=self.dim - 1):
            x = [None] * self.dim
            acc = self.constant
            for i, val in zip(others, vals):
                x[i] = val
                acc = acc - self.normal[i] * val
            x[c] = acc
            out.append(tuple(x))
        return out


@dataclass
class Matching:
    """Point-line pairs (p_i, l_i) in F_q^d with p_i on l_i."""

    field: FieldSpec
    d: int
    pairs: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def points(self) -> list[tuple]:
        return [p for p, _ in self.pairs]

    @property
    def lines(self) -> list[AffineLine]:
        return [l for _, l in self.pairs]

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(points, bases, directions) as int64 code arrays of shape (m, d)."""
        m = len(self.pairs)
        P = np.zeros((m, self.d), dtype=np.int64)
        B = np.zeros((m, self.d), dtype=np.int64)
        V = np.zeros((m, self.d), dtype=np.int64)
        for i, (p, l) in enumerate(self.pairs):
            P[i] = point_codes(p)
            B[i] = point_codes(l.base)
            V[i] = point_codes(l.dir)
        return P, B, V

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "d": self.d,
            "pairs": [
                {
                    "point": [list(x.coeffs) for x in p],
                    "base": [list(x.coeffs) for x in l.base],
                    "dir": [list(x.coeffs) for x in l.dir],
                }
                for p, l in self.pairs
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> Matching:
        F = FieldSpec.from_json(obj["field"])
        d = int(obj["d"])
        pairs = []
        for rec in obj["pairs"]:
            p = tuple(F.from_coeffs(c) for c in rec["point"])
            b = tuple(F.from_coeffs(c) for c in rec["base"])
            v = tuple(F.from_coeffs(c) for c in rec["dir"])
            if len(p) != d or len(b) != d:
                raise DimensionMismatch("pair dimension does not match d")
            pairs.append((p, AffineLine(b, v)))
        return Matching(F, d, pairs)


@dataclass
class HyperplaneMatching:
    field: FieldSpec
    d: int
    pairs: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "d": self.d,
            "kind": "hyperplane",
            "pairs": [
                {
                    "point": [list(x.coeffs) for x in p],
                    "normal": [list(x.coeffs) for x in h.normal],
                    "constant": list(h.constant.coeffs),
                }
                for p, h in self.pairs
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> HyperplaneMatching:
        F = FieldSpec.from_json(obj["field"])
        pairs = []
        for rec in obj["pairs"]:
            p = tuple(F.from_coeffs(c) for c in rec["point"])
            n = tuple(F.from_coeffs(c) for c in rec["normal"])
            pairs.append((p, Hyperplane(n, F.from_coeffs(rec["constant"]))))
        return HyperplaneMatching(F, int(obj["d"]), pairs)


@dataclass(frozen=True, order=True)
class Violation:
    """Point i lies on line j although i != j, or (i == j) point i is off its own line."""

    i: int
    j: int


def _validate(field_: FieldSpec, d: int, pairs) -> None:
    for p, l in pairs:
        if len(p) != d or len(l.dir if isinstance(l, AffineLine) else l.normal) != d:
            raise DimensionMismatch("pair dimension does not match d")
        for x in p:
            if x.field != field_:
                raise FieldMismatch("point coordinate from another field")


def _row_ids(A: np.ndarray, B: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer ids for the rows of A and B, equal exactly when rows are equal.
    Rows are read as base-q numbers when that fits in int64."""
    d = A.shape[1]
    if q**d < 2**62:
        w = np.array([q**k for k in range(d)], dtype=np.int64)
        return A @ w, B @ w
    _, ids = np.unique(np.vstack([A, B]), axis=0, return_inverse=True)
    ids = ids.reshape(-1)
    return ids[: len(A)], ids[len(A) :]


def find_violations(m: Matching, limit: int | None = None) -> list[Violation]:
    """All incidences that break the induced property, sorted.

    Lines are grouped by direction.  For a direction v with pivot c, the point
    x lies on the line with canonical base b exactly when x - x_c * v == b.
    """
    _validate(m.field, m.d, m.pairs)
    F = m.field
    P, B, V = m.arrays()
    out: list[tuple[int, int]] = []
    if len(P) == 0:
        return []
    incident_self = np.zeros(len(P), dtype=bool)
    groups: dict[tuple, list[int]] = {}
    for j in range(len(V)):
        groups.setdefault(tuple(V[j]), []).append(j)
    for vkey, js in groups.items():
        v = np.array(vkey, dtype=np.int64)
        c = int(np.flatnonzero(v)[0])
        proj = F.vsub(P, F.vmul(P[:, c : c + 1], v[None, :]))
        pid, lid = _row_ids(proj, B[js], F.q)
        order = np.argsort(pid, kind="stable")
        lo = np.searchsorted(pid[order], lid, side="left")
        hi = np.searchsorted(pid[order], lid, side="right")
        for j, a, b in zip(js, lo.tolist(), hi.tolist()):
            for i in order[a:b].tolist():
                if i == j:
                    incident_self[j] = True
                else:
                    out.append((i, j))
    out.extend((j, j) for j in np.flatnonzero(~incident_self).tolist())
    out.sort()
    if limit is not None:
        out = out[:limit]
    return [Violation(i, j) for i, j in out]


def verify_induced_matching(m: Matching) -> Violation | None:
    """None if the matching is induced, else the lex-least violation."""
    v = find_violations(m, limit=1)
    return v[0] if v else None


def find_hyperplane_violations(m: HyperplaneMatching, limit: int | None = None) -> list[Violation]:
    _validate(m.field, m.d, m.pairs)
    F = m.field
    n = len(m.pairs)
    if n == 0:
        return []
    P = np.array([point_codes(p) for p, _ in m.pairs], dtype=np.int64)
    out = []
    for j, (_, h) in enumerate(m.pairs):
        acc = np.zeros(n, dtype=np.int64)
        for k, a in enumerate(h.normal):
            if a.code:
                acc = F.vadd(acc, F.vmul(P[:, k], a.code))
        hits = np.flatnonzero(acc == h.constant.code).tolist()
        if j not in hits:
            out.append((j, j))
        out.extend((i, j) for i in hits if i != j)
    out.sort()
    if limit is not None:
        out = out[:limit]
    return [Violation(i, j) for i, j in out]


def verify_point_hyperplane_matching(m: HyperplaneMatching) -> Violation | None:
    v = find_hyperplane_violations(m, limit=1)
    return v[0] if v else None


@dataclass(frozen=True)
class BoundReport:
    size: int
    bound: float
    margin: float
    within: bool


def _within_sqrt_bound(size: int, q: int, exponent_twice: int) -> bool:
    """size <= q^(exponent_twice/2) + q, decided in integers."""
    excess = size - q
    return excess <= 0 or excess * excess <= q**exponent_twice


def vinh_bound_check(m: Matching | HyperplaneMatching) -> BoundReport:
    """Compare the size with the incidence bound: q^{3/2}+q for point-line
    matchings in the plane, q^{(d+1)/2}+q for point-hyperplane matchings."""
    q = m.field.q
    if isinstance(m, HyperplaneMatching):
        twice = m.d + 1
    else:
        if m.d != 2:
            raise ParameterError("the point-line bound applies in the plane only")
        twice = 3
    bound = q ** (twice / 2) + q
    return BoundReport(m.size, bound, bound - m.size, _within_sqrt_bound(m.size, q, twice))


# The projective plane PG(2, q).  Homogeneous triples are scaled so that the
# last nonzero coordinate is 1.

def normalize_projective(v: Sequence[FieldElem]) -> tuple:
    for x in reversed(v):
        if x.code:
            s = x.inverse()
            return tuple(y * s for y in v)
    raise ZeroDirection("zero homogeneous vector")


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize_projective(self.coords))

    def key(self) -> tuple:
        return point_codes(self.coords)

    def __lt__(self, other: ProjPoint) -> bool:
        return self.key() < other.key()


@dataclass(frozen=True)
class ProjLine:
    """{[x:y:z] : a x + b y + c z = 0} for coords (a, b, c)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize_projective(self.coords))

    def key(self) -> tuple:
        return point_codes(self.coords)

    def __lt__(self, other: ProjLine) -> bool:
        return self.key() < other.key()

    def contains(self, pt: ProjPoint) -> bool:
        a, b, c = self.coords
        x, y, z = pt.coords
        return (a * x + b * y + c * z).code == 0


def pg2_points(spec: FieldSpec) -> list[ProjPoint]:
    """All q^2+q+1 points, sorted by canonical coordinates."""
    F = spec
    els = list(F.elements())
    out = [ProjPoint((x, y, F.one)) for x in els for y in els]
    out += [ProjPoint((x, F.one, F.zero)) for x in els]
    out.append(ProjPoint((F.one, F.zero, F.zero)))
    return sorted(out)


def pg2_lines(spec: FieldSpec) -> list[ProjLine]:
    """All q^2+q+1 lines, in the same canonical form as points (duality)."""
    return [ProjLine(p.coords) for p in pg2_points(spec)]


def projective_line_points(line: ProjLine) -> list[ProjPoint]:
    F = line.coords[0].field
    return [pt for pt in pg2_points(F) if line.contains(pt)]


def affine_to_projective_line(line: AffineLine) -> ProjLine:
    """Projective completion of a planar affine line."""
    if line.dim != 2:
        raise DimensionMismatch("projective completion needs a planar line")
    (x0, y0), (dx, dy) = line.base, line.dir
    # dy*x - dx*y - (dy*x0 - dx*y0)*z = 0
    return ProjLine((dy, -dx, -(dy * x0 - dx * y0)))


def line_at_infinity(spec: FieldSpec) -> ProjLine:
    return ProjLine((spec.zero, spec.zero, spec.one))


def enumerate_directions(spec: FieldSpec, d: int) -> list[tuple]:
    """Canonical directions (first nonzero = 1) in code-lex order."""
    out = []
    els = list(spec.elements())
    for c in range(d):
        for rest in itertools.product(els, repeat=d - c - 1):
            out.append((spec.zero,) * c + (spec.one,) + rest)
    return out


def count_directions(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)
