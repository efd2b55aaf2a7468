"""Line covers of PG(2, q) built from planar Nikodym sets, and their duals,
which are minimal blocking sets.

Every affine point v has a witness line l_v whose other affine points lie in
the Nikodym set N.  The lines {l_v} together with the line at infinity cover
the plane, and for v outside N the line l_v is the only one through v, so any
minimal subcover keeps at least q^2 - |N| lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, MissingWitness, NotACover
from .ff import FieldSpec
from .geom import (
    AffineLine,
    ProjLine,
    ProjPoint,
    affine_to_projective_line,
    line_at_infinity,
    pg2_lines,
    pg2_points,
)
from .nikodym import PointSet


@dataclass
class LineCover:
    field: FieldSpec
    lines: list[ProjLine]

    def __len__(self) -> int:
        return len(self.lines)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "lines": [[list(x.coeffs) for x in l.coords] for l in self.lines]}

    @staticmethod
    def from_json(obj: dict) -> LineCover:
        F = FieldSpec.from_json(obj["field"])
        return LineCover(F, [ProjLine(tuple(F.from_coeffs(c) for c in l)) for l in obj["lines"]])


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    uncovered: ProjPoint | None = None
    redundant: ProjLine | None = None

    def __bool__(self) -> bool:
        return self.ok


class _Incidence:
    """Point-line incidence of PG(2, q) as a boolean matrix (lines x points)."""

    def __init__(self, F: FieldSpec):
        self.points = pg2_points(F)
        self.point_index = {p.key(): i for i, p in enumerate(self.points)}
        P = np.array([p.key() for p in self.points], dtype=np.int64)
        self.P = P
        self.F = F

    def rows(self, lines: Sequence[ProjLine]) -> np.ndarray:
        F = self.F
        out = np.zeros((len(lines), len(self.points)), dtype=bool)
        for r, l in enumerate(lines):
            a, b, c = (x.code for x in l.coords)
            acc = F.vadd(F.vadd(F.vmul(self.P[:, 0], a), F.vmul(self.P[:, 1], b)), F.vmul(self.P[:, 2], c))
            out[r] = acc == 0
        return out


def nikodym_to_cover(n: PointSet) -> LineCover:
    """Witness lines of every affine point, projectively completed, plus the
    line at infinity; duplicates removed, sorted."""
    if n.d != 2:
        raise DimensionMismatch("covers need a planar set")
    F = n.field
    lines = {line_at_infinity(F).key(): line_at_infinity(F)}
    for i in range(n.bits.size):
        v = n.witness_of(i)
        if v is None:
            raise MissingWitness(f"point {n.codes_of(i)} has no witness")
        base = tuple(F.from_code(c) for c in n.codes_of(i))
        pl = affine_to_projective_line(AffineLine(base, tuple(F.from_code(c) for c in v)))
        lines.setdefault(pl.key(), pl)
    return LineCover(F, [lines[k] for k in sorted(lines)])


def is_cover(cover: LineCover) -> CoverCheck:
    inc = _Incidence(cover.field)
    hit = inc.rows(cover.lines).any(axis=0) if cover.lines else np.zeros(len(inc.points), dtype=bool)
    missing = np.flatnonzero(~hit)
    if len(missing):
        return CoverCheck(False, uncovered=inc.points[int(missing[0])])
    return CoverCheck(True)


def minimalize_cover(cover: LineCover) -> LineCover:
    """Drop lines in lex order whenever every point on them is covered twice.

    One pass suffices: a kept line had a point covered only by itself, and
    later drops never add coverage."""
    inc = _Incidence(cover.field)
    lines = sorted(cover.lines)
    rows = inc.rows(lines)
    counts = rows.sum(axis=0)
    if (counts == 0).any():
        raise NotACover(f"point {inc.points[int(np.flatnonzero(counts == 0)[0])].coords} is uncovered")
    keep = []
    for line, row in zip(lines, rows):
        if (counts[row] >= 2).all():
            counts[row] -= 1
        else:
            keep.append(line)
    return LineCover(cover.field, keep)


def verify_minimal_cover(cover: LineCover) -> CoverCheck:
    """Covers every point, and every line has a point no other line covers."""
    inc = _Incidence(cover.field)
    rows = inc.rows(cover.lines)
    counts = rows.sum(axis=0) if len(cover.lines) else np.zeros(len(inc.points), dtype=np.int64)
    missing = np.flatnonzero(counts == 0)
    if len(missing):
        return CoverCheck(False, uncovered=inc.points[int(missing[0])])
    for line, row in zip(cover.lines, rows):
        if not (counts[row] == 1).any():
            return CoverCheck(False, redundant=line)
    return CoverCheck(True)


def dualize(cover: LineCover) -> list[ProjPoint]:
    """The line [a:b:c] becomes the point [a:b:c]."""
    return sorted(ProjPoint(l.coords) for l in cover.lines)


def verify_minimal_blocking_set(points: Iterable[ProjPoint], F: FieldSpec) -> bool:
    """Meets every line, and each point lies on a line meeting the set only there."""
    pts = list(points)
    if not pts:
        return False
    lines = pg2_lines(F)
    inc = _Incidence(F)
    cols = [inc.point_index[p.key()] for p in pts]
    rows = inc.rows(lines)[:, cols]
    per_line = rows.sum(axis=1)
    if (per_line == 0).any():
        return False
    tangent = rows & (per_line == 1)[:, None]
    return bool(tangent.any(axis=0).all())
