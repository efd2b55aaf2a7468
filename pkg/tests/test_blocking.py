import random

import pytest

from fingeo.blocking import (
    LineCover,
    dualize,
    is_cover,
    minimalize_cover,
    nikodym_to_cover,
    verify_minimal_blocking_set,
    verify_minimal_cover,
)
from fingeo.errors import DimensionMismatch, MissingWitness, NotACover
from fingeo.ff import field_of_order, make_field
from fingeo.geom import ProjPoint, pg2_lines, pg2_points
from fingeo.matchgen import hermitian_unital
from fingeo.nikodym import (
    PointSet,
    attach,
    escape_config_from_points,
    is_nikodym,
    is_weak_nikodym,
    matching_complement,
    project_to_plane,
)


def _naive_minimal(F, lines):
    pts = pg2_points(F)
    cover = {p: [l for l in lines if l.contains(p)] for p in pts}
    if any(not ls for ls in cover.values()):
        return False
    return all(any(cover[p] == [l] for p in pts) for l in lines)


def _naive_blocking(F, points):
    lines = pg2_lines(F)
    hits = {l: [p for p in points if l.contains(p)] for l in lines}
    if any(not h for h in hits.values()):
        return False
    return all(any(hits[l] == [p] for l in lines) for p in points)


def _tiny_nikodym(q=13):
    cfg = escape_config_from_points([(n, m) for n in range(1, 5) for m in (1, 2)], 4, 2, 2, 1)
    return project_to_plane(cfg, q)


def test_full_plane_is_a_cover_but_not_minimal():
    F = make_field(3)
    cover = LineCover(F, pg2_lines(F))
    assert is_cover(cover)
    check = verify_minimal_cover(cover)
    assert not check.ok and check.redundant is not None
    small = minimalize_cover(cover)
    assert verify_minimal_cover(small).ok
    assert _naive_minimal(F, small.lines)


def test_missing_point_is_reported():
    F = make_field(3)
    lines = pg2_lines(F)
    # drop every line through the point [0:0:1]
    origin = ProjPoint((F.zero, F.zero, F.one))
    cover = LineCover(F, [l for l in lines if not l.contains(origin)])
    check = verify_minimal_cover(cover)
    assert not check.ok and check.uncovered == origin
    with pytest.raises(NotACover):
        minimalize_cover(cover)


def test_cover_from_projected_nikodym_set():
    ps = _tiny_nikodym()
    cover = nikodym_to_cover(ps)
    assert is_cover(cover)
    small = minimalize_cover(cover)
    assert verify_minimal_cover(small).ok
    assert len(small) >= ps.q**2 - ps.size
    assert _naive_minimal(ps.field, small.lines)
    dual = dualize(small)
    assert verify_minimal_blocking_set(dual, ps.field)


def test_cover_from_unital_complement():
    # over F_4 the complement of the unital is fully Nikodym
    comp = matching_complement(hermitian_unital(2).matching)
    check = is_nikodym(comp)
    assert check.ok
    small = minimalize_cover(nikodym_to_cover(attach(comp, check)))
    assert verify_minimal_cover(small).ok
    assert len(small) >= comp.q**2 - comp.size


def test_weak_witnesses_alone_do_not_make_a_cover():
    comp = matching_complement(hermitian_unital(3).matching)
    assert not is_nikodym(comp).ok
    with pytest.raises(MissingWitness):
        nikodym_to_cover(attach(comp, is_weak_nikodym(comp)))


def test_blocking_verifier_against_naive():
    rng = random.Random(2)
    for q in (2, 3, 4, 5):
        F = field_of_order(q)
        pts = pg2_points(F)
        for _ in range(20):
            sub = rng.sample(pts, rng.randint(1, len(pts)))
            assert verify_minimal_blocking_set(sub, F) == _naive_blocking(F, sub)
    F = make_field(3)
    line = pg2_lines(F)[0]
    # a line is a trivial blocking set: every other line meets it once
    assert verify_minimal_blocking_set([p for p in pg2_points(F) if line.contains(p)], F)


def test_minimal_cover_verifier_against_naive():
    rng = random.Random(5)
    for q in (2, 3, 4):
        F = field_of_order(q)
        lines = pg2_lines(F)
        for _ in range(20):
            sub = rng.sample(lines, rng.randint(1, len(lines)))
            assert verify_minimal_cover(LineCover(F, sub)).ok == _naive_minimal(F, sub)


def test_json_round_trip():
    ps = _tiny_nikodym()
    cover = minimalize_cover(nikodym_to_cover(ps))
    back = LineCover.from_json(cover.to_json())
    assert back.field == cover.field and back.lines == cover.lines


def test_cover_needs_planar_set_with_witnesses():
    F = make_field(3)
    with pytest.raises(DimensionMismatch):
        nikodym_to_cover(PointSet.full(F, 3))
    with pytest.raises(MissingWitness):
        nikodym_to_cover(PointSet.full(F, 2))
