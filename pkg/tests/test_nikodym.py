import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fingeo.errors import BudgetExceeded, InvariantViolation, NotWeakNikodym, PrimeTooSmall
from fingeo.ff import field_of_order, make_field
from fingeo.matchgen import hermitian_unital, paley_independent_set, paley_lift
from fingeo.nikodym import (
    LatticeConfig,
    PointSet,
    attach,
    escape_config_from_points,
    is_nikodym,
    is_weak_nikodym,
    lattice_escape_set,
    matching_complement,
    matching_from_weak_nikodym,
    product_lift,
    project_to_plane,
    projection_injective,
    projection_map,
    random_point_set,
    verify_escape,
)
from fingeo.geom import verify_induced_matching
from oracles import naive_escape_direction, naive_nikodym


def _units_grid(q):
    F = field_of_order(q)
    ps = PointSet.full(F, 2)
    for i in range(ps.bits.size):
        if 0 in ps.codes_of(i):
            ps.bits[i] = False
    return ps


def _witnesses_valid(ps, check, targets):
    for i in targets:
        v = check.directions[int(check.witness[i])]
        x = ps.codes_of(i)
        F = ps.field
        for t in range(1, ps.q):
            pt = [F.add_c(a, F.mul_c(t, b)) for a, b in zip(x, v)]
            if not ps.bits[ps.index(pt)]:
                return False
    return True


@pytest.mark.parametrize("q", [5, 7])
def test_units_grid_is_weak_but_not_strong(q):
    ps = _units_grid(q)
    weak = is_weak_nikodym(ps)
    assert weak.ok
    assert _witnesses_valid(ps, weak, np.flatnonzero(~ps.bits).tolist())
    strong = is_nikodym(ps)
    assert not strong.ok and strong.failing == (1, 1)
    assert naive_nikodym(ps, weak=True) and not naive_nikodym(ps, weak=False)


def test_units_grid_witness_directions():
    ps = _units_grid(5)
    check = is_weak_nikodym(ps)
    got = {ps.codes_of(int(i)): check.directions[int(check.witness[i])] for i in np.flatnonzero(~ps.bits)}
    assert got[(0, 0)] == (1, 1)
    assert got[(0, 3)] == (1, 0) and got[(2, 0)] == (0, 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (4, 2), (5, 2), (3, 3)]), st.floats(0.3, 0.95), st.integers(0, 2**31))
def test_verifier_matches_naive_search(qd, density, seed):
    q, d = qd
    ps = random_point_set(field_of_order(q), d, density, np.random.default_rng(seed))
    for weak in (True, False):
        check = (is_weak_nikodym if weak else is_nikodym)(ps, use_witnesses=False)
        assert check.ok == naive_nikodym(ps, weak)
        if not check.ok:
            assert naive_escape_direction(ps, check.failing) is None


def test_search_picks_lex_least_direction():
    ps = random_point_set(make_field(5), 2, 0.8, np.random.default_rng(4))
    check = is_nikodym(ps, use_witnesses=False)
    for i in range(ps.bits.size):
        if check.witness[i] >= 0:
            assert check.directions[check.witness[i]] == naive_escape_direction(ps, ps.codes_of(i))


def test_bad_witness_hints_are_not_trusted():
    ps = _units_grid(5)
    ps.set_witness(0, (1, 0))  # wrong for the origin: (1, 0) is removed
    check = is_weak_nikodym(ps)
    assert check.ok
    assert check.directions[check.witness[0]] == (1, 1)


def test_budget():
    ps = _units_grid(7)
    with pytest.raises(BudgetExceeded):
        is_nikodym(ps, use_witnesses=False, budget=10)


@pytest.mark.parametrize("p", [2, 3])
def test_dictionary_round_trip(p):
    m = hermitian_unital(p).matching
    comp = matching_complement(m)
    assert comp.size == comp.q**2 - m.size
    for hints in (True, False):
        check = is_weak_nikodym(comp, use_witnesses=hints)
        assert check.ok
    back = matching_from_weak_nikodym(comp, is_weak_nikodym(comp))
    assert verify_induced_matching(back) is None and back.size == m.size
    lifted = product_lift(comp)
    assert lifted.size == comp.size * comp.q
    assert is_nikodym(lifted).ok and is_nikodym(lifted, use_witnesses=False).ok


def test_product_lift_needs_weak_nikodym():
    F = make_field(3)
    with pytest.raises(NotWeakNikodym):
        product_lift(PointSet.empty(F, 2))


def test_serialisation(tmp_path):
    ps = attach(_units_grid(7), is_weak_nikodym(_units_grid(7)))
    back = PointSet.from_bytes(ps.to_bytes())
    assert back.field == ps.field and np.array_equal(back.bits, ps.bits)
    back.load_witness_json(ps.witness_json())
    assert all(back.witness_of(i) == ps.witness_of(i) for i in range(ps.bits.size))
    ext = attach(PointSet.full(field_of_order(9), 2), is_nikodym(PointSet.full(field_of_order(9), 2)))
    assert PointSet.from_bytes(ext.to_bytes()).field == field_of_order(9)


def _tiny():
    return escape_config_from_points([(n, m) for n in range(1, 5) for m in (1, 2)], 4, 2, 2, 1)


def test_escape_config_and_failures():
    cfg = _tiny()
    assert len(cfg.slopes) == cfg.ambient_size() == 8
    assert verify_escape(cfg) is None
    bad = LatticeConfig(4, 2, 2, 1, cfg.points, {**cfg.slopes, (1, 1): (0, 1)})
    f = verify_escape(bad)
    assert f is not None and f.v == (1, 1) and f.t == 1
    with pytest.raises(InvariantViolation):
        verify_escape(LatticeConfig(3, 2, 2, 1, frozenset(), {}))
    partial = LatticeConfig(4, 2, 2, 1, frozenset([(1, 1)]), {(1, 1): (0, 1)})
    assert verify_escape(partial).v == (1, 2)
    assert verify_escape(partial, require_full=False) is None


def test_config_json():
    cfg = _tiny()
    assert LatticeConfig.from_json(cfg.to_json()) == cfg


def test_projection_pipeline():
    cfg = _tiny()
    assert projection_injective(cfg, 13)
    ps = project_to_plane(cfg, 13)
    assert ps.size == 169 - 8
    assert is_nikodym(ps).ok and is_nikodym(ps, use_witnesses=False).ok
    phi = projection_map(cfg, 13)
    assert all(not ps.bits[phi(p)[0] * 13 + phi(p)[1]] for p in cfg.points)
    with pytest.raises(PrimeTooSmall):
        project_to_plane(cfg, 11)


def test_projection_witnesses_are_correct_without_search():
    ps = project_to_plane(_tiny(), 17)
    for i in range(ps.bits.size):
        v = ps.witness_of(i)
        x = ps.codes_of(i)
        assert all(ps.bits[((x[0] + t * v[0]) % 17) * 17 + (x[1] + t * v[1]) % 17] for t in range(1, 17))


def test_projection_injectivity_can_fail():
    cfg = _tiny()
    # with q tiny the box wraps around
    assert not projection_injective(cfg, 7)


def test_lattice_escape_set_small():
    cfg = lattice_escape_set(2, 16, z_range=1)
    assert (cfg.d, cfg.M, cfg.L, len(cfg.points)) == (13, 8, 2, 2304)
    assert verify_escape(cfg) is None
    assert cfg.N >= cfg.M * cfg.L
    # adding a point on some member's line is caught
    v, s = next(iter(sorted(cfg.slopes.items())))
    assert v[-1] < cfg.M
    w = tuple(a + b for a, b in zip(v, s))
    broken = LatticeConfig(cfg.N, cfg.M, cfg.L, cfg.d, cfg.points | {w}, cfg.slopes, cfg.default_slope)
    assert verify_escape(broken) is not None
