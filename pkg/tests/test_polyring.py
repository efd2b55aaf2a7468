import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fingeo.errors import BudgetInfeasible, IndexMismatch, ParameterError
from fingeo.polyring import (
    IntPoly,
    WaringTable,
    boole_sum_check,
    box_product_ok,
    coeff_box_member,
    index_set,
    nice_line_solve,
    phi_base,
    phi_eval,
    phi_shift_poly,
    waring_decompose,
    waring_params,
)

polys = st.lists(st.integers(-9, 9), max_size=5).map(IntPoly)


def test_intpoly_is_trimmed_and_evaluates():
    f = IntPoly([1, 2, 0, 0])
    assert f.coeffs == (1, 2) and f.degree == 1
    assert IntPoly([0, 0]) == IntPoly() == 0
    assert (IntPoly.x() ** 3 - 1)(2) == 7
    assert (IntPoly([1, 1]) * IntPoly([-1, 1])) == IntPoly([-1, 0, 1])


@settings(max_examples=100, deadline=None)
@given(polys, polys, st.integers(-20, 20))
def test_intpoly_ring_homomorphism_under_evaluation(f, g, x):
    assert (f + g)(x) == f(x) + g(x)
    assert (f * g)(x) == f(x) * g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert (f**3)(x) == f(x) ** 3


def test_waring_examples():
    assert waring_decompose(0, 2, 4) == []
    seven = waring_decompose(7, 2, 4)
    assert sum(x * x for x in seven) == 7 and len(seven) == 4
    t = waring_decompose(23, 3, 9)
    assert sum(x**3 for x in t) == 23 and len(t) == 9
    with pytest.raises(BudgetInfeasible):
        waring_decompose(7, 2, 3)


def test_waring_params_measured():
    assert waring_params(2).G == 4
    assert waring_params(3).G == 9
    assert waring_params(1).G == 1


def test_waring_random_round_trip():
    rng = random.Random(7)
    for _ in range(1000):
        k = rng.randint(1, 4)
        n = rng.randint(0, 3000)
        xs = waring_decompose(n, k)
        assert sum(x**k for x in xs) == n and all(x >= 1 for x in xs)


def test_waring_minimality_against_brute_force():
    def fewest(n, k):
        best = [0] + [None] * n
        for m in range(1, n + 1):
            best[m] = 1 + min(best[m - b**k] for b in range(1, m + 1) if b**k <= m)
        return best

    for k in (2, 3):
        ref = fewest(400, k)
        t = WaringTable(k, 400)
        assert [t.count(n) for n in range(401)] == ref


def test_waring_table_file_round_trip(tmp_path):
    t = WaringTable(3, 500)
    path = t.save(tmp_path)
    back = WaringTable.load(path, 3)
    assert back.limit == t.limit and back.decompose(239) == t.decompose(239)


def test_index_set_sizes():
    assert len(index_set(2)) == 11
    assert len(index_set(3)) == 119
    I = index_set(3)
    assert I.entries[0] == 0 and I.ell == 9
    with pytest.raises(ParameterError):
        index_set(1)


def test_phi_simple_values():
    assert phi_eval([0] * 11, 50, 2) == 0
    assert phi_eval([2] + [0] * 10, 50, 2) == 4
    with pytest.raises(IndexMismatch):
        phi_eval([1, 2], 50, 2)


def test_phi_growth_at_n50():
    rng = random.Random(0)
    worst = 0
    for _ in range(200):
        x = [rng.randint(1, 50) for _ in range(11)]
        worst = max(worst, abs(phi_eval(x, 50, 2)))
    # measured constant; the weights M^beta stay below N
    assert worst <= 3 * 50**2


@pytest.mark.parametrize("k", [2, 3])
def test_nice_line_identity_by_evaluation(k):
    """Phi(x + h y) - Phi(x) - h^k vanishes at k + 3 integer points, which
    forces the degree-k polynomial to be zero."""
    rng = random.Random(k)
    I = index_set(k)
    for _ in range(20):
        x = [rng.randint(1, 100) for _ in range(len(I))]
        y = nice_line_solve(x, 100, k).y
        assert y[0] == 1
        base = phi_eval(x, 100, k)
        for h in range(-1, k + 2):
            moved = [a + h * b for a, b in zip(x, y)]
            assert phi_eval(moved, 100, k) - base == h**k


def test_nice_line_zero_vector_and_constant():
    line = nice_line_solve([0] * 11, 50, 2)
    assert line.y[0] == 1
    assert phi_shift_poly([0] * 11, line.y, 50, 2) == IntPoly([0, 0, 1])
    assert line.M == phi_base(50, 2) and line.constant == line.sup_norm / line.M


def test_box_membership_examples():
    assert coeff_box_member(IntPoly(), 1, 0)
    f = IntPoly([0, 0, 3])
    assert coeff_box_member(f, 3, 3) and not coeff_box_member(f, 2, 3)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(1, 9), st.integers(1, 5), st.integers(1, 9), st.data())
def test_box_product_law(s, M, s2, M2, data):
    f = IntPoly(data.draw(st.lists(st.integers(-M, M), max_size=s)))
    g = IntPoly(data.draw(st.lists(st.integers(-M2, M2), max_size=s2)))
    assert box_product_ok(f, s, M, g, s2, M2)


def test_boole_small_cases():
    f = IntPoly([3, -1, 2])
    assert boole_sum_check(1, f) and boole_sum_check(2, f)
    assert f**2 - (f - 1) ** 2 == 2 * f - 1


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), polys)
def test_boole_identity_property(k, f):
    assert boole_sum_check(k, f)
