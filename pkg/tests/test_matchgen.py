import itertools
import random

import pytest

from fingeo.errors import (
    BadCongruence,
    CharTooSmall,
    EvenCharacteristic,
    FieldTooSmall,
    NotIndependent,
    NotPrime,
    ParameterError,
    RangeViolation,
)
from fingeo.ff import field_of_order, make_field, power_residues
from fingeo.geom import HyperplaneMatching, Matching, vinh_bound_check
from fingeo.matchgen import (
    cartesian_lift,
    construct,
    dpow_form,
    dth_power_lift,
    field_product_lift,
    hermitian_unital,
    lagrange_identities_hold,
    lagrange_weights,
    norm_hypersurface,
    norm_sum,
    paley_independent_set,
    paley_lift,
    paraboloid_matching,
    prime_power_2d,
    ruzsa_lift_2d,
    waring_lift,
)
from fingeo.matchgen.planar import paley_graph
from fingeo.matchgen.waring import best_shift, value_histogram, waring_family
from fingeo.diffsets import max_power_free_exact
from fingeo.polyring import index_set, phi_eval, phi_terms
from oracles import max_independent_brute, naive_violations


def _naive_ok(m, sample=None, seed=0):
    if sample is not None and m.size > sample:
        rng = random.Random(seed)
        m = Matching(m.field, m.d, rng.sample(m.pairs, sample))
    return naive_violations(m) == []


def _naive_hyperplane_ok(m: HyperplaneMatching):
    return all(h.contains(p) == (i == j) for i, (p, _) in enumerate(m.pairs) for j, (_, h) in enumerate(m.pairs))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_unital_sizes_and_oracle(p):
    rep = hermitian_unital(p)
    assert rep.size == p**3 - p and rep.verified
    if p <= 3:
        assert _naive_ok(rep.matching)


@pytest.mark.parametrize("q", [5, 13, 17, 25])
def test_paley_alpha_against_brute_force(q):
    F = field_of_order(q)
    adj = paley_graph(F)
    edges = {(a, b) for a in range(q) for b in range(q) if a < b and adj[a] >> b & 1}
    squares = {x.code for x in power_residues(F, 2)}
    assert all(F.sub_c(b, a) in squares for a, b in edges)
    I = paley_independent_set(F)
    assert len(I) == max_independent_brute(q, edges)
    rep = paley_lift(F, I)
    assert rep.size == q * len(I)
    assert _naive_ok(rep.matching, sample=60)


def test_paley_preconditions():
    with pytest.raises(BadCongruence):
        paley_independent_set(make_field(7))
    F = make_field(13)
    with pytest.raises(NotIndependent):
        paley_lift(F, [F(0), F(1)])


def test_ruzsa_small_and_errors():
    A = max_power_free_exact(10, 2).elements
    rep = ruzsa_lift_2d(101, A)
    assert rep.size == rep.theoretical_floor == 10
    assert _naive_ok(rep.matching)
    with pytest.raises(NotIndependent):
        ruzsa_lift_2d(101, [1, 2])
    with pytest.raises(RangeViolation):
        ruzsa_lift_2d(101, [1, 30])


def test_prime_power_small_cases():
    rep = prime_power_2d(101, 1, [1, 3])
    assert rep.size == rep.theoretical_floor == 6 and _naive_ok(rep.matching)
    rep = prime_power_2d(307, 3, [1, 3])
    assert rep.size == rep.theoretical_floor == 9 * 307 * 4
    assert _naive_ok(rep.matching, sample=40)


def test_dpow_identity_exhaustive_at_q7():
    F = make_field(7)
    rep = dth_power_lift(F, 3, [0])
    assert rep.size == rep.extras["admissible"]
    assert _naive_ok(rep.matching)
    for pt, line in rep.matching.pairs:
        raw = tuple(x * line.dir[-1].inverse() for x in line.dir)
        for lam in F.elements():
            moved = tuple(a + lam * v for a, v in zip(pt, raw))
            assert dpow_form(moved) == dpow_form(pt) + lam**3


def test_dpow_preconditions():
    with pytest.raises(CharTooSmall):
        dth_power_lift(make_field(3), 3, [0])
    F = make_field(7)
    with pytest.raises(NotIndependent):
        dth_power_lift(F, 3, [0, 1])


def test_field_product_small():
    F = make_field(5)
    base = paley_lift(F, [F(0)])
    rep = field_product_lift(base.matching, 2)
    assert rep.size == base.size**2 * 25**2
    assert _naive_ok(rep.matching, sample=50)


def test_cartesian_lift():
    rep = cartesian_lift(hermitian_unital(3), 1)
    assert rep.size == 24 * 9 and rep.matching.d == 3


@pytest.mark.parametrize("q0,k", [(5, 2), (7, 2), (5, 3), (7, 3)])
def test_lagrange_identities(q0, k):
    F = make_field(q0)
    for tt in itertools.permutations([F(c) for c in range(2, q0)], k - 1):
        ts = tt + (F.one,)
        assert lagrange_identities_hold(ts)
        assert sum(lagrange_weights(ts), F.zero) == F.one


def test_norm_hypersurface_structure():
    rep = norm_hypersurface(5, 2)
    assert rep.size == 108 and rep.extras["fiber"] == 6
    F = rep.matching.field
    for pt, line in rep.matching.pairs:
        assert norm_sum(pt, 5) == F.one
    assert _naive_ok(rep.matching)


def test_norm_hypersurface_with_extra_dimension():
    rep = norm_hypersurface(5, 2, d=3)
    assert rep.size == 108 * 25 and rep.matching.d == 3


def test_norm_preconditions():
    with pytest.raises(FieldTooSmall):
        norm_hypersurface(3, 3)
    with pytest.raises(NotPrime):
        norm_hypersurface(9, 2)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_paraboloid(q):
    rep = paraboloid_matching(field_of_order(q))
    assert rep.size == q * q
    assert _naive_hyperplane_ok(rep.matching)
    assert vinh_bound_check(rep.matching).within
    with pytest.raises(EvenCharacteristic):
        paraboloid_matching(field_of_order(8))


def test_value_histogram_matches_enumeration():
    I = index_set(2)
    box = [(1, 5), (1, 2), (1, 2)] + [(1, 1)] * (len(I) - 3)
    terms = phi_terms(I, 5)
    hist = value_histogram(terms, box)
    direct = {}
    for x in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        v = phi_eval(list(x), 5, 2)
        direct[v] = direct.get(v, 0) + 1
    assert dict(hist) == direct


def test_best_shift_is_argmax():
    hist = {0: 3, 1: 1, 5: 2}
    A = [1, 2]
    s, score, _ = best_shift(hist, A)
    brute = max(range(-5, 6), key=lambda t: (sum(c for v, c in hist.items() if v - t in A), -t))
    assert s == brute and score == sum(c for v, c in hist.items() if v - s in A)


def test_waring_lift_small():
    rep = waring_lift(29, 2)
    assert rep.verified and rep.size >= rep.theoretical_floor
    assert rep.matching.d == 1 + len(index_set(2))
    fam = waring_family(7, 2, max_power_free_exact(40, 2).elements)
    assert len(fam.points) == len(fam.directions)
    with pytest.raises(ParameterError):
        waring_lift(30, 2)


def test_registry_dispatch_and_errors():
    assert construct("unital", {"p": 3}).size == 24
    assert construct("paraboloid", {"q": 7}).size == 49
    with pytest.raises(ParameterError):
        construct("nonsense", {})
    with pytest.raises(ParameterError):
        construct("unital", {})


def test_vinh_bound_across_planar_constructions():
    reps = [hermitian_unital(p) for p in (2, 3, 5)]
    reps += [paley_lift(field_of_order(q), paley_independent_set(field_of_order(q))) for q in (5, 13, 25)]
    reps += [ruzsa_lift_2d(101, [1, 3, 6, 8]), norm_hypersurface(5, 2), norm_hypersurface(7, 2)]
    for r in reps:
        assert vinh_bound_check(r.matching).within, r.method
