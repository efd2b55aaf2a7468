"""Induced matchings in the plane F_q^2."""

from __future__ import annotations

import itertools
import math
from typing import Iterable

from ..diffsets import verify_power_free
from ..errors import BadCongruence, NotIndependent, ParameterViolation, RangeViolation
from ..ff import FieldElem, FieldSpec, is_prime, make_field, power_residues
from ..geom import AffineLine, Matching
from ..graphs import greedy_independent_set, lexmin_max_independent_set
from .report import ConstructionReport, finish

EXACT_PALEY_LIMIT = 64


def _plane_ceiling(q: int) -> float:
    return q**1.5 + q


def hermitian_unital(p: int, *, verify: bool = True) -> ConstructionReport:
    """Points of a^{p+1} + b^{p+1} = 1 over F_{p^2}; the line at (a, b) has
    direction (b^p, -a^p), i.e. it is the tangent line of the curve."""
    F = make_field(p, 2)
    els = list(F.elements())
    norms = {x.code: x ** (p + 1) for x in els}
    pairs = []
    for a in els:
        na = norms[a.code]
        for b in els:
            if (na + norms[b.code]) == F.one:
                pairs.append(((a, b), AffineLine((a, b), (b**p, -(a**p)))))
    m = Matching(F, 2, pairs)
    return finish(
        "unital", m, p**3 - p, "p^3 - p", {"p": p}, verify=verify, ceiling=_plane_ceiling(F.q)
    )


def _as_elems(F: FieldSpec, items: Iterable) -> list[FieldElem]:
    out = []
    for x in items:
        out.append(x if isinstance(x, FieldElem) else F(int(x)))
    return sorted(set(out))


def check_square_independent(F: FieldSpec, I: list[FieldElem], d: int = 2) -> None:
    D = power_residues(F, d)
    for a, b in itertools.combinations(I, 2):
        if (a - b) in D:
            raise NotIndependent(f"{a} - {b} is a nonzero {d}-th power")


def paley_lift(F: FieldSpec, I: Iterable, *, verify: bool = True) -> ConstructionReport:
    """P = {(x, y) : x + y^2 in I}, the line at (x, y) having direction (-2y, 1).

    Moving along it changes x + y^2 by a square, which never lands back in an
    independent set I."""
    if F.p % 4 != 1:
        raise BadCongruence("the characteristic must be 1 mod 4")
    I = _as_elems(F, I)
    check_square_independent(F, I)
    pairs = []
    for y in F.elements():
        y2 = y * y
        for c in I:
            x = c - y2
            pairs.append(((x, y), AffineLine((x, y), (-2 * y, F.one))))
    m = Matching(F, 2, pairs)
    return finish(
        "paley",
        m,
        F.q * len(I),
        "q |I|",
        {"q": F.q, "I": [list(c.coeffs) for c in I]},
        verify=verify,
        ceiling=_plane_ceiling(F.q),
    )


def paley_graph(F: FieldSpec) -> list[int]:
    D = {x.code for x in power_residues(F, 2)}
    els = list(F.elements())
    adj = [0] * F.q
    for a in els:
        for b in els:
            if a.code != b.code and (a - b).code in D:
                adj[a.code] |= 1 << b.code
    return adj


def paley_independent_set(F: FieldSpec, exact_limit: int = EXACT_PALEY_LIMIT) -> list[FieldElem]:
    """Lex-least maximum independent set of the Paley graph for q <= limit,
    greedy in code order beyond."""
    if F.p % 4 != 1:
        raise BadCongruence("the characteristic must be 1 mod 4")
    adj = paley_graph(F)
    picked = lexmin_max_independent_set(adj) if F.q <= exact_limit else greedy_independent_set(adj)
    return [F.from_code(c) for c in picked]


def ruzsa_sizes(q: int) -> tuple[int, int]:
    """(N, M) = (floor(q/3), floor(sqrt(q)/2))."""
    return q // 3, math.isqrt(q) // 2


def ruzsa_integer_points(q: int, A: Iterable[int]) -> list[tuple[int, int]]:
    """{(x, y) in [N] x [M] : 2x - y^2 in A} in (y, a) order."""
    N, M = ruzsa_sizes(q)
    A = sorted(set(int(a) for a in A))
    pts = []
    for y in range(1, M + 1):
        for a in A:
            if (a + y * y) % 2 == 0:
                x = (a + y * y) // 2
                if 1 <= x <= N:
                    pts.append((x, y))
    return pts


def _check_ruzsa_inputs(q: int, A: list[int], bound: int) -> None:
    if not is_prime(q) or q < 5:
        raise ParameterViolation("q must be an odd prime")
    if any(a < 1 or a > bound for a in A):
        raise RangeViolation(f"A must lie in [1, {bound}]")
    if verify_power_free(A, 2) is not None:
        raise NotIndependent("A has two elements differing by a square")


def ruzsa_lift_2d(q: int, A: Iterable[int], *, verify: bool = True) -> ConstructionReport:
    """Integer points (x, y) with 2x - y^2 in a square-difference-free A,
    lines with direction (y, 1), reduced mod q.  The coordinate ranges keep
    every difference small enough that the integer argument survives mod q."""
    A = sorted(set(int(a) for a in A))
    _check_ruzsa_inputs(q, A, q // 10)
    F = make_field(q)
    N, M = ruzsa_sizes(q)
    pts = ruzsa_integer_points(q, A)
    pairs = [((F(x), F(y)), AffineLine((F(x), F(y)), (F(y), F.one))) for x, y in pts]
    compatible = sum(1 for a in A for y in range(1, M + 1) if (a - y) % 2 == 0)
    m = Matching(F, 2, pairs)
    return finish(
        "ruzsa2d",
        m,
        compatible,
        "#{(a, y) in A x [M] : a = y mod 2}",
        {"q": q, "A": A},
        verify=verify,
        ceiling=_plane_ceiling(q),
        extras={"N": N, "M": M, "parity_pairs": compatible},
    )


def prime_power_2d(p: int, t: int, A: Iterable[int], *, verify: bool = True) -> ConstructionReport:
    """Planar matching over F_{p^t} (t odd) built from polynomial evaluations.

    With s = (t+1)/2 and alpha the generator: f runs over integer polynomials of
    degree < s with coefficients in [-M, M], g over polynomials of degree <= t-1
    whose even coefficients lie in A and odd ones are free mod p.  The point is
    ((g(alpha) + f(alpha)^2)/2, f(alpha)) with direction (f(alpha), 1)."""
    if t < 1 or t % 2 == 0:
        raise ParameterViolation("t must be odd")
    if p <= 100 * t:
        raise ParameterViolation(f"need p > 100 t, got p = {p}, t = {t}")
    A = sorted(set(int(a) for a in A))
    bound = p // (20 * t)
    if any(a < 1 or a > bound for a in A):
        raise RangeViolation(f"A must lie in [1, {bound}]")
    if verify_power_free(A, 2) is not None:
        raise NotIndependent("A has two elements differing by a square")
    F = make_field(p, t, max_order=1 << 62)
    s = (t + 1) // 2
    M = math.isqrt(p // (64 * s))
    half = F(2).inverse()
    pairs = []
    f_choices = list(itertools.product(range(-M, M + 1), repeat=s))
    even_choices = list(itertools.product(A, repeat=s))
    odd_choices = list(itertools.product(range(p), repeat=s - 1))
    for fc in f_choices:
        fa = F.from_coeffs(list(fc))
        fa2 = fa * fa
        direction = (fa, F.one)
        for ev in even_choices:
            for od in odd_choices:
                g = [0] * (2 * s - 1)
                g[0::2] = ev
                g[1::2] = od
                x = (F.from_coeffs(g) + fa2) * half
                pairs.append(((x, fa), AffineLine((x, fa), direction)))
    m = Matching(F, 2, pairs)
    floor = (2 * M + 1) ** s * p ** (s - 1) * len(A) ** s
    return finish(
        "pp2d",
        m,
        floor,
        "(2M+1)^s p^(s-1) |A|^s",
        {"p": p, "t": t, "A": A},
        verify=verify,
        ceiling=_plane_ceiling(F.q),
        extras={"s": s, "M": M},
    )
