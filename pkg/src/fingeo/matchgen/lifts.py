"""Matchings in F_q^d for d > 2: d-th power lifts, field-product lifts,
norm hypersurfaces and Cartesian products."""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

from ..errors import CharTooSmall, FieldTooSmall, NotPrime, ParameterError
from ..ff import FieldElem, FieldSpec, is_prime, make_field, power_residues, rel_norm
from ..geom import AffineLine, Matching
from .planar import _as_elems, check_square_independent
from .report import ConstructionReport, finish


def dpow_form(p: Sequence[FieldElem]) -> FieldElem:
    """x_1 + x_2^2 + ... + x_d^d."""
    acc = p[0]
    for i, x in enumerate(p[1:], start=2):
        acc = acc + x**i
    return acc


def dpow_admissible(F: FieldSpec, d: int) -> list[tuple[tuple, tuple]]:
    """Pairs ((x_2..x_d), (v_1..v_d)) with v_d = 1 such that
    (x + lam v)_1 + ... + (x + lam v)_d^d = x_1 + ... + x_d^d + lam^d.

    The coefficient of lam^r must vanish for 1 <= r < d:
        v_r^r = -sum_{i > r} C(i, r) x_i^(i-r) v_i^r.
    Going down from r = d-1, x_{r+1} is admissible when that right side is a
    nonzero r-th power; v_r is its code-least root.  x_2 is free in F^* and v_1
    is then forced by the linear equation."""
    roots: dict[int, dict[int, FieldElem]] = {}
    for r in range(2, d):
        table: dict[int, FieldElem] = {}
        for v in F.nonzero():
            table.setdefault((v**r).code, v)
        roots[r] = table
    nonzero = list(F.nonzero())
    out = []

    def rhs(r: int, xs: dict, vs: dict) -> FieldElem:
        acc = F.zero
        for i in range(r + 1, d + 1):
            acc = acc + math.comb(i, r) * xs[i] ** (i - r) * vs[i] ** r
        return -acc

    def descend(r: int, xs: dict, vs: dict) -> None:
        # choose x_{r+1}, then v_r
        if r == 1:
            for x2 in nonzero:
                xs[2] = x2
                vs[1] = rhs(1, xs, vs)
                out.append((tuple(xs[i] for i in range(2, d + 1)), tuple(vs[i] for i in range(1, d + 1))))
            del xs[2]
            del vs[1]
            return
        for x in nonzero:
            xs[r + 1] = x
            root = roots[r].get(rhs(r, xs, vs).code)
            if root is not None:
                vs[r] = root
                descend(r - 1, xs, vs)
                del vs[r]
        del xs[r + 1]

    descend(d - 1, {}, {d: F.one})
    return out


def dth_power_lift(F: FieldSpec, d: int, I: Iterable, *, verify: bool = True) -> ConstructionReport:
    """P = {x : x_1 + x_2^2 + ... + x_d^d in I, (x_2..x_d) admissible}, each
    point on the line along which the form grows by lam^d."""
    if d < 2:
        raise ParameterError("d must be at least 2")
    if F.p <= d:
        raise CharTooSmall(f"characteristic {F.p} must exceed d = {d}")
    I = _as_elems(F, I)
    check_square_independent(F, I, d)
    pairs = []
    admissible = dpow_admissible(F, d)
    for xs, vs in admissible:
        tail = F.zero
        for i, x in enumerate(xs, start=2):
            tail = tail + x**i
        for c in I:
            pt = (c - tail,) + xs
            pairs.append((pt, AffineLine(pt, vs)))
    m = Matching(F, d, pairs)
    return finish(
        "dpow",
        m,
        len(I) * len(admissible),
        "|I| |S|",
        {"q": F.q, "d": d, "I": [list(c.coeffs) for c in I]},
        verify=verify,
        ceiling=F.q ** (d - 1 / d),
        extras={"admissible": len(admissible)},
    )


def field_product_lift(base: Matching, s: int, *, verify: bool = True) -> ConstructionReport:
    """Lift a matching in F_p^{d0} to F_{p^s}^{s d0}.

    Coordinates split into s blocks of d0.  A point qualifies when, for every
    i, the i-th coefficients of its block-i coordinates form a base point; the
    remaining coefficients are free.  Its direction concatenates the base
    directions of those s base points."""
    if base.field.t != 1:
        raise ParameterError("the base matching must live over a prime field")
    if s < 1:
        raise ParameterError("s must be positive")
    p = base.field.p
    F = make_field(p, s)
    d0 = base.d
    w = [p**i for i in range(s)]
    base_pts = [tuple(x.code for x in pt) for pt, _ in base.pairs]
    base_dirs = [tuple(x.code for x in l.dir) for _, l in base.pairs]
    free = list(itertools.product(range(p), repeat=d0 * (s - 1)))
    blocks = []
    for i in range(s):
        opts = []
        other = [j for j in range(s) if j != i]
        for bidx, bp in enumerate(base_pts):
            for fr in free:
                codes = []
                for c in range(d0):
                    code = bp[c] * w[i]
                    for slot, j in enumerate(other):
                        code += fr[c * (s - 1) + slot] * w[j]
                    codes.append(code)
                opts.append((tuple(codes), bidx))
        blocks.append(opts)
    pairs = []
    for choice in itertools.product(*blocks):
        pt = tuple(F.from_code(c) for codes, _ in choice for c in codes)
        v = tuple(F.from_code(c) for _, bidx in choice for c in base_dirs[bidx])
        pairs.append((pt, AffineLine(pt, v)))
    m = Matching(F, s * d0, pairs)
    floor = base.size**s * F.q ** (d0 * (s - 1))
    return finish(
        "fieldprod",
        m,
        floor,
        "|P|^s q^(d0 (s-1))",
        {"p": p, "s": s, "base_size": base.size, "d0": d0},
        verify=verify,
    )


def cartesian_lift(base: ConstructionReport | Matching, extra: int, *, verify: bool = True) -> ConstructionReport:
    """P x F_q^extra, with the line through (p, u) equal to l_p x {u}."""
    m0 = base.matching if isinstance(base, ConstructionReport) else base
    F = m0.field
    zero = (F.zero,) * extra
    pairs = []
    for pt, l in m0.pairs:
        v = l.dir + zero
        for u in itertools.product(list(F.elements()), repeat=extra):
            q = pt + u
            pairs.append((q, AffineLine(q, v)))
    m = Matching(F, m0.d + extra, pairs)
    method = base.method + "+cartesian" if isinstance(base, ConstructionReport) else "cartesian"
    return finish(
        method,
        m,
        m0.size * F.q**extra,
        "|P| q^extra",
        {"extra": extra, "base_size": m0.size},
        verify=verify,
    )


def lagrange_weights(ts: Sequence[FieldElem]) -> list[FieldElem]:
    """A_i = prod_{j != i} t_j / (t_j - t_i)."""
    out = []
    for i, ti in enumerate(ts):
        a = ts[0].field.one
        for j, tj in enumerate(ts):
            if j != i:
                a = a * tj / (tj - ti)
        out.append(a)
    return out


def lagrange_identities_hold(ts: Sequence[FieldElem]) -> bool:
    """sum A_i = 1, sum A_i t_i^r = 0 for 1 <= r < k, and
    sum A_i t_i^k = (-1)^(k+1) prod t_i."""
    F = ts[0].field
    k = len(ts)
    A = lagrange_weights(ts)
    if sum(A, F.zero) != F.one:
        return False
    for r in range(1, k):
        if sum((a * t**r for a, t in zip(A, ts)), F.zero) != F.zero:
            return False
    prod = F.one
    for t in ts:
        prod = prod * t
    return sum((a * t**k for a, t in zip(A, ts)), F.zero) == (-1) ** (k + 1) * prod


def norm_hypersurface(q0: int, k: int, d: int | None = None, *, verify: bool = True) -> ConstructionReport:
    """Matching on the hypersurface N(x_1) + ... + N(x_k) = 1 over F_{q0^k},
    N the norm to F_{q0}.

    For distinct t_1..t_{k-1} in F_{q0} \\ {0, 1} and t_k = 1, the points with
    N(a_i) = A_i (Lagrange weights of the t's) get the line
    mu -> (a_i (1 + mu t_i))_i, along which the sum of norms is 1 + c N(mu)
    for a constant c != 0.  Extra coordinates beyond k are a Cartesian lift."""
    if not is_prime(q0):
        raise NotPrime("q0 must be prime")
    if q0 <= k:
        raise FieldTooSmall(f"need q0 > k, got q0 = {q0}, k = {k}")
    d = k if d is None else d
    if d < k:
        raise ParameterError("d must be at least k")
    F = make_field(q0, k)
    sub = [F(c) for c in range(2, q0)]
    fibers: dict[int, list[FieldElem]] = {}
    for x in F.nonzero():
        fibers.setdefault(rel_norm(x, q0).code, []).append(x)
    weights: dict[tuple, tuple] = {}
    for tt in itertools.permutations(sub, k - 1):
        ts = tt + (F.one,)
        A = tuple(a.code for a in lagrange_weights(ts))
        weights.setdefault(A, ts)
    pairs = []
    for A, ts in weights.items():
        for a in itertools.product(*(fibers[c] for c in A)):
            pairs.append((a, AffineLine(a, tuple(ai * ti for ai, ti in zip(a, ts)))))
    m = Matching(F, k, pairs)
    fiber = (F.q - 1) // (q0 - 1)
    floor = fiber**k * len(weights)
    rep = finish(
        "normhyp",
        m,
        floor,
        "((q-1)/(q0-1))^k |phi(S)|",
        {"q0": q0, "k": k, "d": d},
        verify=verify,
        ceiling=F.q ** (k - 1 / k),
        extras={"weights": len(weights), "fiber": fiber, "t_of": {A: [t.code for t in ts] for A, ts in weights.items()}},
    )
    if d > k:
        lifted = cartesian_lift(rep, d - k, verify=verify)
        lifted.method = "normhyp"
        lifted.params = rep.params
        lifted.theoretical_floor = floor * F.q ** (d - k)
        lifted.floor_formula = rep.floor_formula + " q^(d-k)"
        lifted.ceiling = F.q ** (d - 1 / k)
        lifted.extras = rep.extras
        return lifted
    return rep


def norm_sum(point: Sequence[FieldElem], q0: int) -> FieldElem:
    F = point[0].field
    return sum((rel_norm(x, q0) for x in point), F.zero)
