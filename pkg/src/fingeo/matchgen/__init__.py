"""Constructions of large induced matchings, addressable by id."""

from __future__ import annotations

from typing import Any, Callable

from ..diffsets import max_power_free_exact
from ..errors import ParameterError
from ..ff import field_of_order, make_field
from .hyperplane import paraboloid_matching
from .lifts import (
    cartesian_lift,
    dpow_admissible,
    dpow_form,
    dth_power_lift,
    field_product_lift,
    lagrange_identities_hold,
    lagrange_weights,
    norm_hypersurface,
    norm_sum,
)
from .planar import (
    hermitian_unital,
    paley_independent_set,
    paley_lift,
    prime_power_2d,
    ruzsa_integer_points,
    ruzsa_lift_2d,
    ruzsa_sizes,
)
from .report import ConstructionReport
from .waring import waring_family, waring_lift


def _field(params: dict):
    if "p" in params and "t" in params:
        return make_field(params["p"], params["t"])
    return field_of_order(params["q"])


def _paley(params: dict) -> ConstructionReport:
    F = _field(params)
    return paley_lift(F, paley_independent_set(F))


def _ruzsa(params: dict) -> ConstructionReport:
    q = params["q"]
    return ruzsa_lift_2d(q, max_power_free_exact(q // 10, 2).elements)


def _dpow(params: dict) -> ConstructionReport:
    return dth_power_lift(_field(params), params.get("d", 3), [0])


def _pp2d(params: dict) -> ConstructionReport:
    p, t = params["p"], params.get("t", 3)
    return prime_power_2d(p, t, max_power_free_exact(p // (20 * t), 2).elements)


def _fieldprod(params: dict) -> ConstructionReport:
    p, s = params.get("p", 5), params.get("t", 2)
    base = paley_lift(make_field(p), paley_independent_set(make_field(p)))
    return field_product_lift(base.matching, s)


REGISTRY: dict[str, Callable[[dict], ConstructionReport]] = {
    "unital": lambda prm: hermitian_unital(prm["p"]),
    "paley": _paley,
    "ruzsa2d": _ruzsa,
    "dpow": _dpow,
    "waring": lambda prm: waring_lift(prm["q"], prm.get("k", 2)),
    "pp2d": _pp2d,
    "fieldprod": _fieldprod,
    "normhyp": lambda prm: norm_hypersurface(prm.get("q0", prm.get("p")), prm.get("k", 2), prm.get("d")),
    "paraboloid": lambda prm: paraboloid_matching(_field(prm)),
}


def construct(method: str, params: dict[str, Any]) -> ConstructionReport:
    try:
        build = REGISTRY[method]
    except KeyError:
        raise ParameterError(f"unknown method {method!r}; known: {', '.join(REGISTRY)}") from None
    try:
        return build(params)
    except KeyError as e:
        raise ParameterError(f"method {method!r} needs parameter {e.args[0]!r}") from None


__all__ = [
    "ConstructionReport",
    "REGISTRY",
    "cartesian_lift",
    "construct",
    "dpow_admissible",
    "dpow_form",
    "dth_power_lift",
    "field_product_lift",
    "hermitian_unital",
    "lagrange_identities_hold",
    "lagrange_weights",
    "norm_hypersurface",
    "norm_sum",
    "paley_independent_set",
    "paley_lift",
    "paraboloid_matching",
    "prime_power_2d",
    "ruzsa_integer_points",
    "ruzsa_lift_2d",
    "ruzsa_sizes",
    "waring_family",
    "waring_lift",
]
