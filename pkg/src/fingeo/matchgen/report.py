"""The record every construction returns."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..errors import VerificationFailed
from ..geom import (
    HyperplaneMatching,
    Matching,
    verify_induced_matching,
    verify_point_hyperplane_matching,
)


@dataclass
class ConstructionReport:
    method: str
    matching: Matching | HyperplaneMatching
    size: int
    theoretical_floor: float
    floor_formula: str
    verified: bool
    params: dict = field(default_factory=dict)
    ceiling: float | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "method": self.method,
            "params": self.params,
            "size": self.size,
            "bound": {
                "floor": self.theoretical_floor,
                "formula": self.floor_formula,
                "ceiling": self.ceiling,
            },
            "verified": self.verified,
        }


def finish(
    method: str,
    m: Matching | HyperplaneMatching,
    floor: float,
    formula: str,
    params: dict,
    *,
    verify: bool = True,
    ceiling: float | None = None,
    extras: dict | None = None,
) -> ConstructionReport:
    """Run the matching verifier and wrap the result."""
    verified = False
    if verify:
        if isinstance(m, HyperplaneMatching):
            bad = verify_point_hyperplane_matching(m)
        else:
            bad = verify_induced_matching(m)
        if bad is not None:
            raise VerificationFailed(f"{method}: induced property fails at {bad}")
        verified = True
    return ConstructionReport(
        method, m, m.size, floor, formula, verified, params, ceiling, extras or {}
    )
