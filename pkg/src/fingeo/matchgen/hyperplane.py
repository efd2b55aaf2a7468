"""Point-hyperplane matching on a paraboloid in F_q^3."""

from __future__ import annotations

from ..errors import EvenCharacteristic
from ..ff import FieldSpec, power_residues
from ..geom import Hyperplane, HyperplaneMatching
from .report import ConstructionReport, finish


def paraboloid_matching(F: FieldSpec, *, verify: bool = True) -> ConstructionReport:
    """Points (y^2 + a z^2, y, z) with -a a non-square, each matched to its
    tangent plane x - 2 y0 y - 2 a z0 z = -y0^2 - a z0^2.  The plane meets the
    surface only where (y - y0)^2 + a (z - z0)^2 = 0, i.e. at the point itself."""
    if F.p == 2:
        raise EvenCharacteristic("the paraboloid needs odd characteristic")
    squares = power_residues(F, 2)
    a = next(x for x in F.nonzero() if -x not in squares)
    pairs = []
    for y in F.elements():
        for z in F.elements():
            pt = (y * y + a * z * z, y, z)
            h = Hyperplane((F.one, -2 * y, -2 * a * z), -(y * y) - a * z * z)
            pairs.append((pt, h))
    m = HyperplaneMatching(F, 3, pairs)
    return finish(
        "paraboloid",
        m,
        F.q**2,
        "q^2",
        {"q": F.q, "a": list(a.coeffs)},
        verify=verify,
        ceiling=F.q**2 + F.q,
    )
