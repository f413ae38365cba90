"""The nonsingular plane cubic as an elliptic curve: group law, automorphism
order, and the explicit degree-4 translation maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cremona import CremonaMap
from .exact import HomPoly, variables


class EllipticError(Exception):
    pass


@dataclass(frozen=True)
class CurvePoint:
    x: Optional[Fraction]
    y: Optional[Fraction]

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        return cls(Fraction(x), Fraction(y))

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


O = CurvePoint.infinity()


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 z = x^3 + p x z^2 + q z^3 with rational p, q and neutral element
    O = (0:1:0), an inflection point."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.discriminant == 0:
            raise EllipticError(
                f"singular curve: discriminant of y^2=x^3+({self.p})x+({self.q}) is 0"
            )

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.p**3 + 27 * self.q**2)

    @property
    def equation(self) -> HomPoly:
        x, y, z = variables(3)
        return y**2 * z - x**3 - self.p * (x * z**2) - self.q * z**3

    def contains(self, pt: CurvePoint) -> bool:
        if pt.is_infinity:
            return True
        return pt.y**2 == pt.x**3 + self.p * pt.x + self.q

    def _require(self, pt: CurvePoint):
        if not self.contains(pt):
            raise EllipticError(f"{pt} is not on y^2=x^3+({self.p})x+({self.q})")

    def __repr__(self):
        return f"WeierstrassCurve(y^2 = x^3 + ({self.p})x + ({self.q}))"


def add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-and-tangent group law with neutral element O.

    The sum is the reflection of the third collinear point; skipping the
    reflection yields an operation with no neutral element (see the
    sign-convention test), so only this convention is implemented.
    """
    curve._require(P)
    curve._require(Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return O
        m = (3 * P.x**2 + curve.p) / (2 * P.y)
    else:
        m = (Q.y - P.y) / (Q.x - P.x)
    x3 = m * m - P.x - Q.x
    y3 = m * (P.x - x3) - P.y
    return CurvePoint(x3, y3)


def neg(curve: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    curve._require(P)
    if P.is_infinity:
        return O
    return CurvePoint(P.x, -P.y)


def multiple(curve: WeierstrassCurve, k: int, P: CurvePoint) -> CurvePoint:
    if k < 0:
        return multiple(curve, -k, neg(curve, P))
    acc, base = O, P
    while k:
        if k & 1:
            acc = add(curve, acc, base)
        base = add(curve, base, base)
        k >>= 1
    return acc


def aut_order(curve: WeierstrassCurve) -> int:
    """Order of the automorphism group fixing O: 6 at j=0, 4 at j=1728, else 2."""
    if curve.p == 0:
        return 6
    if curve.q == 0:
        return 4
    return 2


def translation_map(curve: WeierstrassCurve, P: CurvePoint) -> CremonaMap:
    """The degree-4 plane Cremona map restricting to translation by P on the
    cubic; P = O gives the identity (the set-theoretic section)."""
    curve._require(P)
    if P.is_infinity:
        return CremonaMap.identity()
    a, b = P.x, P.y
    x, y, z = variables(3)
    xa = x - a * z
    yb = y - b * z
    F1 = z * yb**2 * xa - (x + a * z) * xa**3
    F2 = -(z * yb**3) + yb * (x + 2 * a * z) * xa**2 - b * (z * xa**3)
    F3 = z * xa**3
    return CremonaMap([F1, F2, F3])


def to_projective(pt: CurvePoint):
    if pt.is_infinity:
        return (Fraction(0), Fraction(1), Fraction(0))
    return (pt.x, pt.y, Fraction(1))


def from_projective(curve: WeierstrassCurve, coords) -> CurvePoint:
    coords = [Fraction(c) for c in coords]
    if coords[2] == 0:
        return O
    pt = CurvePoint(coords[0] / coords[2], coords[1] / coords[2])
    curve._require(pt)
    return pt


def small_points(curve: WeierstrassCurve, bound: int = 50, limit: int = 8):
    """Affine rational points with small integer x (sampling seeds)."""
    found = []
    for ax in range(-bound, bound + 1):
        v = Fraction(ax) ** 3 + curve.p * ax + curve.q
        if v < 0:
            continue
        rn, rd = _isqrt_exact(v.numerator), _isqrt_exact(v.denominator)
        if rn is None or rd is None:
            continue
        y0 = Fraction(rn, rd)
        found.append(CurvePoint(Fraction(ax), y0))
        if y0 != 0:
            found.append(CurvePoint(Fraction(ax), -y0))
        if len(found) >= limit:
            break
    if not found:
        raise EllipticError("no small rational point found; supply one explicitly")
    return found


def find_rational_point(curve: WeierstrassCurve, bound: int = 50) -> CurvePoint:
    return small_points(curve, bound, limit=1)[0]


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def default_samples(curve: WeierstrassCurve, count: int = 10, base: Optional[CurvePoint] = None):
    """Distinct affine sample points: the subgroup generated by small points
    (or by an explicit base), enumerated breadth-first.

    On torsion-only curves the closure is finite, so fewer than `count`
    points may come back; callers that need many samples should use a
    positive-rank curve.
    """
    bases = [base] if base is not None else small_points(curve)
    for b in bases:
        curve._require(b)
    out, seen = [], {O}
    queue = list(bases)
    steps = 0
    while queue and len(out) < count and steps < 40 * count:
        steps += 1
        pt = queue.pop(0)
        if pt in seen:
            continue
        seen.add(pt)
        out.append(pt)
        for b in bases:
            queue.append(add(curve, pt, b))
    return out
