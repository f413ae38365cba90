"""Desk-scale checks on the quartic threefold with one A_1 point: the explicit
involution, its base lines, and the failure of base-locus containment."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    HomPoly,
    common_zeros_plane,
    content_normalize,
    evaluate,
    mult_at,
    normalize_point,
    poly_divide,
    substitute,
    variables,
    _all_proportional,
)


class ThreefoldError(Exception):
    pass


def lift_plane_poly(p: HomPoly) -> HomPoly:
    """Reinterpret a polynomial in (x1, x2, x3) inside (x0, x1, x2, x3)."""
    if p.nvars != 3:
        raise ThreefoldError("expected a 3-variable polynomial")
    return HomPoly(4, {(0,) + e: c for e, c in p.terms.items()})


def quadratic_form_rank(A: HomPoly) -> int:
    """Rank of a quadratic form in 3 variables, by exact elimination on its
    symmetric matrix."""
    if A.nvars != 3 or A.degree != 2:
        raise ThreefoldError("rank check needs a 3-variable quadratic form")
    M = [[Fraction(0)] * 3 for _ in range(3)]
    for e, c in A.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            M[i][i] += c
        else:
            M[i][j] += c / 2
            M[j][i] += c / 2
    rank = 0
    rows = [row[:] for row in M]
    for col in range(3):
        pivot = next((r for r in range(rank, 3) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for r in range(rank + 1, 3):
            if rows[r][col] != 0:
                f = rows[r][col] / pr[col]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    return rank


@dataclass(frozen=True)
class QuarticData:
    """The quartic x0^2 A + x0 B + C with an ordinary double point at
    P = (1:0:0:0); A, B, C live in (x1, x2, x3)."""

    A: HomPoly
    B: HomPoly
    C: HomPoly

    @classmethod
    def build(cls, A: HomPoly, B: HomPoly, C: HomPoly, validate: bool = True):
        q = cls(A, B, C)
        if (A.degree, B.degree, C.degree) != (2, 3, 4):
            raise ThreefoldError("need degrees (2, 3, 4) for (A, B, C)")
        if validate:
            if quadratic_form_rank(A) != 3:
                raise ThreefoldError("A must be a quadratic form of rank 3")
            if mult_at(q.D, (1, 0, 0, 0)) != 2:
                raise ThreefoldError("P = (1:0:0:0) is not a double point")
            if not _certify_irreducible(q.D):
                raise ThreefoldError(
                    "could not certify irreducibility of the quartic over Q"
                )
        return q

    @property
    def D(self) -> HomPoly:
        x0 = HomPoly.variable(4, 0)
        return (
            x0 * x0 * lift_plane_poly(self.A)
            + x0 * lift_plane_poly(self.B)
            + lift_plane_poly(self.C)
        )

    def tangent_cone_rank_at_p(self) -> int:
        # dehomogenizing at x0 = 1 leaves A + B + C; the lowest form is A
        return quadratic_form_rank(self.A)


def _certify_irreducible(D: HomPoly, tries: int = 12) -> bool:
    """Restrict to lines through pairs of small rational points; an
    irreducible degree-4 restriction certifies irreducibility of D."""
    import itertools

    import sympy

    t = sympy.Symbol("t")
    pts = [
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
        (1, 1, 1, 1), (1, 2, 3, 4), (2, -1, 1, 3), (1, -1, 2, -2),
    ]
    count = 0
    for u, v in itertools.combinations(pts, 2):
        count += 1
        if count > tries:
            break
        coeffs = restrict_to_line(D, u, v)
        expr = sum(
            sympy.Rational(c.numerator, c.denominator) * t**k
            for k, c in enumerate(coeffs)
        )
        if expr == 0:
            continue
        poly = sympy.Poly(expr, t)
        if poly.degree() != 4:
            continue
        factors = sympy.factor_list(expr)[1]
        if len(factors) == 1 and factors[0][1] == 1:
            return True
    return False


def restrict_to_line(p: HomPoly, u, v):
    """Coefficients (ascending in t) of p(u + t v); with deg(p) = d this is the
    degree-d restriction to the line through u and v in the chart s = 1."""
    u = [Fraction(c) for c in u]
    v = [Fraction(c) for c in v]
    out = [Fraction(0)] * (p.degree + 1 if not p.is_zero else 1)
    for e, c in p.terms.items():
        # expand prod (u_i + t v_i)^{e_i}
        poly = {0: c}
        for ui, vi, k in zip(u, v, e):
            for _ in range(k):
                nxt = {}
                for dg, cc in poly.items():
                    if ui != 0:
                        nxt[dg] = nxt.get(dg, Fraction(0)) + cc * ui
                    if vi != 0:
                        nxt[dg + 1] = nxt.get(dg + 1, Fraction(0)) + cc * vi
                poly = nxt
                if not poly:
                    break
        for dg, cc in poly.items():
            out[dg] += cc
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


class SpaceMap:
    """Birational self-map of P^3 as a content-normalized quadruple."""

    __slots__ = ("components",)

    def __init__(self, components, _normalized=False):
        comps = list(components)
        if len(comps) != 4 or any(c.nvars != 4 for c in comps):
            raise ThreefoldError("a space map needs 4 components in 4 variables")
        degs = {c.degree for c in comps if not c.is_zero}
        if len(degs) != 1:
            raise ThreefoldError("components must share one degree")
        if not _normalized:
            comps = content_normalize(comps)
        self.components = tuple(comps)

    @classmethod
    def identity(cls) -> "SpaceMap":
        return cls([HomPoly.variable(4, i) for i in range(4)], _normalized=True)

    @property
    def degree(self) -> int:
        return next(c.degree for c in self.components if not c.is_zero)

    def __eq__(self, other):
        return isinstance(other, SpaceMap) and self.components == other.components

    def __repr__(self):
        return f"SpaceMap(deg={self.degree})"

    def apply(self, pt):
        vals = [evaluate(c, pt) for c in self.components]
        if all(v == 0 for v in vals):
            return None
        return normalize_point(vals)


def build_involution(q: QuarticData) -> SpaceMap:
    """(x0 : x1 : x2 : x3) -> (-A x0 - B : A x1 : A x2 : A x3)."""
    x0, x1, x2, x3 = variables(4)
    A4 = lift_plane_poly(q.A)
    B4 = lift_plane_poly(q.B)
    return SpaceMap([-(A4 * x0) - B4, A4 * x1, A4 * x2, A4 * x3])


def is_involution(f: SpaceMap) -> bool:
    comps = [substitute(c, f.components) for c in f.components]
    if all(c.is_zero for c in comps):
        raise ThreefoldError("degenerate composition")
    comps = content_normalize(comps)
    if _all_proportional([c for c in comps if not c.is_zero]):
        raise ThreefoldError("degenerate composition (collapsed to a point)")
    return SpaceMap(comps, _normalized=True) == SpaceMap.identity()


def preserves_quartic(f: SpaceMap, q: QuarticData) -> bool:
    """Membership in the decomposition group of D: D divides D o f exactly."""
    pullback = substitute(q.D, f.components)
    if pullback.is_zero:
        return False
    _, ok = poly_divide(pullback, q.D)
    return ok


def pullback_quotient(f: SpaceMap, q: QuarticData) -> HomPoly:
    pullback = substitute(q.D, f.components)
    quo, ok = poly_divide(pullback, q.D)
    if not ok:
        raise ThreefoldError("map does not preserve the quartic")
    return quo


def base_lines(q: QuarticData):
    """The six lines through P joining it to the rational points of
    {A = 0} n {B = 0} in the plane (x1 : x2 : x3).

    Returns the six plane points (each encodes the line (s : t a1 : t a2 :
    t a3)); raises when the conic and cubic meet in fewer than six distinct
    rational points.
    """
    pts = common_zeros_plane([q.A, q.B])
    if len(pts) != 6:
        raise ThreefoldError(
            f"B not general enough: conic and cubic share {len(pts)} rational "
            "points, need 6 distinct"
        )
    # Bs(phi) = V(A, B): every involution component vanishes on every line
    phi = build_involution(q)
    origin = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    for a in pts:
        direction = (Fraction(0),) + tuple(a)
        for comp in phi.components:
            if any(c != 0 for c in restrict_to_line(comp, origin, direction)):
                raise ThreefoldError(f"involution component does not vanish on line {a}")
    return pts


def bs_not_in_quartic(lines, q: QuarticData) -> bool:
    """True iff at least one base line is not contained in D (restrict D to
    each line as a degree-4 binary form and test for a nonzero one)."""
    origin = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    for a in lines:
        direction = (Fraction(0),) + tuple(a)
        coeffs = restrict_to_line(q.D, origin, direction)
        if any(c != 0 for c in coeffs):
            return True
    return False


def line_restrictions(lines, q: QuarticData):
    """Degree-4 restriction coefficient lists of D on each base line."""
    origin = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    return [restrict_to_line(q.D, origin, (Fraction(0),) + tuple(a)) for a in lines]


# -- concrete rational instances ------------------------------------------------


def _cubic_from_conic_restriction(root_pattern):
    """A cubic in (x1, x2, x3) whose restriction to the conic x1 x3 = x2^2,
    parametrized by (1 : t : t^2), equals the given monic degree-6 polynomial
    in t (as a coefficient list, ascending)."""
    x1, x2, x3 = variables(3)
    lift = {
        0: x1**3, 1: x1**2 * x2, 2: x1**2 * x3, 3: x1 * x2 * x3,
        4: x1 * x3**2, 5: x2 * x3**2, 6: x3**3,
    }
    B = HomPoly.zero(3)
    for m, c in enumerate(root_pattern):
        if c:
            B = B + Fraction(c) * lift[m]
    return B


def _poly_from_roots(roots):
    coeffs = [Fraction(1)]
    for r in roots:
        coeffs = [Fraction(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= Fraction(r) * coeffs[i + 1]
    return coeffs


def desk_instance() -> QuarticData:
    """The concrete rational witness: A = x1 x3 - x2^2 (rank 3), B cutting the
    conic in the six parameter values {0, +-1, +-2, 3}, C = sum of fourth
    powers (which vanishes at none of the six points, so no base line lies
    on D)."""
    x1, x2, x3 = variables(3)
    A = x1 * x3 - x2**2
    B = _cubic_from_conic_restriction(_poly_from_roots([0, 1, -1, 2, -2, 3]))
    C = x1**4 + x2**4 + x3**4
    return QuarticData.build(A, B, C)


def tangent_instance() -> QuarticData:
    """B meets the conic with a double parameter value: base_lines must
    reject it."""
    x1, x2, x3 = variables(3)
    A = x1 * x3 - x2**2
    B = _cubic_from_conic_restriction(_poly_from_roots([0, 0, 1, -1, 2, -2]))
    C = x1**4 + x2**4 + x3**4
    return QuarticData.build(A, B, C, validate=False)


def rigged_instance() -> QuarticData:
    """C forced to vanish on the whole conic, so every base line lies inside
    the (no longer general) quartic: the negative witness."""
    x1, x2, x3 = variables(3)
    A = x1 * x3 - x2**2
    B = _cubic_from_conic_restriction(_poly_from_roots([0, 1, -1, 2, -2, 3]))
    C = A * (x1**2 + x2**2 + x3**2)
    return QuarticData.build(A, B, C, validate=False)
