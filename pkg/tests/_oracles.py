"""Independent oracles shared by the test modules.

The chord-and-reflect oracle computes the group law from its definition: the
binary-cubic restriction of the curve equation to the chord (or tangent),
with the two known roots stripped off exactly.  It never uses the slope
formulas under test.
"""

from fractions import Fraction

from planecubic.elliptic import CurvePoint, O, to_projective
from planecubic.exact import HomPoly, evaluate


def binary_restriction(p: HomPoly, u, v):
    """Coefficients c_k of p(s u + t v) = sum c_k s^(d-k) t^k."""
    d = p.degree
    out = [Fraction(0)] * (d + 1)
    for e, coef in p.terms.items():
        partial = {0: coef}
        for ui, vi, k in zip(u, v, e):
            for _ in range(k):
                nxt = {}
                for tdeg, c in partial.items():
                    if ui != 0:
                        nxt[tdeg] = nxt.get(tdeg, Fraction(0)) + c * ui
                    if vi != 0:
                        nxt[tdeg + 1] = nxt.get(tdeg + 1, Fraction(0)) + c * vi
                partial = nxt
                if not partial:
                    break
        for tdeg, c in partial.items():
            out[tdeg] += c
    return out


def chord_reflect(curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """P + Q by intersecting the chord with the cubic and reflecting."""
    F = curve.equation
    A = to_projective(P)
    B = to_projective(Q)
    if A == B:
        # tangent direction from the gradient
        fx = evaluate(F.partial(0), A)
        fy = evaluate(F.partial(1), A)
        V = (fy, -fx, Fraction(0))
        if all(c == 0 for c in V):
            fz = evaluate(F.partial(2), A)
            V = (fz, Fraction(0), -fx)
        B = tuple(a + v for a, v in zip(A, V))
        if all(c == 0 for c in B):
            raise ValueError("degenerate tangent parametrization")
        c = binary_restriction(F, A, B)
        assert c[0] == 0 and c[1] == 0, "tangency root stripping failed"
        c2, c3 = c[2], c[3]
        if c2 == 0 and c3 == 0:
            third = A  # inflectional tangent: triple contact
        else:
            third = tuple(c3 * a - c2 * b for a, b in zip(A, B))
    else:
        c = binary_restriction(F, A, B)
        assert c[0] == 0 and c[3] == 0, "chord endpoints are not both on the curve"
        c1, c2 = c[1], c[2]
        if c1 == 0 and c2 == 0:
            raise ValueError("line contained in the cubic (impossible: irreducible)")
        third = tuple(c2 * a - c1 * b for a, b in zip(A, B))
    x, y, z = third
    if z == 0:
        return O
    return CurvePoint(x / z, -y / z)
