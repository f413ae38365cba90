"""Exact scalar and polynomial arithmetic over Q: the substrate for everything else."""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from math import lcm as int_lcm

import sympy

Rational = Fraction

_VAR_NAMES = {3: ("x", "y", "z"), 4: ("x0", "x1", "x2", "x3")}


class ExactError(Exception):
    pass


class DimensionMismatch(ExactError):
    pass


class PositiveDimensionalError(ExactError):
    """The common zero locus has a curve component; carries it as a polynomial."""

    def __init__(self, component: "HomPoly"):
        self.component = component
        super().__init__(f"common positive-dimensional component: {component}")


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


def format_rational(r: Fraction) -> str:
    return str(r)


class HomPoly:
    """Sparse homogeneous polynomial in 3 or 4 variables with Fraction coefficients.

    Terms map exponent tuples (summing to the degree) to nonzero coefficients.
    The zero polynomial is the unique term-free value; its degree is None.
    Instances are immutable by convention and hashable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict):
        if nvars not in (3, 4):
            raise DimensionMismatch(f"nvars must be 3 or 4, got {nvars}")
        clean = {}
        deg = None
        for exp, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ExactError(f"bad exponent vector {exp}")
            d = sum(exp)
            if deg is None:
                deg = d
            elif d != deg:
                raise ExactError(f"non-homogeneous terms: degrees {deg} and {d}")
            clean[exp] = clean.get(exp, Fraction(0)) + c
        self.nvars = nvars
        self.terms = {e: c for e, c in clean.items() if c != 0}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "HomPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "HomPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "HomPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exp, coef=1) -> "HomPoly":
        return cls(nvars, {tuple(exp): Fraction(coef)})

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        if not self.terms:
            return None
        return sum(next(iter(self.terms)))

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def _key(self):
        return (self.nvars, tuple(sorted(self.terms.items())))

    def __eq__(self, other):
        return isinstance(other, HomPoly) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        if self.is_zero:
            return "0"
        names = _VAR_NAMES[self.nvars]
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch("mixed variable counts")

    def __add__(self, other):
        self._check_compatible(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ExactError("adding homogeneous polynomials of different degrees")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return HomPoly(self.nvars, terms)

    def __neg__(self):
        return HomPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HomPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._check_compatible(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return HomPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ExactError("negative power")
        out = HomPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def partial(self, i: int) -> "HomPoly":
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            terms[tuple(e2)] = terms.get(tuple(e2), Fraction(0)) + c * e[i]
        return HomPoly(self.nvars, terms)

    def dehomogenize(self, chart: int) -> "AffinePoly":
        """Set variable `chart` to 1; remaining variables keep their order."""
        terms = {}
        for e, c in self.terms.items():
            e2 = tuple(v for i, v in enumerate(e) if i != chart)
            terms[e2] = terms.get(e2, Fraction(0)) + c
        return AffinePoly(self.nvars - 1, terms)


def variables(n: int):
    return tuple(HomPoly.variable(n, i) for i in range(n))


class AffinePoly:
    """Inhomogeneous polynomial in local (chart) coordinates; used for
    multiplicity computations and blowup bookkeeping."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict):
        self.nvars = nvars
        self.terms = {
            tuple(e): Fraction(c) for e, c in terms.items() if Fraction(c) != 0
        }

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, AffinePoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self):
        if self.is_zero:
            return "0"
        return " + ".join(
            f"{c}*u{''.join(map(str, e))}" for e, c in sorted(self.terms.items())
        )

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return AffinePoly(self.nvars, terms)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AffinePoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return AffinePoly(self.nvars, terms)

    __rmul__ = __mul__

    def order(self) -> int:
        """Order of vanishing at the origin: minimal total degree of a term."""
        if self.is_zero:
            raise ExactError("order of the zero polynomial")
        return min(sum(e) for e in self.terms)

    def shift(self, point) -> "AffinePoly":
        """Translate so that `point` moves to the origin: u_i -> u_i + c_i."""
        point = [Fraction(c) for c in point]
        out = {}
        for e, coef in self.terms.items():
            # expand prod (u_i + c_i)^{e_i}
            partial = {(): coef}
            for i, ei in enumerate(e):
                row = _binomial_row(ei, point[i])
                nxt = {}
                for tail, c in partial.items():
                    for k, bc in row:
                        key = tail + (k,)
                        nxt[key] = nxt.get(key, Fraction(0)) + c * bc
                partial = nxt
            for exp, c in partial.items():
                out[exp] = out.get(exp, Fraction(0)) + c
        return AffinePoly(self.nvars, out)

    def eval(self, point) -> Fraction:
        point = [Fraction(c) for c in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, ei in enumerate(e):
                if ei:
                    v *= point[i] ** ei
            total += v
        return total

    def substitute_two(self, u: "AffinePoly", v: "AffinePoly") -> "AffinePoly":
        """Plug (u, v) into a 2-variable polynomial."""
        if self.nvars != 2:
            raise DimensionMismatch("substitute_two needs a 2-variable polynomial")
        one = AffinePoly(u.nvars, {(0,) * u.nvars: 1})
        pu, pv = {0: one}, {0: one}
        out = AffinePoly(u.nvars, {})
        for (a, b), c in self.terms.items():
            out = out + _pow_cached(u, a, pu) * _pow_cached(v, b, pv) * c
        return out

    def divide_var_power(self, i: int, k: int) -> "AffinePoly":
        """Exact division by u_i^k; raises if some term is not divisible."""
        terms = {}
        for e, c in self.terms.items():
            if e[i] < k:
                raise ExactError("not divisible by requested variable power")
            e2 = list(e)
            e2[i] -= k
            terms[tuple(e2)] = c
        return AffinePoly(self.nvars, terms)

    def var_order(self, i: int) -> int:
        if self.is_zero:
            raise ExactError("var_order of zero")
        return min(e[i] for e in self.terms)

    def restrict_zero(self, i: int) -> "AffinePoly":
        """Set u_i = 0."""
        terms = {e: c for e, c in self.terms.items() if e[i] == 0}
        return AffinePoly(self.nvars, terms)

    def univariate_in(self, i: int):
        """Coefficient list (ascending) when the polynomial involves only u_i."""
        coeffs = {}
        for e, c in self.terms.items():
            if any(v and j != i for j, v in enumerate(e)):
                raise ExactError("polynomial is not univariate in the requested variable")
            coeffs[e[i]] = c
        if not coeffs:
            return []
        out = [Fraction(0)] * (max(coeffs) + 1)
        for k, c in coeffs.items():
            out[k] = c
        return out


def _binomial_row(n: int, c: Fraction):
    """[(k, C(n,k) c^(n-k))] for k = 0..n."""
    row = []
    b = 1
    for k in range(n + 1):
        row.append((k, Fraction(b) * (c ** (n - k) if n != k else 1)))
        b = b * (n - k) // (k + 1)
    return row


def _pow_cached(p: AffinePoly, k: int, cache: dict) -> AffinePoly:
    if k in cache:
        return cache[k]
    v = _pow_cached(p, k - 1, cache) * p
    cache[k] = v
    return v


# -- sympy bridge (gcd / resultants / univariate factorization only) --------

_SYMS = {
    3: sympy.symbols("x y z"),
    4: sympy.symbols("x0 x1 x2 x3"),
}


def _to_sympy(p: HomPoly):
    syms = _SYMS[p.nvars]
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                t *= s**k
        expr += t
    return expr


def _from_sympy(expr, nvars: int) -> HomPoly:
    syms = _SYMS[nvars]
    poly = sympy.Poly(expr, *syms)
    terms = {}
    for exp, c in poly.terms():
        q = sympy.Rational(c)
        terms[tuple(exp)] = Fraction(int(q.p), int(q.q))
    return HomPoly(nvars, terms)


def poly_gcd(polys) -> HomPoly:
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        raise ExactError("gcd of all-zero input")
    nvars = polys[0].nvars
    g = _to_sympy(polys[0])
    for p in polys[1:]:
        g = sympy.gcd(g, _to_sympy(p))
        if g == 1:
            break
    return _from_sympy(sympy.expand(g), nvars)


def poly_divide(f: HomPoly, g: HomPoly):
    """Exact division f / g for homogeneous polynomials.

    Returns (quotient, ok). Single-divisor reduction in lex order; the
    remainder is unique, so ok=True iff g divides f exactly.
    """
    if g.is_zero:
        raise ExactError("division by zero polynomial")
    if f.is_zero:
        return HomPoly.zero(f.nvars), True
    f._check_compatible(g)
    rem = dict(f.terms)
    quo = {}
    g_lead = max(g.terms)
    g_c = g.terms[g_lead]
    while rem:
        lead = max(rem)
        if any(a < b for a, b in zip(lead, g_lead)):
            return HomPoly.zero(f.nvars), False
        q_exp = tuple(a - b for a, b in zip(lead, g_lead))
        q_c = rem[lead] / g_c
        quo[q_exp] = quo.get(q_exp, Fraction(0)) + q_c
        for e, c in g.terms.items():
            e2 = tuple(a + b for a, b in zip(q_exp, e))
            nc = rem.get(e2, Fraction(0)) - q_c * c
            if nc == 0:
                rem.pop(e2, None)
            else:
                rem[e2] = nc
    return HomPoly(f.nvars, quo), True


def divides(g: HomPoly, f: HomPoly) -> bool:
    return poly_divide(f, g)[1]


def rational_roots(coeffs):
    """All rational roots of sum(coeffs[k] t^k), via factorization over Q."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        raise ExactError("rational_roots of the zero polynomial")
    t = sympy.Symbol("t")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * t**k
        for k, c in enumerate(coeffs)
    )
    if expr.is_number:
        return []
    roots = []
    _, factors = sympy.factor_list(expr)
    for fac, _mult in factors:
        p = sympy.Poly(fac, t)
        if p.degree() == 1:
            a, b = p.all_coeffs()  # a t + b
            roots.append(Fraction(int(sympy.Rational(-b, a).p), int(sympy.Rational(-b, a).q)))
    return sorted(set(roots))


def _resultant(f, g, var):
    return sympy.resultant(f, g, var)


# -- projective-geometry operations ------------------------------------------


def evaluate(p: HomPoly, pt) -> Fraction:
    """Value of p at an affine representative of the projective point."""
    pt = [Fraction(c) for c in pt]
    if len(pt) != p.nvars:
        raise DimensionMismatch(f"point has {len(pt)} coordinates, poly has {p.nvars}")
    if all(c == 0 for c in pt):
        raise ExactError("not a projective point: all coordinates zero")
    total = Fraction(0)
    for e, c in p.terms.items():
        v = c
        for coord, k in zip(pt, e):
            if k:
                v *= coord**k
        total += v
    return total


def normalize_point(pt):
    """Scale so the last nonzero coordinate is 1 (canonical representative)."""
    pt = [Fraction(c) for c in pt]
    last = None
    for i in range(len(pt) - 1, -1, -1):
        if pt[i] != 0:
            last = i
            break
    if last is None:
        raise ExactError("zero vector is not a projective point")
    return tuple(c / pt[last] for c in pt)


def local_chart(p: HomPoly, pt):
    """Dehomogenized polynomial in the chart of pt's last nonzero coordinate,
    shifted so pt sits at the origin.  Returns (affine poly, chart index)."""
    pt = normalize_point(pt)
    chart = max(i for i, c in enumerate(pt) if c != 0)
    aff = p.dehomogenize(chart)
    coords = [c for i, c in enumerate(pt) if i != chart]
    return aff.shift(coords), chart


def mult_at(p: HomPoly, pt) -> int:
    """Order of vanishing of p at the projective point pt."""
    if p.is_zero:
        raise ExactError("multiplicity of the zero polynomial is undefined")
    local, _ = local_chart(p, pt)
    if local.is_zero:
        raise ExactError("polynomial vanishes on the whole chart")
    return local.order()


def substitute(p: HomPoly, maps) -> HomPoly:
    """p(f_1, ..., f_n) for equal-degree homogeneous f_i."""
    maps = list(maps)
    if len(maps) != p.nvars:
        raise DimensionMismatch("one substituting polynomial per variable required")
    degs = {m.degree for m in maps}
    if len(degs) != 1 or None in degs:
        raise ExactError("substituting polynomials must share one degree")
    nvars = maps[0].nvars
    caches = [{0: HomPoly.constant(nvars, 1)} for _ in maps]
    out = HomPoly.zero(nvars)
    for e, c in p.terms.items():
        term = HomPoly.constant(nvars, c)
        for i, k in enumerate(e):
            if k:
                term = term * _hompow_cached(maps[i], k, caches[i])
        out = out + term
    return out


def _hompow_cached(p: HomPoly, k: int, cache: dict) -> HomPoly:
    if k in cache:
        return cache[k]
    v = _hompow_cached(p, k - 1, cache) * p
    cache[k] = v
    return v


def content_normalize(maps) -> list:
    """Divide a component list by its polynomial gcd, then scale to integer
    primitive form with positive lex-leading coefficient (canonical form)."""
    maps = list(maps)
    if not maps or all(m.is_zero for m in maps):
        raise ExactError("content_normalize of all-zero input")
    g = poly_gcd(maps)
    if g.degree and g.degree > 0:
        out = []
        for m in maps:
            if m.is_zero:
                out.append(m)
                continue
            q, ok = poly_divide(m, g)
            if not ok:
                raise ExactError("gcd does not divide a component (bug)")
            out.append(q)
        maps = out
    # canonical scaling
    denoms = [c.denominator for m in maps for c in m.terms.values()]
    numers = [c.numerator for m in maps for c in m.terms.values()]
    scale = Fraction(int_lcm(*denoms) if denoms else 1)
    maps = [m * scale for m in maps]
    content = 0
    for m in maps:
        for c in m.terms.values():
            content = int_gcd(content, c.numerator)
    if content > 1:
        maps = [m * Fraction(1, content) for m in maps]
    for m in maps:
        if m.is_zero:
            continue
        if m.terms[max(m.terms)] < 0:
            maps = [mm * Fraction(-1) for mm in maps]
        break
    return maps


def common_zeros_plane(polys):
    """All rational projective common zeros of >= 2 polynomials in 3 variables.

    Candidates come from bivariate resultants and rational root extraction,
    then every candidate is verified against the full system.  Completeness
    holds over Q only.  A common curve component raises
    PositiveDimensionalError carrying the component.
    """
    polys = [p for p in polys if not p.is_zero]
    if len(polys) < 2:
        raise ExactError("need at least two nonzero polynomials")
    if any(p.nvars != 3 for p in polys):
        raise DimensionMismatch("common_zeros_plane expects 3-variable polynomials")
    if _all_proportional(polys):
        raise ExactError("polynomials are all proportional")
    g = poly_gcd(polys)
    if g.degree and g.degree > 0:
        raise PositiveDimensionalError(g)

    candidates = set()

    # points with z != 0: affine system in (x, y)
    x, y = sympy.symbols("x y")
    affine = []
    for p in polys:
        aff = p.dehomogenize(2)
        expr = sympy.Integer(0)
        for (a, b), c in aff.terms.items():
            expr += sympy.Rational(c.numerator, c.denominator) * x**a * y**b
        affine.append(sympy.expand(expr))
    for y0 in _affine_y_candidates(affine, x, y):
        specs = [sympy.expand(f.subs(y, y0)) for f in affine]
        specs = [s for s in specs if s != 0]
        if not specs:
            continue
        gx = specs[0]
        for s in specs[1:]:
            gx = sympy.gcd(gx, s)
        if gx.has(x):
            for x0 in _sympy_rational_roots(gx, x):
                candidates.add((x0, y0, Fraction(1)))
        elif gx == 0:
            continue

    # points with z = 0: common roots of the nonzero binary-form restrictions
    # (identically-zero restrictions impose no condition; verification below
    # re-checks the full system anyway)
    forms = []
    for p in polys:
        terms = {e[:2]: c for e, c in p.terms.items() if e[2] == 0}
        if terms:
            forms.append(terms)
    if forms:
        candidates.update(_binary_common_roots(forms))

    points = []
    for cand in candidates:
        try:
            pt = normalize_point(cand)
        except ExactError:
            continue
        if all(evaluate(p, pt) == 0 for p in polys):
            points.append(pt)
    return sorted(set(points))


def _all_proportional(polys) -> bool:
    base = polys[0]
    for p in polys[1:]:
        if p.degree != base.degree:
            return False
        # p proportional to base <=> cross products of coefficients agree
        e0 = max(base.terms)
        c0 = base.terms[e0]
        cp = p.terms.get(e0, Fraction(0))
        if cp == 0:
            return False
        scaled = {e: c * cp / c0 for e, c in base.terms.items()}
        if scaled != p.terms:
            return False
    return True


def _affine_y_candidates(affine, x, y):
    """y-values that can appear in a common zero of the affine system.

    Over-generation is fine (candidates get verified); the only requirement
    is that every true common zero's y-value appears.
    """
    with_x = [f for f in affine if f.has(x)]
    pure_y = [f for f in affine if not f.has(x) and f != 0]
    if pure_y:
        # any nonzero x-free equation already pins y to its root set
        return set(_sympy_rational_roots(pure_y[0], y))
    out = set()
    res = None
    for i in range(len(with_x)):
        for j in range(i + 1, len(with_x)):
            r = sympy.expand(sympy.resultant(with_x[i], with_x[j], x))
            if r != 0:
                res = r
                break
        if res is not None:
            break
    if res is None and len(with_x) >= 3:
        # every pair shares a factor; a combination breaks the coincidence
        # (the full system has trivial gcd, so generic t works)
        for k in range(2, len(with_x)):
            for t in range(1, 32):
                cand = sympy.expand(with_x[1] + t * with_x[k])
                if not cand.has(x):
                    continue
                r = sympy.expand(sympy.resultant(with_x[0], cand, x))
                if r != 0:
                    res = r
                    break
            if res is not None:
                break
    if res is None and with_x:
        raise ExactError("could not isolate y-candidates (degenerate system)")
    if res is not None and res.has(y):
        out.update(_sympy_rational_roots(res, y))
    return out


def _sympy_rational_roots(expr, var):
    roots = []
    _, factors = sympy.factor_list(expr, var)
    for fac, _m in factors:
        p = sympy.Poly(fac, var)
        if p.degree() == 1:
            a, b = p.all_coeffs()
            r = sympy.Rational(-b, a)
            roots.append(Fraction(int(r.p), int(r.q)))
    return roots


def _binary_common_roots(forms):
    """Rational projective roots (x:y:0) of common binary forms given as
    {(i,j): coef} exponent maps."""
    t = sympy.Symbol("t")
    exprs = []
    for terms in forms:
        e = sympy.Integer(0)
        for (a, b), c in terms.items():
            e += sympy.Rational(c.numerator, c.denominator) * t**a  # y = 1
        exprs.append(sympy.expand(e))
    g = exprs[0]
    for e in exprs[1:]:
        g = sympy.gcd(g, e)
    points = set()
    if g.has(t):
        for x0 in _sympy_rational_roots(g, t):
            points.add((x0, Fraction(1), Fraction(0)))
    # (1:0:0): every form must miss a pure-x term... i.e. have no term with b=0
    if all(all(b > 0 for (_a, b) in terms) for terms in forms):
        points.add((Fraction(1), Fraction(0), Fraction(0)))
    return points
