"""Birational self-maps of P^2: composition, decomposition-group membership,
infinitely-near base point forests, homaloidal types."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import (
    AffinePoly,
    ExactError,
    HomPoly,
    common_zeros_plane,
    content_normalize,
    evaluate,
    local_chart,
    mult_at,
    normalize_point,
    poly_divide,
    rational_roots,
    substitute,
    _all_proportional,
)


class CremonaError(Exception):
    pass


class IrrationalBasePointError(CremonaError):
    pass


class NoetherViolation(CremonaError):
    pass


_DEFAULT_SEED = 20240

DIR_INF = "inf"  # the direction not covered by the first blowup chart


class CremonaMap:
    """Birational self-map of P^2 as a content-normalized polynomial triple."""

    __slots__ = ("components", "_cached_type")

    def __init__(self, components, _normalized=False):
        comps = list(components)
        if len(comps) != 3:
            raise CremonaError("a plane Cremona map needs exactly 3 components")
        if any(c.nvars != 3 for c in comps):
            raise CremonaError("components must be polynomials in 3 variables")
        degs = {c.degree for c in comps if not c.is_zero}
        if len(degs) != 1:
            raise CremonaError("components must be nonzero of one common degree")
        if not _normalized:
            comps = content_normalize(comps)
        if _all_proportional([c for c in comps if not c.is_zero]):
            raise CremonaError("components are proportional: map is not dominant")
        self.components = tuple(comps)
        self._cached_type = None

    @classmethod
    def identity(cls) -> "CremonaMap":
        return cls([HomPoly.variable(3, i) for i in range(3)], _normalized=True)

    @property
    def degree(self) -> int:
        return self.components[0].degree

    @property
    def is_identity(self) -> bool:
        return self == CremonaMap.identity()

    def __eq__(self, other):
        return (
            isinstance(other, CremonaMap) and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"CremonaMap(deg={self.degree}, {list(self.components)})"

    def apply(self, pt):
        """Image of a projective point, or None if pt is a base point."""
        vals = [evaluate(c, pt) for c in self.components]
        if all(v == 0 for v in vals):
            return None
        return normalize_point(vals)


def compose(f: CremonaMap, g: CremonaMap) -> CremonaMap:
    """f after g.  Substitutes, strips the common content, renormalizes."""
    comps = [substitute(c, g.components) for c in f.components]
    if all(c.is_zero for c in comps):
        raise CremonaError("composition collapsed to zero")
    comps = content_normalize(comps)
    if _all_proportional(comps):
        raise CremonaError("composition is not dominant (components collapsed)")
    return CremonaMap(comps, _normalized=True)


# -- homaloidal types ---------------------------------------------------------


@dataclass(frozen=True)
class HomaloidalType:
    d: int
    mults: tuple

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(sorted(self.mults, reverse=True)))

    def __repr__(self):
        return f"({self.d}; {','.join(map(str, self.mults)) or '-'})"


def noether_check(t: HomaloidalType) -> bool:
    """The equations of condition: sum m = 3d-3 and sum m^2 = d^2-1."""
    return (
        sum(t.mults) == 3 * t.d - 3
        and sum(m * m for m in t.mults) == t.d * t.d - 1
    )


def is_de_jonquieres(t: HomaloidalType) -> bool:
    """Type (d; d-1, 1^(2d-2)), the pencil-of-lines preserving maps."""
    if not noether_check(t):
        raise NoetherViolation(f"{t} is not a homaloidal type")
    if t.d == 1:
        return True
    expected = (t.d - 1,) + (1,) * (2 * t.d - 2)
    return t.mults == expected


def composition_degree(t_f: HomaloidalType, t_g: HomaloidalType, shared) -> int:
    """deg(g o f^-1) = d e - sum m_i l_i over coincident base points."""
    d = t_f.d * t_g.d - sum(m * l for m, l in shared)
    if d < 1:
        raise CremonaError(
            f"composition degree {d} < 1: inconsistent shared-point data"
        )
    return d


# -- the bubble forest --------------------------------------------------------


@dataclass(frozen=True)
class BubbleNode:
    id: int
    parent: Optional[int]
    level: int
    mult: int
    on_cubic: bool
    point: Optional[tuple]  # proper points: normalized projective coordinates
    direction: object = None  # infinitely near: Fraction in the parent chart, or "inf"


class BubbleForest:
    def __init__(self, nodes):
        self.nodes = list(nodes)
        self._by_id = {n.id: n for n in self.nodes}

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def node(self, node_id) -> BubbleNode:
        return self._by_id[node_id]

    def roots(self):
        return [n for n in self.nodes if n.parent is None]

    def children(self, node_id):
        return [n for n in self.nodes if n.parent == node_id]

    def mults(self):
        return sorted((n.mult for n in self.nodes), reverse=True)

    def key_of(self, node_id):
        """Lineage key identifying the bubble point independently of the map."""
        n = self._by_id[node_id]
        if n.parent is None:
            return ("pt", n.point)
        return (self.key_of(n.parent), "dir", str(n.direction))

    def max_mult_node(self) -> BubbleNode:
        best = None
        for n in self.nodes:
            if best is None or n.mult > best.mult:
                best = n
        if best is None:
            raise CremonaError("empty forest has no maximal point")
        return best

    def __repr__(self):
        return f"BubbleForest({self.nodes})"


def _system_mult_affine(locals_, rng) -> int:
    """Multiplicity of the local linear system at the origin: minimum over
    components, cross-checked on 3 random rational combinations."""
    orders = [g.order() for g in locals_ if not g.is_zero]
    if not orders:
        raise CremonaError("system vanishes identically near the point")
    m = min(orders)
    hits = 0
    for _ in range(3):
        combo = AffinePoly(locals_[0].nvars, {})
        for g in locals_:
            combo = combo + g * Fraction(rng.randint(1, 997))
        if not combo.is_zero and combo.order() == m:
            hits += 1
        elif not combo.is_zero and combo.order() < m:
            raise CremonaError("multiplicity cross-check below component minimum (bug)")
    if hits == 0:
        raise CremonaError("multiplicity cross-check failed: all combinations cancel")
    return m


def base_forest(
    f: CremonaMap,
    cubic: Optional[HomPoly] = None,
    hints=None,
    rng=None,
    verify=True,
) -> BubbleForest:
    """Full (infinitely near) base point analysis of a plane Cremona map.

    Proper base points are found over Q (or supplied as hints); each is blown
    up in affine charts, dividing out the exceptional factor to the system's
    multiplicity, until no base point remains on the exceptional line.  When a
    cubic is supplied, every node carries the incidence flag against the
    cubic's strict transform computed in the same chart.
    """
    rng = rng or random.Random(_DEFAULT_SEED)
    if f.degree == 1:
        return BubbleForest([])
    if hints is not None:
        proper = []
        for pt in hints:
            pt = normalize_point(pt)
            if any(evaluate(c, pt) != 0 for c in f.components):
                raise CremonaError(f"hint {pt} is not a base point")
            proper.append(pt)
    else:
        proper = common_zeros_plane(list(f.components))

    nodes = []
    counter = [0]

    def new_id():
        counter[0] += 1
        return counter[0] - 1

    for pt in sorted(set(proper)):
        locals_ = [local_chart(c, pt)[0] for c in f.components]
        m = _system_mult_affine(locals_, rng)
        on_c = cubic is not None and evaluate(cubic, pt) == 0
        nid = new_id()
        nodes.append(BubbleNode(nid, None, 0, m, on_c, tuple(pt)))
        cub_local = local_chart(cubic, pt)[0] if cubic is not None else None
        _blow_up(locals_, m, cub_local, nid, 1, nodes, new_id, rng)

    forest = BubbleForest(nodes)
    if verify:
        d = f.degree
        msum = sum(n.mult for n in forest)
        msq = sum(n.mult * n.mult for n in forest)
        if msum != 3 * d - 3 or msq != d * d - 1:
            raise IrrationalBasePointError(
                f"forest multiplicities ({msum}, {msq}) violate the equations of "
                f"condition ({3 * d - 3}, {d * d - 1}): irrational base point "
                "or incomplete forest"
            )
    return forest


_S = AffinePoly(2, {(1, 0): 1})
_ST = AffinePoly(2, {(1, 1): 1})
_T = AffinePoly(2, {(0, 1): 1})


def _blow_up(locals_, m, cub_local, parent_id, level, nodes, new_id, rng):
    """Blow up the origin; record base points of the transformed system on the
    exceptional line and recurse."""
    # chart A: (u, v) = (s, s t), exceptional line s = 0
    chart_a = [g.substitute_two(_S, _ST).divide_var_power(0, m) for g in locals_]
    cub_a = None
    if cub_local is not None:
        mc = 0 if cub_local.eval((0, 0)) != 0 else cub_local.order()
        cub_a = cub_local.substitute_two(_S, _ST)
        if mc:
            cub_a = cub_a.divide_var_power(0, mc)

    # directions with a base point: common roots of the restrictions to E
    restrictions = [g.restrict_zero(0) for g in chart_a]
    nonzero = [r for r in restrictions if not r.is_zero]
    if not nonzero:
        raise CremonaError("exceptional valuation exceeded multiplicity (bug)")
    dirs = None
    for r in nonzero:
        roots = set(rational_roots(r.univariate_in(1)))
        dirs = roots if dirs is None else (dirs & roots)
        if not dirs:
            break
    for t0 in sorted(dirs or ()):
        shifted = [g.shift((0, t0)) for g in chart_a]
        cm = _system_mult_affine(shifted, rng)
        if cm == 0:
            continue
        on_c = cub_a is not None and cub_a.eval((0, t0)) == 0
        nid = new_id()
        nodes.append(BubbleNode(nid, parent_id, level, cm, on_c, None, t0))
        cub_next = cub_a.shift((0, t0)) if cub_a is not None else None
        _blow_up(shifted, cm, cub_next, nid, level + 1, nodes, new_id, rng)

    # chart B: (u, v) = (s t, t), exceptional line t = 0; only its origin
    # (the direction missed by chart A) needs a separate look
    chart_b = [g.substitute_two(_ST, _T).divide_var_power(1, m) for g in locals_]
    if all(g.eval((0, 0)) == 0 for g in chart_b):
        cm = _system_mult_affine(chart_b, rng)
        cub_b = None
        if cub_local is not None:
            mc = 0 if cub_local.eval((0, 0)) != 0 else cub_local.order()
            cub_b = cub_local.substitute_two(_ST, _T)
            if mc:
                cub_b = cub_b.divide_var_power(1, mc)
        on_c = cub_b is not None and cub_b.eval((0, 0)) == 0
        nid = new_id()
        nodes.append(BubbleNode(nid, parent_id, level, cm, on_c, None, DIR_INF))
        _blow_up(chart_b, cm, cub_b, nid, level + 1, nodes, new_id, rng)


def homaloidal_type(f: CremonaMap, forest: Optional[BubbleForest] = None) -> HomaloidalType:
    """(degree; nonincreasing multiplicities of every forest node)."""
    if f._cached_type is not None and forest is None:
        return f._cached_type
    if forest is None:
        forest = base_forest(f)
    t = HomaloidalType(f.degree, tuple(forest.mults()))
    if not noether_check(t):
        raise NoetherViolation(
            f"type {t} violates the equations of condition: base-forest bug"
        )
    if forest is None or f._cached_type is None:
        f._cached_type = t
    return t


def shared_base_pairs(forest_f: BubbleForest, forest_g: BubbleForest):
    """(m_i, l_i) pairs over bubble points common to both forests, matched by
    chart lineage."""
    keys_f = {forest_f.key_of(n.id): n.mult for n in forest_f}
    keys_g = {forest_g.key_of(n.id): n.mult for n in forest_g}
    return sorted(
        (keys_f[k], keys_g[k]) for k in keys_f.keys() & keys_g.keys()
    )


# -- decomposition group ------------------------------------------------------


def _is_weierstrass(cubic: HomPoly):
    """Recognize lambda*(y^2 z - x^3 - p x z^2 - q z^3); returns (p, q) or None."""
    if cubic.nvars != 3 or cubic.degree != 3:
        return None
    lam = cubic.coefficient((0, 2, 1))
    if lam == 0:
        return None
    scaled = {e: c / lam for e, c in cubic.terms.items()}
    if scaled.get((3, 0, 0)) != -1:
        return None
    p = -scaled.get((1, 0, 2), Fraction(0))
    q = -scaled.get((0, 0, 3), Fraction(0))
    expect = {(0, 2, 1): Fraction(1), (3, 0, 0): Fraction(-1)}
    if p:
        expect[(1, 0, 2)] = -p
    if q:
        expect[(0, 0, 3)] = -q
    return (p, q) if scaled == expect else None


def check_cubic_nonsingular(cubic: HomPoly) -> None:
    """Nonsingularity precondition: discriminant for Weierstrass shapes, no
    rational common zero of the partials otherwise (Q-only, documented)."""
    wz = _is_weierstrass(cubic)
    if wz is not None:
        p, q = wz
        if -16 * (4 * p**3 + 27 * q**2) == 0:
            raise CremonaError("cubic is singular (zero discriminant)")
        return
    parts = [cubic.partial(i) for i in range(3)]
    try:
        pts = common_zeros_plane(parts)
    except ExactError:
        raise CremonaError("cubic singularity check failed on degenerate partials")
    for pt in pts:
        if evaluate(cubic, pt) == 0:
            raise CremonaError(f"cubic is singular at {pt}")


def is_in_dec(f: CremonaMap, cubic: HomPoly, samples=None, curve=None) -> bool:
    """Membership in the decomposition group of the cubic.

    True iff the cubic divides its pullback exactly and the restriction to
    sample points is non-constant and injective (birationality proxy; the
    samples come from the curve's group law when a curve is supplied).
    """
    check_cubic_nonsingular(cubic)
    pullback = substitute(cubic, f.components)
    if pullback.is_zero:
        return False
    _, ok = poly_divide(pullback, cubic)
    if not ok:
        return False
    if samples is None and curve is not None:
        from .elliptic import default_samples, to_projective

        samples = [to_projective(pt) for pt in default_samples(curve)]
    if samples is None:
        return True  # divisibility only; no sample data to test restriction
    images = []
    used = 0
    for pt in samples:
        img = f.apply(pt)
        if img is None:
            continue  # base point: restriction defined by continuity, skip
        if evaluate(cubic, img) != 0:
            return False
        images.append(img)
        used += 1
    if used < 3:
        raise CremonaError("not enough usable sample points on the cubic")
    if len(set(images)) != used:
        return False  # not injective on the sample
    if len(set(images)) == 1:
        return False  # constant restriction
    return True


def inertia_witness(curve, P, Q) -> CremonaMap:
    """compose(phi_{P+Q}, phi_R) with R = -(P+Q): restricts to the identity
    on the cubic.

    Computation shows this composite is the identity map of P^2 itself
    (phi_{-S} is the exact inverse of phi_S): see inertia_witness_triple for
    a nontrivial inertia element.
    """
    from .elliptic import add, neg, translation_map

    S = add(curve, P, Q)
    if P.is_infinity or Q.is_infinity or S.is_infinity:
        raise CremonaError("inertia witness needs P, Q, P+Q all nonzero")
    R = neg(curve, S)
    return compose(translation_map(curve, S), translation_map(curve, R))


def inertia_witness_triple(curve, P, Q) -> CremonaMap:
    """phi_{-(Q+P)} o phi_Q o phi_P: a nontrivial inertia element whenever
    P + Q != O (its nontriviality is exactly the failure of the translation
    section to be a homomorphism: deg(phi_Q o phi_P) = 10 != 4)."""
    from .elliptic import add, neg, translation_map

    S = add(curve, Q, P)
    if P.is_infinity or Q.is_infinity or S.is_infinity:
        raise CremonaError("inertia witness needs P, Q, Q+P all nonzero")
    inner = compose(translation_map(curve, Q), translation_map(curve, P))
    return compose(translation_map(curve, neg(curve, S)), inner)
