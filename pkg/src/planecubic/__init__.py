"""planecubic: exact tools for plane Cremona maps preserving a nonsingular cubic.

Everything computes over Q with no floating point anywhere: the elliptic
group law and its degree-4 translation maps, full infinitely-near base point
analysis, homaloidal-type arithmetic, a 2-dimensional Sarkisov factorization
engine that flags each link as volume preserving or not, and the quartic
threefold involution whose base lines escape the boundary.
"""

from .cremona import (
    BubbleForest,
    CremonaMap,
    HomaloidalType,
    base_forest,
    compose,
    composition_degree,
    homaloidal_type,
    inertia_witness,
    inertia_witness_triple,
    is_de_jonquieres,
    is_in_dec,
    noether_check,
    shared_base_pairs,
)
from .elliptic import (
    CurvePoint,
    O,
    WeierstrassCurve,
    add,
    aut_order,
    default_samples,
    multiple,
    neg,
    translation_map,
)
from .exact import (
    HomPoly,
    Rational,
    common_zeros_plane,
    content_normalize,
    evaluate,
    mult_at,
    substitute,
    variables,
)
from .sarkisov import (
    FactorizationState,
    SarkisovLink,
    SarkisovTrace,
    factorize,
    jonquieres_centers,
    next_link,
    plane_state,
)
from .surfaces import (
    SurfaceModel,
    blowdown_vp,
    blowup_vp,
    canonical_class,
    intersect,
    is_mf_cy_admissible,
    sarkisov_degree,
)
from .threefold import (
    QuarticData,
    SpaceMap,
    base_lines,
    bs_not_in_quartic,
    build_involution,
    desk_instance,
    is_involution,
    preserves_quartic,
)

__all__ = [
    "BubbleForest", "CremonaMap", "HomaloidalType", "base_forest", "compose",
    "composition_degree", "homaloidal_type", "inertia_witness",
    "inertia_witness_triple", "is_de_jonquieres", "is_in_dec", "noether_check",
    "shared_base_pairs",
    "CurvePoint", "O", "WeierstrassCurve", "add", "aut_order",
    "default_samples", "multiple", "neg", "translation_map",
    "HomPoly", "Rational", "common_zeros_plane", "content_normalize",
    "evaluate", "mult_at", "substitute", "variables",
    "FactorizationState", "SarkisovLink", "SarkisovTrace", "factorize",
    "jonquieres_centers", "next_link", "plane_state",
    "SurfaceModel", "blowdown_vp", "blowup_vp", "canonical_class",
    "intersect", "is_mf_cy_admissible", "sarkisov_degree",
    "QuarticData", "SpaceMap", "base_lines", "bs_not_in_quartic",
    "build_involution", "desk_instance", "is_involution", "preserves_quartic",
]

__version__ = "0.1.0"
