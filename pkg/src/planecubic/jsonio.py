"""JSON encodings of the library's values (rationals as "num/den" strings)."""

from __future__ import annotations

from fractions import Fraction

from .cremona import BubbleForest, BubbleNode, CremonaMap, HomaloidalType
from .elliptic import CurvePoint, WeierstrassCurve
from .exact import HomPoly
from .sarkisov import (
    FactorizationState,
    SarkisovLink,
    SarkisovTrace,
    plane_state,
)
from .surfaces import SurfaceModel


class DecodeError(ValueError):
    pass


def rat_to_json(r) -> str:
    return str(Fraction(r))


def rat_from_json(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise DecodeError(f"bad rational {s!r}: {e}")


def poly_to_json(p: HomPoly) -> dict:
    return {
        "vars": p.nvars,
        "terms": [
            {"exp": list(e), "coef": rat_to_json(c)}
            for e, c in sorted(p.terms.items(), reverse=True)
        ],
    }


def poly_from_json(obj) -> HomPoly:
    try:
        nvars = int(obj["vars"])
        terms = {
            tuple(int(x) for x in t["exp"]): rat_from_json(t["coef"])
            for t in obj["terms"]
        }
        return HomPoly(nvars, terms)
    except (KeyError, TypeError, ValueError) as e:
        raise DecodeError(f"bad polynomial object: {e}")


def map_to_json(f: CremonaMap) -> dict:
    return {"deg": f.degree, "components": [poly_to_json(c) for c in f.components]}


def map_from_json(obj) -> CremonaMap:
    try:
        comps = [poly_from_json(c) for c in obj["components"]]
    except (KeyError, TypeError) as e:
        raise DecodeError(f"bad map object: {e}")
    f = CremonaMap(comps)
    if "deg" in obj and int(obj["deg"]) != f.degree:
        raise DecodeError(f"declared degree {obj['deg']} != actual {f.degree}")
    return f


def curve_to_json(c: WeierstrassCurve) -> dict:
    return {"p": rat_to_json(c.p), "q": rat_to_json(c.q)}


def curve_from_json(obj) -> WeierstrassCurve:
    try:
        return WeierstrassCurve(rat_from_json(obj["p"]), rat_from_json(obj["q"]))
    except (KeyError, TypeError) as e:
        raise DecodeError(f"bad curve object: {e}")


def curve_point_to_json(pt: CurvePoint):
    if pt.is_infinity:
        return "O"
    return {"x": rat_to_json(pt.x), "y": rat_to_json(pt.y)}


def curve_point_from_json(obj) -> CurvePoint:
    if obj == "O":
        return CurvePoint.infinity()
    try:
        return CurvePoint(rat_from_json(obj["x"]), rat_from_json(obj["y"]))
    except (KeyError, TypeError) as e:
        raise DecodeError(f"bad point object: {e}")


def proj_point_to_json(pt):
    return [rat_to_json(c) for c in pt]


def proj_point_from_json(obj):
    try:
        return tuple(rat_from_json(c) for c in obj)
    except TypeError as e:
        raise DecodeError(f"bad projective point: {e}")


def forest_to_json(forest: BubbleForest) -> list:
    out = []
    for n in forest:
        entry = {
            "id": n.id,
            "parent": n.parent,
            "level": n.level,
            "mult": n.mult,
            "on_cubic": n.on_cubic,
        }
        if n.point is not None:
            entry["point"] = proj_point_to_json(n.point)
        if n.direction is not None:
            entry["dir"] = (
                n.direction if isinstance(n.direction, str) else rat_to_json(n.direction)
            )
        out.append(entry)
    return out


def forest_from_json(obj) -> BubbleForest:
    nodes = []
    try:
        for entry in obj:
            direction = entry.get("dir")
            if direction is not None and direction != "inf":
                direction = rat_from_json(direction)
            point = entry.get("point")
            if point is not None:
                point = proj_point_from_json(point)
            nodes.append(
                BubbleNode(
                    id=int(entry["id"]),
                    parent=entry["parent"],
                    level=int(entry["level"]),
                    mult=int(entry["mult"]),
                    on_cubic=bool(entry["on_cubic"]),
                    point=point,
                    direction=direction,
                )
            )
    except (KeyError, TypeError, ValueError) as e:
        raise DecodeError(f"bad forest object: {e}")
    return BubbleForest(nodes)


def type_to_json(t: HomaloidalType) -> dict:
    return {"d": t.d, "mults": list(t.mults)}


def model_to_json(m: SurfaceModel) -> dict:
    if m.is_plane:
        return {"kind": "P2"}
    return {"kind": "Fn", "n": m.n}


def model_from_json(obj) -> SurfaceModel:
    try:
        if obj["kind"] == "P2":
            return SurfaceModel.plane()
        return SurfaceModel.hirzebruch(int(obj["n"]))
    except (KeyError, TypeError) as e:
        raise DecodeError(f"bad model object: {e}")


def link_to_json(link: SarkisovLink) -> dict:
    out = {
        "kind": link.kind,
        "center": link.center,
        "vp": link.vp,
        "from": model_to_json(link.from_model),
        "to": model_to_json(link.to_model),
        "system": list(link.system_after),
    }
    if link.kind == "II":
        out["case"] = link.case_tag
    return out


def link_from_json(obj) -> SarkisovLink:
    try:
        return SarkisovLink(
            kind=obj["kind"],
            center=obj["center"],
            from_model=model_from_json(obj["from"]),
            to_model=model_from_json(obj["to"]),
            vp=bool(obj["vp"]),
            case_tag=obj.get("case"),
            system_after=tuple(int(c) for c in obj["system"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DecodeError(f"bad link object: {e}")


def trace_to_json(trace: SarkisovTrace) -> dict:
    return {
        "links": [link_to_json(l) for l in trace.links],
        "all_vp": trace.all_vp,
        "final_system": list(trace.final.system),
        "lints": list(trace.lints),
    }


def state_from_json(obj) -> FactorizationState:
    """Enriched starting state: {"degree": d, "points": [{"mult", "on_cubic",
    "children": [...]}, ...], "track_cubic": bool}."""

    def spec(node):
        try:
            return (
                int(node["mult"]),
                bool(node.get("on_cubic", False)),
                [spec(k) for k in node.get("children", [])],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DecodeError(f"bad enriched point: {e}")

    try:
        degree = int(obj["degree"])
        points = [spec(p) for p in obj.get("points", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise DecodeError(f"bad enriched state: {e}")
    return plane_state(degree, points, track_cubic=bool(obj.get("track_cubic", True)))
