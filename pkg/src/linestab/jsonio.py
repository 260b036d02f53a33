"""Strict JSON encoding of the geometric types.

Every scalar travels as a rational string "p" or "p/q".  Raw JSON numbers
(ints and especially floats) are rejected at parse time: a float that has
already been rounded cannot be un-rounded, so the format refuses to accept
one.  Structural integers (indices, counts, seeds) stay ordinary JSON
numbers; the string rule is for coordinates and measurements only.
"""

from __future__ import annotations

from typing import Optional

from .geometry import ConvexBody, ConvexPolygon3, Line3, Vec3
from .higherdim import LineD, PointD
from .rays import ConvexRegion2, Halfplane, Line2, Ray2, RayTriple, Vec2
from .scalar import Rat, format_rational, parse_rational

__all__ = [
    "ParseError",
    "scalar_from_json",
    "scalar_to_json",
    "vec3_from_json",
    "vec3_to_json",
    "vec2_from_json",
    "vec2_to_json",
    "line3_from_json",
    "line3_to_json",
    "body_from_json",
    "body_to_json",
    "polygon_to_json",
    "ray2_from_json",
    "ray2_to_json",
    "triple_from_json",
    "halfplane_to_json",
    "region_to_json",
    "line2_to_json",
    "lined_from_json",
    "lined_to_json",
]


class ParseError(ValueError):
    pass


def scalar_from_json(obj) -> Rat:
    if not isinstance(obj, str):
        raise ParseError(
            f"expected a rational string, got {type(obj).__name__}: {obj!r}"
            + (" (floats are rejected; write the exact ratio)" if isinstance(obj, float) else "")
        )
    try:
        return parse_rational(obj)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def scalar_to_json(x) -> str:
    return format_rational(x)


def _coords_from_json(obj, length: int, what: str) -> list:
    if not isinstance(obj, (list, tuple)) or len(obj) != length:
        raise ParseError(f"{what} must be a list of {length} rational strings")
    return [scalar_from_json(c) for c in obj]


def vec3_from_json(obj) -> Vec3:
    return Vec3(*_coords_from_json(obj, 3, "a 3D point"))


def vec3_to_json(v: Vec3) -> list:
    return [scalar_to_json(v.x), scalar_to_json(v.y), scalar_to_json(v.z)]


def vec2_from_json(obj) -> Vec2:
    return Vec2(*_coords_from_json(obj, 2, "a 2D point"))


def vec2_to_json(v: Vec2) -> list:
    return [scalar_to_json(v.x), scalar_to_json(v.y)]


def _field(obj, key: str, what: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{what} must be an object with a {key!r} field")
    return obj[key]


def line3_from_json(obj) -> Line3:
    anchor = vec3_from_json(_field(obj, "anchor", "a line"))
    direction = vec3_from_json(_field(obj, "dir", "a line"))
    try:
        return Line3(anchor, direction)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def line3_to_json(line: Line3) -> dict:
    return {"anchor": vec3_to_json(line.anchor), "dir": vec3_to_json(line.dir)}


def body_from_json(obj) -> ConvexBody:
    verts = _field(obj, "vertices", "a body")
    if not isinstance(verts, list) or not verts:
        raise ParseError("a body needs a nonempty vertex list")
    inflation = scalar_from_json(_field(obj, "inflation", "a body"))
    try:
        return ConvexBody(tuple(vec3_from_json(v) for v in verts), inflation)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def body_to_json(body: ConvexBody) -> dict:
    return {
        "vertices": [vec3_to_json(v) for v in body.vertices],
        "inflation": scalar_to_json(body.inflation),
    }


def polygon_to_json(poly: ConvexPolygon3) -> dict:
    return {"vertices": [vec3_to_json(v) for v in poly.vertices]}


def ray2_from_json(obj) -> Ray2:
    origin = vec2_from_json(_field(obj, "origin", "a ray"))
    direction = vec2_from_json(_field(obj, "dir", "a ray"))
    try:
        return Ray2(origin, direction)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def ray2_to_json(ray: Ray2) -> dict:
    return {"origin": vec2_to_json(ray.origin), "dir": vec2_to_json(ray.dir)}


def triple_from_json(obj) -> RayTriple:
    rays = _field(obj, "rays", "a ray triple")
    if not isinstance(rays, list) or len(rays) != 3:
        raise ParseError("a ray triple needs exactly three rays")
    return RayTriple(*(ray2_from_json(r) for r in rays))


def halfplane_to_json(h: Halfplane) -> dict:
    return {"normal": vec2_to_json(h.normal), "offset": scalar_to_json(h.offset)}


def region_to_json(region: ConvexRegion2) -> list:
    return [halfplane_to_json(h) for h in region.halfplanes]


def line2_to_json(line: Line2) -> dict:
    return {"normal": vec2_to_json(line.normal), "offset": scalar_to_json(line.offset)}


def lined_from_json(obj, d: Optional[int] = None) -> LineD:
    anchor = _field(obj, "anchor", "a d-dimensional line")
    direction = _field(obj, "dir", "a d-dimensional line")
    if not isinstance(anchor, list) or not isinstance(direction, list):
        raise ParseError("a d-dimensional line needs coordinate lists")
    if d is not None and (len(anchor) != d or len(direction) != d):
        raise ParseError(f"expected {d} coordinates")
    if len(anchor) != len(direction):
        raise ParseError("anchor and direction lengths differ")
    try:
        return LineD(
            PointD(tuple(scalar_from_json(c) for c in anchor)),
            PointD(tuple(scalar_from_json(c) for c in direction)),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def lined_to_json(line: LineD) -> dict:
    return {
        "anchor": [scalar_to_json(c) for c in line.anchor.coords],
        "dir": [scalar_to_json(c) for c in line.dir.coords],
    }
