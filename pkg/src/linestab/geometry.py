"""Exact predicates and squared distances for lines and convex sets in R^3.

Everything here is computed over the rationals: no square roots, no floating
point, no tolerance knobs.  Distances are squared distances throughout.

Conventions
-----------
* A line is stored in canonical form: its direction is scaled so that the
  first nonzero component equals 1, and its anchor is the foot of the
  perpendicular from the origin.  Two Line3 values are equal iff they are the
  same point set.
* "General position" for a family of lines means pairwise skew (disjoint and
  non-parallel); `pairwise_skew` decides it exactly.
* A ConvexPolygon3 stores its vertices in strictly convex cyclic order; the
  one- and two-vertex degenerate cases (point, segment) are legal and every
  predicate treats them consistently.
* A ConvexBody is an arbitrary nonempty vertex cloud plus an inflation radius
  r >= 0; the body is conv(vertices) Minkowski-summed with a closed ball of
  radius r.  A line meets the body iff its squared distance to the hull is
  at most r^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .scalar import Rat, rat

__all__ = [
    "Vec3",
    "Point3",
    "Line3",
    "Plane3",
    "ConvexPolygon3",
    "ConvexBody",
    "LinePlaneHit",
    "ZeroDirection",
    "line_contains_point",
    "line_line_dist_sq",
    "line_point_dist_sq",
    "line_segment_dist_sq",
    "line_plane_intersection",
    "line_intersects_polygon",
    "line_meets_polygon_relint",
    "line_polygon_dist_sq",
    "line_body_dist_sq",
    "line_meets_body",
    "line_meets_interior",
    "pairwise_skew",
    "find_non_skew_pair",
    "perturb_line",
    "point_in_hull",
]

_ZERO = Rat(0)


class ZeroDirection(ValueError):
    """A direction vector degenerated to zero."""


@dataclass(frozen=True)
class Vec3:
    x: Rat
    y: Rat
    z: Rat

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, c) -> "Vec3":
        return Vec3(self.x * c, self.y * c, self.z * c)

    def dot(self, other: "Vec3") -> Rat:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm_sq(self) -> Rat:
        return self.dot(self)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    @staticmethod
    def of(x, y, z) -> "Vec3":
        return Vec3(rat(x), rat(y), rat(z))


Point3 = Vec3


@dataclass(frozen=True)
class Line3:
    """An unbounded line, canonicalized on construction.

    The direction is rescaled so its first nonzero component is 1; the anchor
    is replaced by the foot of the perpendicular from the origin.  Both steps
    are rational, so equal point sets compare equal as dataclasses.
    """

    anchor: Vec3
    dir: Vec3

    def __post_init__(self):
        d = self.dir
        if d.is_zero():
            raise ZeroDirection("line direction is zero")
        lead = d.x if d.x != 0 else (d.y if d.y != 0 else d.z)
        d = d.scale(Rat(1) / lead)
        a = self.anchor
        a = a - d.scale(a.dot(d) / d.dot(d))
        object.__setattr__(self, "anchor", a)
        object.__setattr__(self, "dir", d)

    @staticmethod
    def through(p: Vec3, q: Vec3) -> "Line3":
        return Line3(p, q - p)

    def at(self, t) -> Vec3:
        return self.anchor + self.dir.scale(t)


@dataclass(frozen=True)
class Plane3:
    """The plane {p : normal . p = offset}."""

    normal: Vec3
    offset: Rat

    def __post_init__(self):
        if self.normal.is_zero():
            raise ZeroDirection("plane normal is zero")

    def side(self, p: Vec3) -> Rat:
        return self.normal.dot(p) - self.offset


@dataclass(frozen=True)
class ConvexPolygon3:
    """Coplanar vertices in strictly convex cyclic order; point and segment
    degenerations carry one and two vertices."""

    vertices: tuple

    def __post_init__(self):
        v = tuple(self.vertices)
        object.__setattr__(self, "vertices", v)
        if not v:
            raise ValueError("polygon needs at least one vertex")
        if len(v) == 2 and v[0] == v[1]:
            raise ValueError("degenerate segment: identical endpoints")
        if len(v) >= 3:
            n = _polygon_normal(v)
            if n is None:
                raise ValueError("vertices are collinear; pass a segment instead")
            for p in v[3:]:
                if n.dot(p - v[0]) != 0:
                    raise ValueError("vertices are not coplanar")
            # Strict convexity with consistent orientation: every consecutive
            # edge pair turns the same way around the plane normal.
            m = len(v)
            turns = []
            for i in range(m):
                e0 = v[i] - v[i - 1]
                e1 = v[(i + 1) % m] - v[i]
                turns.append(n.dot(e0.cross(e1)))
            if any(t == 0 for t in turns):
                raise ValueError("collinear consecutive vertices")
            if any((t > 0) != (turns[0] > 0) for t in turns):
                raise ValueError("vertices are not in convex cyclic order")

    def plane(self) -> Plane3:
        if len(self.vertices) < 3:
            raise ValueError("degenerate polygon has no unique plane")
        n = _polygon_normal(self.vertices)
        return Plane3(n, n.dot(self.vertices[0]))


def _polygon_normal(vertices: Sequence[Vec3]) -> Optional[Vec3]:
    v0 = vertices[0]
    for i in range(1, len(vertices) - 1):
        n = (vertices[i] - v0).cross(vertices[i + 1] - v0)
        if not n.is_zero():
            return n
    return None


@dataclass(frozen=True)
class ConvexBody:
    """conv(vertices) inflated by a closed ball of radius `inflation`."""

    vertices: tuple
    inflation: Rat = _ZERO

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "inflation", rat(self.inflation))
        if not self.vertices:
            raise ValueError("body needs at least one vertex")
        if self.inflation < 0:
            raise ValueError("inflation radius must be nonnegative")


@dataclass(frozen=True)
class LinePlaneHit:
    """Tagged result of line/plane intersection: kind is 'point',
    'contained', or 'disjoint'; point is set only for 'point'."""

    kind: str
    point: Optional[Vec3] = None


# ---------------------------------------------------------------------------
# Elementary predicates and squared distances.


def line_contains_point(line: Line3, p: Vec3) -> bool:
    return (p - line.anchor).cross(line.dir).is_zero()


def line_point_dist_sq(line: Line3, p: Vec3) -> Rat:
    w = p - line.anchor
    c = w.cross(line.dir)
    return c.norm_sq() / line.dir.norm_sq()


def line_line_dist_sq(a: Line3, b: Line3) -> Rat:
    """Squared distance between two lines; 0 iff they share a point."""
    n = a.dir.cross(b.dir)
    w = b.anchor - a.anchor
    if n.is_zero():
        # Parallel: distance from any point of b to a.
        return line_point_dist_sq(a, b.anchor)
    t = w.dot(n)
    return (t * t) / n.norm_sq()


def line_segment_dist_sq(line: Line3, p: Vec3, q: Vec3) -> Rat:
    e = q - p
    if e.is_zero():
        return line_point_dist_sq(line, p)
    d = line.dir
    n = d.cross(e)
    if n.is_zero():
        return line_point_dist_sq(line, p)
    # Closest parameters of the two supporting lines: the segment parameter s
    # solves the normal equations of min |a + t d - p - s e|^2.
    w0 = line.anchor - p
    dd, ee, de = d.dot(d), e.dot(e), d.dot(e)
    rhs_d, rhs_e = -w0.dot(d), -w0.dot(e)
    denom = dd * ee - de * de  # > 0 since d, e are not parallel
    s = (de * rhs_d - dd * rhs_e) / denom
    if 0 <= s <= 1:
        t = w0.dot(n)
        return (t * t) / n.norm_sq()
    return min(line_point_dist_sq(line, p), line_point_dist_sq(line, q))


def line_plane_intersection(line: Line3, plane: Plane3) -> LinePlaneHit:
    nd = plane.normal.dot(line.dir)
    if nd != 0:
        t = (plane.offset - plane.normal.dot(line.anchor)) / nd
        return LinePlaneHit("point", line.at(t))
    if plane.side(line.anchor) == 0:
        return LinePlaneHit("contained")
    return LinePlaneHit("disjoint")


# ---------------------------------------------------------------------------
# Line vs convex polygon.


def _segment_hits_line(line: Line3, p: Vec3, q: Vec3, strict: bool) -> bool:
    """Does the line meet the closed (strict=False) or open (strict=True)
    segment [p, q]?  For collinear overlap the answer is True in both modes
    (the intersection then contains interior points of the segment)."""
    on_p = line_contains_point(line, p)
    on_q = line_contains_point(line, q)
    if on_p and on_q:
        return True
    e = q - p
    d = line.dir
    n = d.cross(e)
    if n.is_zero():
        return False  # parallel, not collinear
    w = p - line.anchor
    if w.dot(n) != 0:
        return False  # skew
    # Coplanar, non-parallel: unique intersection of supporting lines at
    # segment parameter s, from (p - a) + s e = t d crossed with d.
    s = w.cross(d).dot(n) / n.norm_sq()
    return (0 < s < 1) if strict else (0 <= s <= 1)


def line_intersects_polygon(line: Line3, poly: ConvexPolygon3) -> bool:
    v = poly.vertices
    if len(v) == 1:
        return line_contains_point(line, v[0])
    if len(v) == 2:
        return _segment_hits_line(line, v[0], v[1], strict=False)
    plane = poly.plane()
    hit = line_plane_intersection(line, plane)
    if hit.kind == "disjoint":
        return False
    if hit.kind == "point":
        return _point_in_convex_cycle(hit.point, v, plane.normal, strict=False)
    # Coplanar: the line meets the hull iff the vertices do not lie strictly
    # on one side of it (within the polygon's plane).
    sides = [line.dir.cross(p - line.anchor).dot(plane.normal) for p in v]
    return min(sides) <= 0 <= max(sides)


def line_meets_polygon_relint(line: Line3, poly: ConvexPolygon3) -> bool:
    """Does the line meet the relative interior of the polygon?

    For a point that is the point itself; for a segment the open segment; for
    a true polygon the open 2-face.
    """
    v = poly.vertices
    if len(v) == 1:
        return line_contains_point(line, v[0])
    if len(v) == 2:
        return _segment_hits_line(line, v[0], v[1], strict=True)
    plane = poly.plane()
    hit = line_plane_intersection(line, plane)
    if hit.kind == "disjoint":
        return False
    if hit.kind == "point":
        return _point_in_convex_cycle(hit.point, v, plane.normal, strict=True)
    sides = [line.dir.cross(p - line.anchor).dot(plane.normal) for p in v]
    return min(sides) < 0 < max(sides)


def _point_in_convex_cycle(p: Vec3, v: Sequence[Vec3], normal: Vec3, strict: bool) -> bool:
    m = len(v)
    pos = neg = False
    for i in range(m):
        s = (v[(i + 1) % m] - v[i]).cross(p - v[i]).dot(normal)
        if s > 0:
            pos = True
        elif s < 0:
            neg = True
        elif strict:
            return False
        if pos and neg:
            return False
    return True


def line_polygon_dist_sq(line: Line3, poly: ConvexPolygon3) -> Rat:
    """Squared distance from a line to a convex polygon, O(#vertices)."""
    v = poly.vertices
    if len(v) == 1:
        return line_point_dist_sq(line, v[0])
    if len(v) == 2:
        return line_segment_dist_sq(line, v[0], v[1])
    if line_intersects_polygon(line, poly):
        return _ZERO
    plane = poly.plane()
    best = None
    # Not intersecting, so the closest hull point is on the boundary unless
    # the line is parallel to the plane and "hovers" over the face.
    if plane.normal.dot(line.dir) == 0 and plane.side(line.anchor) != 0:
        side_n = line.dir.cross(plane.normal)
        sides = [side_n.dot(p - line.anchor) for p in v]
        if min(sides) <= 0 <= max(sides):
            d = plane.side(line.anchor)
            best = d * d / plane.normal.norm_sq()
    for i in range(len(v)):
        cand = line_segment_dist_sq(line, v[i], v[(i + 1) % len(v)])
        if best is None or cand < best:
            best = cand
    return best


# ---------------------------------------------------------------------------
# Line vs convex body (arbitrary vertex cloud).


def _dedupe(points: Iterable[Vec3]) -> list:
    seen = []
    for p in points:
        if p not in seen:
            seen.append(p)
    return seen


def _collinear_extremes(points: Sequence[Vec3]):
    """If all points are collinear, return the two hull endpoints (or a single
    point); otherwise None."""
    base = points[0]
    d = None
    for p in points[1:]:
        if p != base:
            d = p - base
            break
    if d is None:
        return (base,)
    for p in points:
        if not (p - base).cross(d).is_zero():
            return None
    params = [(p - base).dot(d) for p in points]
    return (points[params.index(min(params))], points[params.index(max(params))])


def _planar_hull_polygon(points: Sequence[Vec3], normal: Vec3) -> ConvexPolygon3:
    """Exact 2D convex hull (monotone chain) of coplanar points, returned as a
    strictly convex ConvexPolygon3."""
    # In-plane affine coordinates: exact, no normalization needed.
    origin = points[0]
    e1 = None
    for p in points[1:]:
        if p != origin:
            e1 = p - origin
            break
    e2 = normal.cross(e1)
    coords = [((p - origin).dot(e1), (p - origin).dot(e2), p) for p in points]
    coords.sort(key=lambda t: (t[0], t[1]))

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for c in coords:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], c) <= 0:
            lower.pop()
        lower.append(c)
    for c in reversed(coords):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], c) <= 0:
            upper.pop()
        upper.append(c)
    hull = [c[2] for c in lower[:-1]] + [c[2] for c in upper[:-1]]
    return ConvexPolygon3(tuple(hull))


def _triangle_feature_dist_sq(line: Line3, p: Vec3, q: Vec3, r: Vec3) -> Optional[Rat]:
    """Distance contribution of a vertex triangle: 0 when the line meets it,
    the plane offset when the line hovers parallel over it, None otherwise
    (the minimum is then attained on an edge and counted elsewhere)."""
    n = (q - p).cross(r - p)
    if n.is_zero():
        return None
    a, d = line.anchor, line.dir
    nd = n.dot(d)
    if nd != 0:
        t = (n.dot(p) - n.dot(a)) / nd
        x = a + d.scale(t)
        if _point_in_convex_cycle(x, (p, q, r), n, strict=False):
            return _ZERO
        return None
    off = n.dot(a - p)
    if off == 0:
        sides = [d.cross(u - a).dot(n) for u in (p, q, r)]
        if min(sides) <= 0 <= max(sides):
            return _ZERO
        return None
    side_n = d.cross(n)
    sides = [side_n.dot(u - a) for u in (p, q, r)]
    if min(sides) <= 0 <= max(sides):
        return off * off / n.norm_sq()
    return None


def line_body_dist_sq(line: Line3, body) -> Rat:
    """Squared distance from a line to conv(vertices) of a body.

    The hull's boundary is covered by vertex triangles (Caratheodory on each
    face), so the exact minimum over vertex, vertex-pair, and vertex-triple
    features equals the distance to the hull, and is 0 iff the line meets it.
    Coplanar clouds take an O(m) route through the ordered hull polygon.
    """
    verts = _dedupe(body.vertices if isinstance(body, ConvexBody) else body)
    if len(verts) == 1:
        return line_point_dist_sq(line, verts[0])
    seg = _collinear_extremes(verts)
    if seg is not None:
        if len(seg) == 1:
            return line_point_dist_sq(line, seg[0])
        return line_segment_dist_sq(line, seg[0], seg[1])
    normal = _cloud_plane_normal(verts)
    if normal is not None:
        return line_polygon_dist_sq(line, _planar_hull_polygon(verts, normal))
    best = None
    m = len(verts)
    for i in range(m):
        for j in range(i + 1, m):
            cand = line_segment_dist_sq(line, verts[i], verts[j])
            if best is None or cand < best:
                best = cand
            if best == 0:
                return _ZERO
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                cand = _triangle_feature_dist_sq(line, verts[i], verts[j], verts[k])
                if cand is not None and cand < best:
                    best = cand
                if best == 0:
                    return _ZERO
    return best


def _cloud_plane_normal(verts: Sequence[Vec3]) -> Optional[Vec3]:
    """Normal of the common plane of a non-collinear cloud, or None if the
    cloud is full-dimensional."""
    base = verts[0]
    n = None
    for i in range(1, len(verts) - 1):
        n = (verts[i] - base).cross(verts[i + 1] - base)
        if not n.is_zero():
            break
    # n cannot stay zero here: collinear clouds were handled by the caller.
    for p in verts:
        if n.dot(p - base) != 0:
            return None
    return n


def line_meets_body(line: Line3, body: ConvexBody) -> bool:
    return line_body_dist_sq(line, body) <= body.inflation * body.inflation


def _line_within_sq(line: Line3, body: ConvexBody, bound_sq: Rat) -> bool:
    """Early-exit test for line_body_dist_sq(line, body) < bound_sq: any
    single feature below the bound certifies the strict inequality."""
    verts = _dedupe(body.vertices)
    for p in verts:
        if line_point_dist_sq(line, p) < bound_sq:
            return True
    return line_body_dist_sq(line, body) < bound_sq


def line_meets_interior(line: Line3, body: ConvexBody) -> bool:
    """Interior version of line_meets_body.

    With positive inflation the interior of the body is exactly the points at
    distance < inflation from the hull.  With zero inflation only a
    full-dimensional hull has interior at all, and the line must pass through
    it; lower-dimensional hulls answer False.
    """
    if body.inflation > 0:
        return _line_within_sq(line, body, body.inflation * body.inflation)
    verts = _dedupe(body.vertices)
    if len(verts) < 4:
        return False
    halfspaces = _hull_halfspaces(verts)
    if halfspaces is None:
        return False  # not full-dimensional
    return _line_hits_open_intersection(line, halfspaces)


def _hull_halfspaces(verts: Sequence[Vec3]):
    """Facet halfspaces (n, c) with hull = {x : n.x <= c}, by brute force over
    supporting vertex triples.  Returns None when the cloud is degenerate."""
    full_dim = False
    base = verts[0]
    for i in range(1, len(verts)):
        for j in range(i + 1, len(verts)):
            n = (verts[i] - base).cross(verts[j] - base)
            if n.is_zero():
                continue
            for p in verts:
                if n.dot(p - base) != 0:
                    full_dim = True
                    break
            if full_dim:
                break
        if full_dim:
            break
    if not full_dim:
        return None
    out = []
    m = len(verts)
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                n = (verts[j] - verts[i]).cross(verts[k] - verts[i])
                if n.is_zero():
                    continue
                c = n.dot(verts[i])
                sides = [n.dot(p) - c for p in verts]
                if all(s <= 0 for s in sides):
                    out.append((n, c))
                elif all(s >= 0 for s in sides):
                    out.append((-n, -c))
    return out


def _line_hits_open_intersection(line: Line3, halfspaces) -> bool:
    """Is there t with n.(a + t d) < c for every halfspace (n, c)?"""
    lo, hi = None, None  # open interval bounds for t
    for n, c in halfspaces:
        nd = n.dot(line.dir)
        rest = c - n.dot(line.anchor)
        if nd == 0:
            if rest <= 0:
                return False
        elif nd > 0:
            bound = rest / nd
            if hi is None or bound < hi:
                hi = bound
        else:
            bound = rest / nd
            if lo is None or bound > lo:
                lo = bound
    if lo is None or hi is None:
        return True
    return lo < hi


def point_in_hull(p: Vec3, vertices: Sequence[Vec3]) -> bool:
    """Exact membership p in conv(vertices), via Caratheodory: p lies in the
    hull iff some <=4 vertices contain it in their simplex."""
    verts = _dedupe(vertices)
    if p in verts:
        return True
    m = len(verts)
    for i in range(m):
        for j in range(i + 1, m):
            if _point_on_segment(p, verts[i], verts[j]):
                return True
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                if _point_in_triangle3(p, verts[i], verts[j], verts[k]):
                    return True
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                for l in range(k + 1, m):
                    if _point_in_tetra(p, verts[i], verts[j], verts[k], verts[l]):
                        return True
    return False


def _point_on_segment(p: Vec3, a: Vec3, b: Vec3) -> bool:
    e = b - a
    w = p - a
    if not w.cross(e).is_zero():
        return False
    t = w.dot(e)
    return 0 <= t <= e.dot(e)


def _point_in_triangle3(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> bool:
    n = (b - a).cross(c - a)
    if n.is_zero() or n.dot(p - a) != 0:
        return False
    return _point_in_convex_cycle(p, (a, b, c), n, strict=False)


def _point_in_tetra(p: Vec3, a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> bool:
    u, v, w, x = b - a, c - a, d - a, p - a
    det = u.cross(v).dot(w)
    if det == 0:
        return False
    b1 = x.cross(v).dot(w) / det
    b2 = u.cross(x).dot(w) / det
    b3 = u.cross(v).dot(x) / det
    return b1 >= 0 and b2 >= 0 and b3 >= 0 and b1 + b2 + b3 <= 1


# ---------------------------------------------------------------------------
# Families of lines.


def find_non_skew_pair(lines: Sequence[Line3]):
    """First index pair that is parallel or intersecting, or None."""
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            a, b = lines[i], lines[j]
            if a.dir.cross(b.dir).is_zero():
                return (i, j)
            if line_line_dist_sq(a, b) == 0:
                return (i, j)
    return None


def pairwise_skew(lines: Sequence[Line3]) -> bool:
    return find_non_skew_pair(lines) is None


def perturb_line(line: Line3, jitter, bound) -> Line3:
    """Re-anchor a line by rational jitter: anchor += jitter[0:3],
    dir += jitter[3:6].  Every component must satisfy |j| <= bound."""
    bound = rat(bound)
    js = [rat(j) for j in jitter]
    if len(js) != 6:
        raise ValueError("jitter must have six components")
    if any(abs(j) > bound for j in js):
        raise ValueError("jitter component exceeds bound")
    new_dir = line.dir + Vec3(js[3], js[4], js[5])
    if new_dir.is_zero():
        raise ZeroDirection("perturbation zeroed the direction")
    return Line3(line.anchor + Vec3(js[0], js[1], js[2]), new_dir)
