"""Lines in R^d against convex bodies living in the first-three-coordinates
subspace S.

S is fixed as span(e1, e2, e3), so embedding is zero-padding and orthogonal
projection onto S is truncation.  A line in R^d meets a polytope inside S iff
its trailing coordinates vanish somewhere (never, always, or at one unique
parameter), which reduces the d-dimensional question to an exact 3D test; no
general d-dimensional distance computation is needed.  The payoff checked by
`verify_projection_property`: whenever the line meets the embedded body, its
projection onto S meets the body too (the converse is not asserted).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .geometry import ConvexBody, Line3, Vec3, line_body_dist_sq, point_in_hull
from .rng import Rng
from .scalar import Rat, rat

__all__ = [
    "PointD",
    "LineD",
    "DimensionMismatch",
    "embed_point",
    "embed_line",
    "embed_body",
    "project_point_to_S",
    "project_line_to_S",
    "meets_embedded_body",
    "ProjectionReport",
    "verify_projection_property",
    "sample_hitting_lines",
]

_ZERO = Rat(0)


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PointD:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(rat(c) for c in self.coords))
        if len(self.coords) < 3:
            raise DimensionMismatch("need dimension >= 3")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


@dataclass(frozen=True)
class LineD:
    anchor: PointD
    dir: PointD

    def __post_init__(self):
        if self.anchor.dim != self.dir.dim:
            raise DimensionMismatch("anchor and direction dimensions differ")
        if self.dir.is_zero():
            raise ValueError("zero direction")

    @property
    def dim(self) -> int:
        return self.anchor.dim

    def at(self, t) -> PointD:
        t = rat(t)
        return PointD(tuple(a + t * d for a, d in zip(self.anchor.coords, self.dir.coords)))


def embed_point(p: Vec3, d: int) -> PointD:
    if d < 3:
        raise DimensionMismatch("need dimension >= 3")
    return PointD((p.x, p.y, p.z) + (0,) * (d - 3))


def embed_line(line: Line3, d: int) -> LineD:
    return LineD(embed_point(line.anchor, d), embed_point(line.dir, d))


def embed_body(body: ConvexBody, d: int) -> tuple:
    """Vertices of the body zero-padded to R^d.  Only inflation-0 bodies
    embed faithfully; an inflated body would bulge out of S."""
    if body.inflation != 0:
        raise ValueError("only inflation-0 bodies embed into S exactly")
    return tuple(embed_point(v, d) for v in body.vertices)


def project_point_to_S(p: PointD) -> Vec3:
    return Vec3(p.coords[0], p.coords[1], p.coords[2])


def project_line_to_S(line: LineD) -> Union[Line3, Vec3]:
    """Orthogonal projection onto S: truncation.  A direction orthogonal to S
    collapses the line to a single point, returned as a Vec3."""
    d3 = project_point_to_S(line.dir)
    a3 = project_point_to_S(line.anchor)
    if d3.is_zero():
        return a3
    return Line3(a3, d3)


def _tail_meet_param(line: LineD) -> Optional[tuple]:
    """Solve for where the trailing coordinates (index >= 3) all vanish.

    Returns ("all", None) when the line lies inside S, ("one", t) for a
    unique crossing parameter, or None when the line never touches S.
    """
    t = None
    for a, d in zip(line.anchor.coords[3:], line.dir.coords[3:]):
        if d == 0:
            if a != 0:
                return None
            continue
        cand = -a / d
        if t is None:
            t = cand
        elif cand != t:
            return None
    if t is None:
        return ("all", None)
    return ("one", t)


def meets_embedded_body(line: LineD, body: ConvexBody) -> bool:
    """Exact test of line-vs-embed(body) in R^d for a body inside S."""
    if body.inflation != 0:
        raise ValueError("only inflation-0 bodies embed into S exactly")
    hit = _tail_meet_param(line)
    if hit is None:
        return False
    kind, t = hit
    if kind == "all":
        proj = project_line_to_S(line)
        return line_body_dist_sq(proj, body) == 0
    p = project_point_to_S(line.at(t))
    return point_in_hull(p, body.vertices)


@dataclass(frozen=True)
class ProjectionReport:
    meets_embedded: bool
    projection_meets: bool

    @property
    def holds(self) -> bool:
        return (not self.meets_embedded) or self.projection_meets


def verify_projection_property(line: LineD, body: ConvexBody) -> ProjectionReport:
    """Check the one-way implication: the line meeting the embedded body
    forces its projection to meet the body.  The converse can fail and is
    not reported as a violation."""
    meets = meets_embedded_body(line, body)
    proj = project_line_to_S(line)
    if isinstance(proj, Vec3):
        proj_meets = point_in_hull(proj, body.vertices)
    else:
        proj_meets = line_body_dist_sq(proj, body) == 0
    return ProjectionReport(meets, proj_meets)


def sample_hitting_lines(body: ConvexBody, d: int, count: int, seed: int) -> list:
    """Lines in R^d constructed through random points of the embedded body,
    so each meets embed(body) by construction.  Every fifth line gets a
    direction orthogonal to S to exercise the degenerate projection."""
    if body.inflation != 0:
        raise ValueError("only inflation-0 bodies embed into S exactly")
    rng = Rng(seed)
    verts = body.vertices
    lines = []
    for i in range(count):
        weights = [rng.randint(0, 10) for _ in verts]
        if sum(weights) == 0:
            weights[rng.randint(0, len(verts) - 1)] = 1
        total = sum(weights)
        coords = [_ZERO, _ZERO, _ZERO]
        for w, v in zip(weights, verts):
            coords[0] += Rat(w, total) * v.x
            coords[1] += Rat(w, total) * v.y
            coords[2] += Rat(w, total) * v.z
        through = PointD(tuple(coords) + (0,) * (d - 3))
        while True:
            dir_coords = [rat(rng.randint(-5, 5)) for _ in range(d)]
            if i % 5 == 4:
                dir_coords[0] = dir_coords[1] = dir_coords[2] = _ZERO
            if any(c != 0 for c in dir_coords):
                break
        lines.append(LineD(through, PointD(tuple(dir_coords))))
    return lines
