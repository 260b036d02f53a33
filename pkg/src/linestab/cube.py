"""The cube gadget: three edge lines, four near-diagonals, and the 9+13
assembly of three far-apart cubes.

One cube [-1,1]^3 carries three pairwise skew "edge" lines

    (t, 1, -1),   (-1, t, 1),   (1, -1, t)

and its four main diagonals through the origin.  For any triangle with one
vertex on each edge line at parameters of magnitude >= 2, some main diagonal
passes through the triangle's relative interior, and this survives replacing
each diagonal by any line that is close to it (anchor within eps of the
origin, direction within eps of parallel).  The proof device, reproduced here
as an exact computation, projects the relevant half-rays of the edge lines
along a diagonal direction and checks that the projected triple is separated
with the origin strictly inside its joint region; `check_joint_region_case`
performs that check and `verify_diag_claim` samples the claim itself.

Three such cubes placed far apart (rotated into mutual general position),
plus one extra line through the barycenter of their centers orthogonal to
their center plane, give 9 edge lines and 13 candidate stabbing lines such
that every convex set meeting all 9 edge lines meets one of the 13;
`verify_nine_thirteen` samples that statement with named certificates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import (
    ConvexPolygon3,
    Line3,
    Vec3,
    find_non_skew_pair,
    line_body_dist_sq,
    line_intersects_polygon,
    line_line_dist_sq,
    line_meets_polygon_relint,
)
from .rays import Ray2, RayTriple, Vec2, interior_margin, is_separated_triple, joint_region
from .rng import Rng
from .scalar import Rat, rat, sqrt_lower_bound

__all__ = [
    "Ray3",
    "Mat3",
    "Placement",
    "PerturbationCert",
    "CubeConfig",
    "MultiCubeConfig",
    "DegeneratePlacement",
    "ProjectedPoint",
    "DIAG_CLAIM_EPS",
    "blue_lines",
    "main_diagonals",
    "incidence_table",
    "triangle_T",
    "project_point_along",
    "project_ray_along",
    "rays_for_diagonal",
    "check_joint_region_case",
    "JointRegionCaseReport",
    "sample_perturbation",
    "verify_diag_claim",
    "DiagClaimReport",
    "search_working_eps",
    "assemble_three_cubes",
    "verify_nine_thirteen",
    "NineThirteenReport",
]

_ZERO = Rat(0)

# Established by search_working_eps(trials=10000, seed=0) starting from the
# candidate 1/100 and halving on failure; 1/100 already passes.
DIAG_CLAIM_EPS = Rat(1, 100)


class DegeneratePlacement(ValueError):
    pass


@dataclass(frozen=True)
class Ray3:
    origin: Vec3
    dir: Vec3


# Local edge lines: index i has its free coordinate in axis i.
_BLUE_ANCHORS = (Vec3.of(0, 1, -1), Vec3.of(-1, 0, 1), Vec3.of(1, -1, 0))
_BLUE_DIRS = (Vec3.of(1, 0, 0), Vec3.of(0, 1, 0), Vec3.of(0, 0, 1))

# Main diagonal directions, fixed order.
_DIAG_SIGNS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))


def blue_lines() -> tuple:
    return tuple(Line3(a, d) for a, d in zip(_BLUE_ANCHORS, _BLUE_DIRS))


def main_diagonals() -> tuple:
    return tuple(Line3(Vec3.of(0, 0, 0), Vec3.of(*s)) for s in _DIAG_SIGNS)


def blue_point(index: int, t) -> Vec3:
    """Point at parameter t on edge line `index` (0, 1, or 2)."""
    return _BLUE_ANCHORS[index] + _BLUE_DIRS[index].scale(rat(t))


def incidence_table() -> tuple:
    """For each diagonal, which edge lines it meets (exact)."""
    blues = blue_lines()
    return tuple(
        tuple(line_line_dist_sq(d, b) == 0 for b in blues) for d in main_diagonals()
    )


def triangle_T(x1, x2, x3) -> ConvexPolygon3:
    """Hull of one point per edge line at the given parameters; degenerate
    (collinear) parameter choices reduce to a segment."""
    pts = [blue_point(i, x) for i, x in enumerate((x1, x2, x3))]
    n = (pts[1] - pts[0]).cross(pts[2] - pts[0])
    if not n.is_zero():
        return ConvexPolygon3(tuple(pts))
    # Collinear: keep the extreme pair.  The three points are always distinct
    # (their fixed +-1 coordinates differ pairwise).
    d = pts[1] - pts[0]
    params = [(p - pts[0]).dot(d) for p in pts]
    return ConvexPolygon3((pts[params.index(min(params))], pts[params.index(max(params))]))


# ---------------------------------------------------------------------------
# Projection along a diagonal.

# Fixed orthogonal bases of the planes orthogonal to the two canonical
# projection directions.  Both pairs satisfy b1 . b2 = 0, b_i . u = 0.
_PROJ_BASES = {
    (1, 1, 1): (Vec3.of(1, -1, 0), Vec3.of(1, 1, -2)),
    (1, -1, 1): (Vec3.of(1, 1, 0), Vec3.of(1, -1, -2)),
}


@dataclass(frozen=True)
class ProjectedPoint:
    """Tagged degenerate image of a ray whose direction is parallel to the
    projection direction."""

    point: Vec2


def _proj_basis(u: Vec3):
    key = (int(u.x), int(u.y), int(u.z))
    if key not in _PROJ_BASES:
        raise ValueError(f"no declared projection basis for direction {key}")
    return _PROJ_BASES[key]


def project_point_along(u: Vec3, p: Vec3) -> Vec2:
    b1, b2 = _proj_basis(u)
    return Vec2(p.dot(b1) / b1.norm_sq(), p.dot(b2) / b2.norm_sq())


def project_ray_along(u: Vec3, ray: Ray3):
    """Image of a ray in the plane orthogonal to u: a Ray2, or a tagged
    ProjectedPoint when the ray runs parallel to u."""
    o = project_point_along(u, ray.origin)
    d = project_point_along(u, ray.dir)
    if d.is_zero():
        return ProjectedPoint(o)
    return Ray2(o, d)


def rays_for_diagonal(which: int):
    """The two covering ray triples for diagonal `which` (1-based).

    On each edge line the portion with parameter magnitude >= 2 is two
    opposite rays; the diagonal's sign pattern decides which of the two goes
    into which triple.  R_i starts at parameter 2*sign_i and runs outward
    with the sign, Q_i starts at -2*sign_i and runs outward against it, so a
    triangle with all |x_i| >= 2 is spanned by the R-triple of the diagonal
    matching its sign pattern, or by the Q-triple of the opposite one.
    """
    if which not in (1, 2, 3, 4):
        raise ValueError("diagonal index must be 1..4")
    signs = _DIAG_SIGNS[which - 1]
    r_rays, q_rays = [], []
    for i, s in enumerate(signs):
        step = _BLUE_DIRS[i].scale(Rat(s))
        r_rays.append(Ray3(blue_point(i, 2 * s), step))
        q_rays.append(Ray3(blue_point(i, -2 * s), -step))
    return tuple(r_rays), tuple(q_rays)


def _rotate_cyclic(v: Vec3) -> Vec3:
    """The rotation (x, y, z) -> (y, z, x): maps each edge line onto another
    edge line and cycles the three skew diagonals onto each other."""
    return Vec3(v.y, v.z, v.x)


def _to_canonical_frame(which: int):
    """Number of cyclic rotations taking diagonal `which` onto a diagonal
    with a declared projection basis, plus that basis direction."""
    u = Vec3.of(*_DIAG_SIGNS[which - 1])
    for count in range(3):
        key = (int(u.x), int(u.y), int(u.z))
        if key in _PROJ_BASES:
            return count, u
        u = _rotate_cyclic(u)
    raise AssertionError("every diagonal reaches a declared basis")


@dataclass(frozen=True)
class JointRegionCaseReport:
    which: int
    separated: tuple  # (r-triple, q-triple)
    margins: tuple  # squared interior margins of the origin
    interior_points: tuple


def check_joint_region_case(which: int) -> JointRegionCaseReport:
    """Exact check that both projected ray triples of a diagonal are separated
    and keep the origin strictly inside their joint regions."""
    count, u = _to_canonical_frame(which)
    triples = rays_for_diagonal(which)
    results, margins, samples = [], [], []
    for rays in triples:
        mapped = rays
        for _ in range(count):
            mapped = tuple(Ray3(_rotate_cyclic(r.origin), _rotate_cyclic(r.dir)) for r in mapped)
        flat = [project_ray_along(u, r) for r in mapped]
        if any(isinstance(f, ProjectedPoint) for f in flat):
            raise AssertionError("edge-line rays never run along a diagonal")
        triple = RayTriple(*flat)
        sep = is_separated_triple(triple)
        results.append(sep)
        if not sep:
            margins.append(_ZERO)
            samples.append(None)
            continue
        region = joint_region(triple)
        origin = Vec2.of(0, 0)
        margins.append(interior_margin(region, origin))
        samples.append(region.sample_interior_point())
    return JointRegionCaseReport(which, tuple(results), tuple(margins), tuple(samples))


# ---------------------------------------------------------------------------
# Perturbation certificates.


@dataclass(frozen=True)
class PerturbationCert:
    """Witness that (anchor, dir) is an eps-perturbation of the diagonal
    direction u: the line passes within eps of the origin, and dir makes an
    angle with u whose cosine exceeds 1 - eps (stated without square roots:
    (u.dir)^2 > (1-eps)^2 |u|^2 |dir|^2 with u.dir > 0)."""

    u: Vec3
    anchor: Vec3
    dir: Vec3
    eps: Rat

    def line(self) -> Line3:
        return Line3(self.anchor, self.dir)

    def is_valid(self) -> bool:
        eps = rat(self.eps)
        if not (0 < eps < 1):
            return False
        if self.dir.is_zero():
            return False
        line = self.line()
        if line.anchor.norm_sq() >= eps * eps:
            # canonical anchor is the closest point to the origin
            return False
        t = self.u.dot(self.dir)
        if t <= 0:
            return False
        bound = (1 - eps) ** 2 * self.u.norm_sq() * self.dir.norm_sq()
        return t * t > bound

    def check(self):
        if not self.is_valid():
            raise ValueError("invalid perturbation certificate")


def _perp_basis(u: Vec3):
    b1 = Vec3(u.y, -u.x, _ZERO)
    if b1.is_zero():
        b1 = Vec3(_ZERO, u.z, -u.y)
    return b1, u.cross(b1)


def sample_perturbation(u: Vec3, eps, rng: Rng) -> PerturbationCert:
    """A random certified eps-perturbation of the line through the origin
    with direction u, stressing a substantial part of the allowed ball."""
    eps = rat(eps)
    b1, b2 = _perp_basis(u)
    # |v|^2 = j1^2|b1|^2 + j2^2|b2|^2 (the basis is orthogonal); any
    # |v|^2 <= eps |u|^2 satisfies the angle condition since eps^2 < 1 + eps.
    tilt_cap = sqrt_lower_bound(eps * u.norm_sq() / (b1.norm_sq() + b2.norm_sq()))
    shift_cap = eps / 3
    for _ in range(64):
        v = b1.scale(rng.jitter(tilt_cap)) + b2.scale(rng.jitter(tilt_cap))
        a = b1.scale(rng.jitter(shift_cap)) + b2.scale(rng.jitter(shift_cap))
        cert = PerturbationCert(u, a, u + v, eps)
        if cert.is_valid():
            return cert
    raise AssertionError("perturbation sampler failed to certify")


# ---------------------------------------------------------------------------
# Sampled verification of the diagonal claim.


@dataclass(frozen=True)
class DiagClaimReport:
    eps: Rat
    trials: int
    seed: int
    failures: tuple
    worst_margin_sq: Optional[Rat]


def _relint_margin_sq(line: Line3, poly: ConvexPolygon3) -> Rat:
    """Squared distance from the transversal crossing point to the nearest
    edge line of the polygon (0 for degenerate contact)."""
    v = poly.vertices
    if len(v) < 3:
        return _ZERO
    plane = poly.plane()
    nd = plane.normal.dot(line.dir)
    if nd == 0:
        return _ZERO
    t = (plane.offset - plane.normal.dot(line.anchor)) / nd
    q = line.at(t)
    best = None
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        e = b - a
        d2 = (q - a).cross(e).norm_sq() / e.norm_sq()
        if best is None or d2 < best:
            best = d2
    return best


def _matching_diag_first(pattern) -> list:
    order = []
    for idx, signs in enumerate(_DIAG_SIGNS):
        if signs == pattern or tuple(-s for s in signs) == pattern:
            order.append(idx)
    order += [i for i in range(4) if i not in order]
    return order


def verify_diag_claim(eps, trials: int, seed: int) -> DiagClaimReport:
    """Sample triangles with all three edge-line parameters of magnitude >= 2
    (all eight sign patterns, log-uniform magnitudes up to ~10^3) and fresh
    certified eps-perturbations of the diagonals; assert some perturbed
    diagonal crosses the triangle's relative interior."""
    eps = rat(eps)
    rng = Rng(seed)
    diag_dirs = [Vec3.of(*s) for s in _DIAG_SIGNS]
    patterns = list(itertools.product((1, -1), repeat=3))
    failures = []
    worst = None
    for trial in range(trials):
        pattern = patterns[trial % 8]
        xs = []
        for s in pattern:
            exp = rng.randint(0, 8)
            mantissa = Rat(rng.randint(32, 63), 32)
            xs.append(rat(s) * 2 * mantissa * (1 << exp))
        tri = triangle_T(*xs)
        certs = [sample_perturbation(d, eps, rng) for d in diag_dirs]
        hit = None
        for j in _matching_diag_first(pattern):
            if line_meets_polygon_relint(certs[j].line(), tri):
                hit = j
                break
        if hit is None:
            failures.append((trial, tuple(xs)))
            continue
        margin = _relint_margin_sq(certs[hit].line(), tri)
        if worst is None or margin < worst:
            worst = margin
    return DiagClaimReport(eps, trials, seed, tuple(failures), worst)


def search_working_eps(trials: int = 10000, seed: int = 0, start=Rat(1, 100)) -> Rat:
    """Halve eps until verify_diag_claim reports zero failures.  Used once to
    pin DIAG_CLAIM_EPS; kept so the derivation is reproducible."""
    eps = rat(start)
    while True:
        if not verify_diag_claim(eps, trials, seed).failures:
            return eps
        eps = eps / 2


# ---------------------------------------------------------------------------
# Three-cube assembly.


@dataclass(frozen=True)
class Mat3:
    rows: tuple

    def apply(self, v: Vec3) -> Vec3:
        r = self.rows
        return Vec3(r[0].dot(v), r[1].dot(v), r[2].dot(v))

    def col(self, i: int) -> Vec3:
        picked = [(row.x, row.y, row.z)[i] for row in self.rows]
        return Vec3(*picked)

    @staticmethod
    def of(rows) -> "Mat3":
        return Mat3(tuple(Vec3.of(*row) for row in rows))

    def compose(self, other: "Mat3") -> "Mat3":
        cols = [other.col(i) for i in range(3)]
        return Mat3(tuple(Vec3(r.dot(cols[0]), r.dot(cols[1]), r.dot(cols[2])) for r in self.rows))


@dataclass(frozen=True)
class Placement:
    """Rigid (or nearly rigid) placement of a cube: rotation then translation."""

    rotation: Mat3
    translation: Vec3

    def apply_point(self, p: Vec3) -> Vec3:
        return self.rotation.apply(p) + self.translation

    def apply_dir(self, d: Vec3) -> Vec3:
        return self.rotation.apply(d)

    def apply_line(self, anchor: Vec3, direction: Vec3) -> Line3:
        return Line3(self.apply_point(anchor), self.apply_dir(direction))

    def max_orthogonality_defect(self) -> Rat:
        cols = [self.rotation.col(i) for i in range(3)]
        worst = _ZERO
        for i in range(3):
            for j in range(i, 3):
                target = 1 if i == j else 0
                d = abs(cols[i].dot(cols[j]) - target)
                if d > worst:
                    worst = d
        return worst


def _rot_x(c, s) -> Mat3:
    return Mat3.of(((1, 0, 0), (0, c, -s), (0, s, c)))


def _rot_z(c, s) -> Mat3:
    return Mat3.of(((c, -s, 0), (s, c, 0), (0, 0, 1)))


def _default_rotations() -> tuple:
    """Three exact rational rotations (Pythagorean-triple sines/cosines),
    chosen so no two cubes share a line direction and nothing stays parallel
    to the center-plane normal."""
    r1 = _rot_x(Rat(4, 5), Rat(3, 5)).compose(_rot_z(Rat(12, 13), Rat(5, 13)))
    r2 = _rot_x(Rat(15, 17), Rat(8, 17)).compose(_rot_z(Rat(4, 5), Rat(3, 5)))
    r3 = _rot_x(Rat(21, 29), Rat(20, 29)).compose(_rot_z(Rat(24, 25), Rat(7, 25)))
    return (r1, r2, r3)


@dataclass(frozen=True)
class CubeConfig:
    placement: Placement
    blue: tuple  # 3 world lines
    red: tuple  # 4 world lines
    certs: tuple  # 4 local PerturbationCerts


@dataclass(frozen=True)
class MultiCubeConfig:
    cubes: tuple  # 3 CubeConfigs
    center_line: Line3
    eps: Rat
    separation: Rat

    @property
    def blue(self) -> tuple:
        return tuple(line for cube in self.cubes for line in cube.blue)

    @property
    def red(self) -> tuple:
        return tuple(line for cube in self.cubes for line in cube.red) + (self.center_line,)

    def red_name(self, index: int) -> str:
        if index == 12:
            return "center-axis"
        return f"cube{index // 4 + 1}-diag{index % 4 + 1}"


# Tolerances for placement validation: rotations must be orthonormal to
# within 1/10^6 per inner product; center distances must agree to within a
# 1/10^3 length ratio (loose enough to admit convenient rational heights).
_ROT_DEFECT_TOL = Rat(1, 10**6)
_SIDE_RATIO_TOL = Rat(1, 10**3)


def assemble_three_cubes(
    separation=300,
    placements: Optional[Sequence[Placement]] = None,
    eps=DIAG_CLAIM_EPS,
    seed: int = 0,
    require_skew: bool = True,
) -> MultiCubeConfig:
    """Place three cubes on a near-equilateral triangle of side `separation`
    and certify the configuration: rotation defects, center spacing, the
    barycenter line, and (by default) pairwise skewness of all 22 lines."""
    separation = rat(separation)
    if separation < 100:
        raise DegeneratePlacement("separation must be at least 100")
    if placements is None:
        rots = _default_rotations()
        centers = (
            Vec3.of(0, 0, 0),
            Vec3(separation, _ZERO, _ZERO),
            Vec3(separation / 2, separation * Rat(13, 15), _ZERO),
        )
        placements = tuple(Placement(r, c) for r, c in zip(rots, centers))
    placements = tuple(placements)
    if len(placements) != 3:
        raise DegeneratePlacement("exactly three cubes required")
    for idx, pl in enumerate(placements):
        if pl.max_orthogonality_defect() > _ROT_DEFECT_TOL:
            raise DegeneratePlacement(f"placement {idx} is not a near-rotation")
    centers = [pl.translation for pl in placements]
    sides = [
        (centers[1] - centers[0]).norm_sq(),
        (centers[2] - centers[0]).norm_sq(),
        (centers[2] - centers[1]).norm_sq(),
    ]
    if min(sides) < 100 * 100:
        raise DegeneratePlacement("cube centers closer than the minimum separation")
    lo = (1 - _SIDE_RATIO_TOL) ** 2
    hi = (1 + _SIDE_RATIO_TOL) ** 2
    for a in sides:
        for b in sides:
            if not (lo * b <= a <= hi * b):
                raise DegeneratePlacement("center triangle is not near-equilateral")
    normal = (centers[1] - centers[0]).cross(centers[2] - centers[0])
    if normal.is_zero():
        raise DegeneratePlacement("cube centers are collinear")
    barycenter = Vec3(
        (centers[0].x + centers[1].x + centers[2].x) / 3,
        (centers[0].y + centers[1].y + centers[2].y) / 3,
        (centers[0].z + centers[1].z + centers[2].z) / 3,
    )
    center_line = Line3(barycenter, normal)
    rng = Rng(seed)
    cubes = []
    for idx, pl in enumerate(placements):
        child = rng.spawn(idx)
        blue = tuple(pl.apply_line(a, d) for a, d in zip(_BLUE_ANCHORS, _BLUE_DIRS))
        certs = tuple(sample_perturbation(Vec3.of(*s), eps, child) for s in _DIAG_SIGNS)
        red = tuple(pl.apply_line(c.anchor, c.dir) for c in certs)
        cubes.append(CubeConfig(pl, blue, red, certs))
    cfg = MultiCubeConfig(tuple(cubes), center_line, rat(eps), separation)
    if require_skew:
        bad = find_non_skew_pair(list(cfg.blue) + list(cfg.red))
        if bad is not None:
            raise DegeneratePlacement(f"lines {bad[0]} and {bad[1]} are not skew")
    return cfg


# ---------------------------------------------------------------------------
# Sampled verification of the 9-blue / 13-red statement.


@dataclass(frozen=True)
class NineThirteenReport:
    trials: int
    seed: int
    failures: tuple
    certificates: tuple  # one red-line name per trial


def _sample_params(regime: str, rng: Rng, trial: int) -> list:
    params = []
    for cube in range(3):
        local = []
        if regime == "far" or (regime == "mixed" and cube == trial % 3):
            for _ in range(3):
                local.append(rat(rng.sign()) * rng.fraction(1000, 10000, 8))
        elif regime == "inside" or regime == "mixed":
            for _ in range(3):
                local.append(rng.fraction(-2, 2, 8))
        else:  # fully random
            for _ in range(3):
                local.append(rng.fraction(-10, 10, 8))
        params.append(local)
    return params


def verify_nine_thirteen(cfg: MultiCubeConfig, trials: int, seed: int) -> NineThirteenReport:
    """Sample hulls with one point on each of the nine edge lines, covering
    far / inside / mixed / random parameter regimes, and certify for each
    that a named red line meets the hull."""
    rng = Rng(seed)
    regimes = ("far", "inside", "mixed", "random")
    failures, cert_names = [], []
    for trial in range(trials):
        regime = regimes[trial % 4]
        params = _sample_params(regime, rng, trial)
        world_points = [
            [cfg.cubes[i].placement.apply_point(blue_point(j, params[i][j])) for j in range(3)]
            for i in range(3)
        ]
        cert = _find_certificate(cfg, params, world_points)
        if cert is None:
            cert = _exhaustive_certificate(cfg, world_points)
        if cert is None:
            failures.append((trial, regime))
            cert_names.append(None)
        else:
            cert_names.append(cert)
    return NineThirteenReport(trials, seed, tuple(failures), tuple(cert_names))


def _find_certificate(cfg: MultiCubeConfig, params, world_points) -> Optional[str]:
    # A cube whose three parameters all have magnitude >= 2 is certified by
    # one of its own perturbed diagonals crossing the spanned triangle.
    for i in range(3):
        if all(abs(t) >= 2 for t in params[i]):
            tri = _world_triangle(world_points[i])
            pattern = tuple(1 if t > 0 else -1 for t in params[i])
            for j in _matching_diag_first(pattern):
                if line_meets_polygon_relint(cfg.cubes[i].red[j], tri):
                    return cfg.red_name(i * 4 + j)
    # Otherwise every cube contributes a point inside its doubled box, and
    # the barycenter line crosses the triangle of those three points.
    picks = []
    for i in range(3):
        small = [j for j in range(3) if abs(params[i][j]) <= 2]
        if not small:
            return None
        j = min(small, key=lambda j: abs(params[i][j]))
        picks.append(world_points[i][j])
    tri = _world_triangle(picks)
    if line_intersects_polygon(cfg.center_line, tri):
        return cfg.red_name(12)
    return None


def _world_triangle(points) -> ConvexPolygon3:
    n = (points[1] - points[0]).cross(points[2] - points[0])
    if not n.is_zero():
        return ConvexPolygon3(tuple(points))
    d = None
    for p in points[1:]:
        if p != points[0]:
            d = p - points[0]
            break
    if d is None:
        return ConvexPolygon3((points[0],))
    params = [(p - points[0]).dot(d) for p in points]
    return ConvexPolygon3((points[params.index(min(params))], points[params.index(max(params))]))


def _exhaustive_certificate(cfg: MultiCubeConfig, world_points) -> Optional[str]:
    flat = [p for triple in world_points for p in triple]
    for idx, red in enumerate(cfg.red):
        if line_body_dist_sq(red, flat) == 0:
            return cfg.red_name(idx)
    return None
