"""Planar rays, line transversals, half-strips, and joint regions.

The central decision procedure is `find_transversal`: whether some full line
meets all three rays of a triple.  A line meets all three iff some choice of
ray parameters t_i >= 0 makes the three points r_i(t_i) collinear, and the
collinearity determinant D(t1, t2, t3) is multi-affine with no t1*t2*t3 term
(the top coefficient is a self-cross d1 x d1 = 0).  On the closed orthant a
multi-affine form with all monomial coefficients on one strict side of zero
never vanishes, and in every other case an exact rational zero exists on a
face where at most two parameters move.  The sign pattern of the seven
coefficients therefore decides existence, and the face walk produces an
explicit certificate line whenever it reports "not separated".

Candidate-enumeration schemes (lines through origin pairs or through one
origin parallel to another direction) are NOT sound here: the transversal set
of rays is not closed, because a contact point can recede to infinity, so
sweeping a transversal to an extremal position can leave the set without ever
pinning a second contact.  Triples exist whose only transversals touch all
three rays strictly inside, away from every such candidate.

ConvexRegion2 is an intersection of closed halfplanes with exact emptiness,
interior, sampling, and linear-optimization queries, all via two-variable
Fourier-Motzkin elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .scalar import Rat, floor_rat, rat

__all__ = [
    "Vec2",
    "Point2",
    "Ray2",
    "RayTriple",
    "Line2",
    "Halfplane",
    "ConvexRegion2",
    "Triangle2",
    "NotSeparated",
    "DegenerateOriginTriangle",
    "line2_meets_ray",
    "find_transversal",
    "is_separated_triple",
    "opposite_side",
    "half_strip",
    "joint_region",
    "spanned_triangle",
    "triangle_contains",
    "interior_margin",
]

_ZERO = Rat(0)


class NotSeparated(ValueError):
    pass


class DegenerateOriginTriangle(ValueError):
    pass


@dataclass(frozen=True)
class Vec2:
    x: Rat
    y: Rat

    def __add__(self, other):
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def scale(self, c):
        return Vec2(self.x * c, self.y * c)

    def dot(self, other) -> Rat:
        return self.x * other.x + self.y * other.y

    def cross(self, other) -> Rat:
        return self.x * other.y - self.y * other.x

    def perp(self) -> "Vec2":
        return Vec2(-self.y, self.x)

    def norm_sq(self) -> Rat:
        return self.dot(self)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    @staticmethod
    def of(x, y):
        return Vec2(rat(x), rat(y))


Point2 = Vec2


@dataclass(frozen=True)
class Ray2:
    origin: Vec2
    dir: Vec2

    def __post_init__(self):
        if self.dir.is_zero():
            raise ValueError("ray direction is zero")

    def at(self, t) -> Vec2:
        return self.origin + self.dir.scale(t)


@dataclass(frozen=True)
class RayTriple:
    r1: Ray2
    r2: Ray2
    r3: Ray2

    @property
    def rays(self):
        return (self.r1, self.r2, self.r3)

    def pairwise_nonparallel(self) -> bool:
        r = self.rays
        return all(r[i].dir.cross(r[j].dir) != 0 for i in range(3) for j in range(i + 1, 3))


@dataclass(frozen=True)
class Line2:
    """The full line {p : normal . p = offset}."""

    normal: Vec2
    offset: Rat

    def __post_init__(self):
        if self.normal.is_zero():
            raise ValueError("line normal is zero")

    @staticmethod
    def through(p: Vec2, q: Vec2) -> "Line2":
        n = (q - p).perp()
        return Line2(n, n.dot(p))

    @staticmethod
    def through_dir(p: Vec2, d: Vec2) -> "Line2":
        n = d.perp()
        return Line2(n, n.dot(p))


@dataclass(frozen=True)
class Halfplane:
    """{p : normal . p <= offset}"""

    normal: Vec2
    offset: Rat

    def slack(self, p: Vec2) -> Rat:
        return self.offset - self.normal.dot(p)


def line2_meets_ray(line: Line2, ray: Ray2) -> bool:
    f = line.normal.dot(ray.origin) - line.offset
    if f == 0:
        return True
    g = line.normal.dot(ray.dir)
    if g == 0:
        return False
    return (f > 0) != (g > 0)


def _collinearity_coefficients(t: RayTriple):
    """Coefficients of D(t1,t2,t3) = (q2 - q1) x (q3 - q1), q_i = p_i + t_i d_i.

    Returns (c0, (c1, c2, c3), (c23, c13, c12)) where the pair coefficient at
    index i belongs to the face t_i = 0.  The t1*t2*t3 coefficient is
    identically zero, so these seven numbers are the whole form.
    """
    p = [r.origin for r in t.rays]
    d = [r.dir for r in t.rays]
    a, b = p[1] - p[0], p[2] - p[0]
    c0 = a.cross(b)
    lin = (d[0].cross(p[1] - p[2]), d[1].cross(b), a.cross(d[2]))
    pair = (d[1].cross(d[2]), -d[0].cross(d[2]), d[0].cross(d[1]))
    return c0, lin, pair


def _line_through_zero(t: RayTriple, params) -> Line2:
    """The common line of the three (collinear) contact points r_i(params_i);
    if they all coincide, any line through the shared point qualifies."""
    pts = [r.at(s) for r, s in zip(t.rays, params)]
    for i in range(3):
        for j in range(i + 1, 3):
            if pts[i] != pts[j]:
                return Line2.through(pts[i], pts[j])
    return Line2.through_dir(pts[0], t.rays[0].dir)


def find_transversal(t: RayTriple) -> Optional[Line2]:
    """A line meeting all three rays, or None if there is none."""
    c0, lin, pair = _collinearity_coefficients(t)
    zero = Rat(0)
    if c0 == 0:
        # The origins themselves are collinear (or coincident).
        witness = _line_through_zero(t, (zero, zero, zero))
    else:
        opp_lin = [i for i in range(3) if lin[i] * c0 < 0]
        opp_pair = [i for i in range(3) if pair[i] * c0 < 0]
        if opp_lin:
            # Move one contact until D crosses zero, the other two stay put.
            i = opp_lin[0]
            params = [zero, zero, zero]
            params[i] = -c0 / lin[i]
            witness = _line_through_zero(t, params)
        elif opp_pair:
            # Face t_i = 0: D = (c0 + c_j T) + t_k (c_k + c_jk T).  Every
            # remaining coefficient has c0's sign, so c0 + c_j T never
            # vanishes, while c_k + c_jk T flips sign for T large enough.
            i = opp_pair[0]
            j, k = [x for x in range(3) if x != i]
            c_j, c_k, c_jk = lin[j], lin[k], pair[i]
            big = floor_rat(-c_k / c_jk) + 1
            params = [zero, zero, zero]
            params[j] = Rat(big)
            params[k] = -(c0 + lin[j] * big) / (c_k + c_jk * big)
            witness = _line_through_zero(t, params)
        else:
            # All seven coefficients on one strict side: D never vanishes on
            # the orthant, hence no collinear contact triple exists.
            return None
    if not all(line2_meets_ray(witness, r) for r in t.rays):
        raise RuntimeError("internal: constructed transversal fails verification")
    return witness


def is_separated_triple(t: RayTriple) -> bool:
    return t.pairwise_nonparallel() and find_transversal(t) is None


def _ray_meets_segment(ray: Ray2, p: Vec2, q: Vec2) -> bool:
    e = q - p
    w = p - ray.origin
    den = ray.dir.cross(e)
    if den == 0:
        if w.cross(ray.dir) != 0:
            return False
        # Collinear: any segment point at nonnegative ray parameter?
        dd = ray.dir.norm_sq()
        tp = w.dot(ray.dir) / dd
        tq = (q - ray.origin).dot(ray.dir) / dd
        return max(tp, tq) >= 0
    t = w.cross(e) / den
    u = w.cross(ray.dir) / den
    return t >= 0 and 0 <= u <= 1


def opposite_side(t: RayTriple, i: int):
    """The unique side of the origin triangle disjoint from ray i (1-based).

    Returns the side's endpoints (p, q).  Raises NotSeparated when the count
    of disjoint sides is not exactly one, DegenerateOriginTriangle when the
    origins are collinear.
    """
    o = [r.origin for r in t.rays]
    if (o[1] - o[0]).cross(o[2] - o[0]) == 0:
        raise DegenerateOriginTriangle("ray origins are collinear")
    sides = [(o[1], o[2]), (o[0], o[2]), (o[0], o[1])]
    ray = t.rays[i - 1]
    disjoint = [s for s in sides if not _ray_meets_segment(ray, *s)]
    if len(disjoint) != 1:
        raise NotSeparated(f"ray {i} is disjoint from {len(disjoint)} sides, expected 1")
    return disjoint[0]


def half_strip(t: RayTriple, i: int) -> "ConvexRegion2":
    """Minkowski sum of the side opposite ray i with the ray's direction cone,
    as an intersection of exactly three halfplanes."""
    p, q = opposite_side(t, i)
    d = t.rays[i - 1].dir
    base_n = (q - p).perp()
    along = base_n.dot(d)
    if along == 0:
        # Direction parallel to the side: the strip collapses to the ray of
        # the segment swept along itself.  Both sides of the carrier line
        # plus one cap at the trailing endpoint.
        back = p if d.dot(p) <= d.dot(q) else q
        return ConvexRegion2((
            Halfplane(base_n, base_n.dot(p)),
            Halfplane(-base_n, -base_n.dot(p)),
            Halfplane(-d, -d.dot(back)),
        ))
    if along > 0:
        base_n = -base_n
    base = Halfplane(base_n, base_n.dot(p))  # region on the d-side of line(p,q)
    wall_n = d.perp()
    lo, hi = (p, q) if wall_n.dot(p) <= wall_n.dot(q) else (q, p)
    return ConvexRegion2((
        base,
        Halfplane(-wall_n, -wall_n.dot(lo)),
        Halfplane(wall_n, wall_n.dot(hi)),
    ))


def joint_region(t: RayTriple) -> "ConvexRegion2":
    planes = []
    for i in (1, 2, 3):
        planes.extend(half_strip(t, i).halfplanes)
    return ConvexRegion2(tuple(planes))


# ---------------------------------------------------------------------------
# Halfplane intersections via two-variable Fourier-Motzkin elimination.


def _eliminate(constraints):
    """Eliminate x from constraints a x + b y (<,<=) c; returns constraints in
    y alone as (b, c, strict) triples, plus a function recovering the open or
    closed x-interval at a fixed y."""
    uppers, lowers, pure = [], [], []
    for a, b, c, strict in constraints:
        if a > 0:
            uppers.append((a, b, c, strict))
        elif a < 0:
            lowers.append((a, b, c, strict))
        else:
            pure.append((b, c, strict))
    for al, bl, cl, sl in lowers:
        for au, bu, cu, su in uppers:
            # (cl - bl y)/al <= (cu - bu y)/au with al < 0 < au; multiplying
            # through by al*au < 0 flips the inequality.
            pure.append((al * bu - au * bl, au * cl - al * cu, sl or su))
    return pure, lowers, uppers


def _interval_of(pure):
    """Feasible interval for a single variable from (coef, rhs, strict)
    constraints coef * y (<,<=) rhs.  Returns (lo, lo_strict, hi, hi_strict)
    with None for unbounded, or None if infeasible."""
    lo, lo_s, hi, hi_s = None, False, None, False
    for coef, rhs, strict in pure:
        if coef == 0:
            if rhs < 0 or (strict and rhs == 0):
                return None
            continue
        bound = rhs / coef
        if coef > 0:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_s = bound, strict
        else:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_s = bound, strict
    if lo is not None and hi is not None:
        if lo > hi:
            return None
        if lo == hi and (lo_s or hi_s):
            return None
    return (lo, lo_s, hi, hi_s)


def _pick(interval):
    lo, lo_s, hi, hi_s = interval
    if lo is not None and hi is not None:
        if lo == hi:
            return lo
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return _ZERO


@dataclass(frozen=True)
class ConvexRegion2:
    """Intersection of closed halfplanes {p : n . p <= c}."""

    halfplanes: tuple

    def __post_init__(self):
        object.__setattr__(self, "halfplanes", tuple(self.halfplanes))

    def _constraints(self, strict: bool):
        return [(h.normal.x, h.normal.y, h.offset, strict) for h in self.halfplanes]

    def contains(self, p: Vec2) -> bool:
        return all(h.slack(p) >= 0 for h in self.halfplanes)

    def contains_strictly(self, p: Vec2) -> bool:
        return all(h.slack(p) > 0 for h in self.halfplanes)

    def _sample(self, strict: bool) -> Optional[Vec2]:
        pure, lowers, uppers = _eliminate(self._constraints(strict))
        iv = _interval_of(pure)
        if iv is None:
            return None
        y = _pick(iv)
        xs = []
        for a, b, c, strict_c in lowers + uppers:
            xs.append((a, c - b * y, strict_c))
        iv_x = _interval_of(xs)
        if iv_x is None:
            return None  # cannot happen for consistent elimination
        return Vec2(_pick(iv_x), y)

    def sample_point(self) -> Optional[Vec2]:
        return self._sample(strict=False)

    def sample_interior_point(self) -> Optional[Vec2]:
        return self._sample(strict=True)

    def is_empty(self) -> bool:
        return self.sample_point() is None

    def has_interior(self) -> bool:
        return self.sample_interior_point() is not None

    def sup_linear(self, n: Vec2) -> Optional[Rat]:
        """sup of n . p over the region; None means unbounded above.
        Precondition: the region is nonempty."""
        if n.is_zero():
            raise ValueError("objective is zero")
        # Substitute p = t n/(n.n) + s perp(n); then n.p = t and each
        # halfplane a.p <= c becomes (a.n)/(n.n) t + (a.m) s <= c.
        m = n.perp()
        nn = n.norm_sq()
        cons = []
        for h in self.halfplanes:
            cons.append((h.normal.dot(m), h.normal.dot(n) / nn, h.offset, False))
        # eliminate s (placed in the "x" slot above)
        pure, _, _ = _eliminate(cons)
        iv = _interval_of(pure)
        if iv is None:
            raise ValueError("region is empty")
        _, _, hi, _ = iv
        return hi

    def vertices(self) -> list:
        """Feasible intersection points of boundary-line pairs.  For a bounded
        region this is a superset of the extreme points."""
        hs = self.halfplanes
        out = []
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                a, b = hs[i], hs[j]
                det = a.normal.cross(b.normal)
                if det == 0:
                    continue
                x = (a.offset * b.normal.y - b.offset * a.normal.y) / det
                y = (a.normal.x * b.offset - b.normal.x * a.offset) / det
                p = Vec2(x, y)
                if self.contains(p) and p not in out:
                    out.append(p)
        return out

    def recession_ray(self) -> Optional[Vec2]:
        """A nonzero direction d with n . d <= 0 for every halfplane, or None
        if the recession cone is {0} (region bounded when nonempty)."""
        if not self.halfplanes:
            return Vec2.of(1, 0)
        cands = []
        for h in self.halfplanes:
            cands.append(h.normal.perp())
            cands.append(-h.normal.perp())
        for d in cands:
            if d.is_zero():
                continue
            if all(h.normal.dot(d) <= 0 for h in self.halfplanes):
                return d
        return None


def interior_margin(region: ConvexRegion2, p: Vec2) -> Rat:
    """Squared distance from p to the nearest bounding line when p is strictly
    inside the region; 0 when p is on the boundary or outside."""
    best = None
    for h in region.halfplanes:
        s = h.slack(p)
        if s <= 0:
            return _ZERO
        d = s * s / h.normal.norm_sq()
        if best is None or d < best:
            best = d
    return best if best is not None else _ZERO


# ---------------------------------------------------------------------------
# Triangles spanned by ray points.


@dataclass(frozen=True)
class Triangle2:
    a: Vec2
    b: Vec2
    c: Vec2


def spanned_triangle(t: RayTriple, t1, t2, t3) -> Triangle2:
    for v in (t1, t2, t3):
        if rat(v) < 0:
            raise ValueError("ray parameters must be nonnegative")
    return Triangle2(t.r1.at(rat(t1)), t.r2.at(rat(t2)), t.r3.at(rat(t3)))


def triangle_contains(tri: Triangle2, p: Vec2) -> bool:
    """Closed containment; degenerate (collinear) triangles are their hull
    segment, covered by the union of the three edge segments."""
    a, b, c = tri.a, tri.b, tri.c
    s1 = (b - a).cross(p - a)
    s2 = (c - b).cross(p - b)
    s3 = (a - c).cross(p - c)
    if (b - a).cross(c - a) == 0:
        return (
            _point_on_segment2(p, a, b)
            or _point_on_segment2(p, b, c)
            or _point_on_segment2(p, a, c)
        )
    pos = any(s > 0 for s in (s1, s2, s3))
    neg = any(s < 0 for s in (s1, s2, s3))
    return not (pos and neg)


def _point_on_segment2(p: Vec2, a: Vec2, b: Vec2) -> bool:
    e = b - a
    w = p - a
    if w.cross(e) != 0:
        return False
    t = w.dot(e)
    return 0 <= t <= e.dot(e)
