"""Witness polygons for line families on the doubly ruled surface z = xy.

The surface carries two rulings: for a parameter a the line (a, t, at), whose
points have constant x, and for a parameter b the line (t, b, bt), whose
points have constant y.  Lines of the two families meet pairwise (at (a,b,ab))
but each family is pairwise skew.

Given a finite first-ruling family and a set B of its members to stab, with a
set R of lines to avoid, the construction tilts a plane z = b*x + s slightly
off the second-ruling line of parameter b*: the plane cuts every first-ruling
line x = a at the point (a, b* + s/a, b*a + s), and those points, taken over
the parameters of B in increasing order, form a strictly convex polygon on
one branch of a hyperbola.  Every stabbed line meets the polygon in exactly
its own vertex; every avoided line misses it, because the whole polygon lies
within distance s(1 + 1/a_min) of the second-ruling line while R stays at
least sqrt(delta_sq) away (tilt budget), and first-ruling lines outside B
cross the plane on the hyperbola but outside the polygon.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import (
    ConvexPolygon3,
    Line3,
    LinePlaneHit,
    Plane3,
    Vec3,
    line_intersects_polygon,
    line_line_dist_sq,
    line_plane_intersection,
)
from .scalar import Rat, rat

__all__ = [
    "RulingFamily",
    "SigmaClass",
    "WitnessPlan",
    "WitnessReport",
    "ZeroAlpha",
    "EmptyB",
    "NonDisjointBR",
    "ConvexityCheckFailed",
    "lambda_line",
    "ell_line",
    "classify_vs_sigma",
    "choose_beta_star",
    "witness_plan",
    "witness_point",
    "build_witness",
    "verify_witness",
]


class ZeroAlpha(ValueError):
    pass


class EmptyB(ValueError):
    pass


class NonDisjointBR(ValueError):
    pass


class ConvexityCheckFailed(ValueError):
    pass


def lambda_line(alpha) -> Line3:
    """First-ruling line (alpha, t, alpha*t)."""
    alpha = rat(alpha)
    return Line3(Vec3.of(alpha, 0, 0), Vec3.of(0, 1, alpha))


def ell_line(beta) -> Line3:
    """Second-ruling line (t, beta, beta*t)."""
    beta = rat(beta)
    return Line3(Vec3.of(0, beta, 0), Vec3.of(1, 0, beta))


@dataclass(frozen=True)
class RulingFamily:
    """Strictly increasing positive parameters of first-ruling lines."""

    alphas: tuple

    def __post_init__(self):
        a = tuple(rat(x) for x in self.alphas)
        object.__setattr__(self, "alphas", a)
        if not a:
            raise ValueError("family is empty")
        if any(x <= 0 for x in a):
            raise ValueError("parameters must be positive")
        if any(a[i] >= a[i + 1] for i in range(len(a) - 1)):
            raise ValueError("parameters must be strictly increasing")

    def lines(self) -> list:
        return [lambda_line(a) for a in self.alphas]

    def __len__(self):
        return len(self.alphas)


@dataclass(frozen=True)
class SigmaClass:
    """How a line sits relative to the surface z = xy.

    kind 'ruling-x-const' with param a: the line is (a, t, at).
    kind 'ruling-y-const' with param b: the line is (t, b, bt).
    kind 'secant': everything else; y_values lists the y-coordinates of the
    rational surface points (0, 1, or 2 of them; irrational crossings are
    omitted, they can never collide with a rational parameter choice).
    """

    kind: str
    param: Optional[Rat] = None
    y_values: tuple = ()


def classify_vs_sigma(line: Line3) -> SigmaClass:
    a, d = line.anchor, line.dir
    # z - xy along the line is a quadratic in the parameter.
    c2 = -d.x * d.y
    c1 = d.z - a.x * d.y - a.y * d.x
    c0 = a.z - a.x * a.y
    if c2 == 0 and c1 == 0 and c0 == 0:
        # On the surface: the only full lines on z = xy are the two rulings.
        if d.x == 0:
            return SigmaClass("ruling-x-const", param=a.x)
        return SigmaClass("ruling-y-const", param=a.y)
    ys = []
    for t in _rational_roots(c2, c1, c0):
        y = a.y + t * d.y
        if y not in ys:
            ys.append(y)
    ys.sort()
    return SigmaClass("secant", y_values=tuple(ys))


def _rational_roots(c2, c1, c0) -> list:
    from .scalar import isqrt_rat

    if c2 == 0:
        if c1 == 0:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    root = isqrt_rat(disc)
    if root is None:
        return []
    if root == 0:
        return [-c1 / (2 * c2)]
    return [(-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)]


@dataclass(frozen=True)
class WitnessPlan:
    """Everything needed to build and audit one witness polygon.

    beta_star is the chosen second-ruling parameter (a positive integer);
    s the plane tilt (1 or 1/i); delta_sq the squared clearance of the
    second-ruling line from the non-ruling avoid set (None for unbounded);
    alphas the stabbed parameters in increasing order; r_sigma / r_prime the
    partition of the avoid set into first-ruling lines and the rest.
    """

    beta_star: Rat
    s: Rat
    delta_sq: Optional[Rat]
    alphas: tuple
    r_sigma: tuple
    r_prime: tuple


def choose_beta_star(r_prime: Sequence[Line3]) -> Rat:
    """Smallest positive integer b such that the second-ruling line of
    parameter b has positive distance to every line in r_prime.

    Terminates: a line off the surface meets at most two second-ruling lines
    (its surface points have at most two y-values), and a second-ruling line
    collides only with itself, so at most 2*len(r_prime) + 1 candidates are
    ever excluded.
    """
    beta = 1
    while True:
        cand = ell_line(beta)
        if all(line_line_dist_sq(cand, r) > 0 for r in r_prime):
            return rat(beta)
        beta += 1


def witness_point(alpha, beta_star, s) -> Vec3:
    """Intersection of the plane z = beta_star*x + s with the first-ruling
    line of parameter alpha."""
    alpha, beta_star, s = rat(alpha), rat(beta_star), rat(s)
    if alpha == 0:
        raise ZeroAlpha("witness point undefined at alpha = 0")
    return Vec3(alpha, beta_star + s / alpha, beta_star * alpha + s)


def witness_plan(fam: RulingFamily, b_alphas, r_lines: Sequence[Line3]) -> WitnessPlan:
    alphas = tuple(sorted({rat(a) for a in b_alphas}))
    if not alphas:
        raise EmptyB("no lines to stab")
    fam_set = set(fam.alphas)
    if any(a not in fam_set for a in alphas):
        raise ValueError("stab parameters must belong to the family")
    b_lines = {lambda_line(a) for a in alphas}
    for r in r_lines:
        if r in b_lines:
            raise NonDisjointBR("avoid set shares a line with the stab set")
    r_sigma, r_prime = [], []
    for r in r_lines:
        if classify_vs_sigma(r).kind == "ruling-x-const":
            r_sigma.append(r)
        else:
            r_prime.append(r)
    if not r_prime:
        return WitnessPlan(Rat(1), Rat(1), None, alphas, tuple(r_sigma), ())
    beta_star = choose_beta_star(r_prime)
    base = ell_line(beta_star)
    delta_sq = min(line_line_dist_sq(base, r) for r in r_prime)
    alpha1 = alphas[0]
    # Largest tilt s = 1/i with s^2 (1 + 1/alpha1)^2 < delta_sq, so the whole
    # polygon stays strictly inside the clearance cylinder of the base line.
    factor = (1 + 1 / alpha1) ** 2
    i = 1
    while factor / (i * i) >= delta_sq:
        i += 1
    return WitnessPlan(beta_star, Rat(1, i), delta_sq, alphas, tuple(r_sigma), tuple(r_prime))


def build_witness(plan: WitnessPlan) -> ConvexPolygon3:
    """Witness polygon with one vertex per stabbed parameter, ordered by
    increasing parameter; convex position is verified, not assumed."""
    verts = tuple(witness_point(a, plan.beta_star, plan.s) for a in plan.alphas)
    try:
        return ConvexPolygon3(verts)
    except ValueError as exc:
        raise ConvexityCheckFailed(str(exc)) from exc


@dataclass(frozen=True)
class WitnessReport:
    stabbed: tuple
    missed: tuple
    violations: tuple


def _single_vertex_contact(line: Line3, poly: ConvexPolygon3) -> Optional[Vec3]:
    """The unique point where the line meets the polygon, provided that point
    is a vertex and the crossing is transversal; None otherwise."""
    v = poly.vertices
    if len(v) == 1:
        from .geometry import line_contains_point

        return v[0] if line_contains_point(line, v[0]) else None
    if len(v) == 2:
        from .geometry import line_contains_point

        on = [line_contains_point(line, p) for p in v]
        if on[0] != on[1]:
            return v[0] if on[0] else v[1]
        return None
    hit = line_plane_intersection(line, poly.plane())
    if hit.kind != "point":
        return None
    if hit.point in v:
        return hit.point
    return None


def verify_witness(poly: ConvexPolygon3, b_lines: Sequence[Line3], r_lines: Sequence[Line3]) -> WitnessReport:
    """Audit a witness: every stab line must meet the polygon in exactly one
    of its vertices (transversally), every avoid line must miss it."""
    stabbed, missed, violations = [], [], []
    for idx, line in enumerate(b_lines):
        contact = _single_vertex_contact(line, poly)
        if contact is not None and line_intersects_polygon(line, poly):
            stabbed.append(idx)
        else:
            violations.append(("stab", idx))
    for idx, line in enumerate(r_lines):
        if line_intersects_polygon(line, poly):
            violations.append(("avoid", idx))
        else:
            missed.append(idx)
    return WitnessReport(tuple(stabbed), tuple(missed), tuple(violations))
