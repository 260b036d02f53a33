"""Rulings of z = xy and the witness polygons that stab chosen subfamilies.

Worked instance used in several fixtures: A = {1, 2}, stab both, avoid the
x-axis.  Then beta* = 1, delta^2 = 1, s = 1/3, and the witness is the segment
[(1, 4/3, 4/3), (2, 7/6, 7/3)].
"""

import pytest
from hypothesis import given, strategies as st

from linestab.geometry import (
    ConvexPolygon3,
    Line3,
    Vec3,
    line_intersects_polygon,
    line_line_dist_sq,
    line_point_dist_sq,
)
from linestab.ruling import (
    ConvexityCheckFailed,
    EmptyB,
    NonDisjointBR,
    RulingFamily,
    WitnessPlan,
    ZeroAlpha,
    build_witness,
    choose_beta_star,
    classify_vs_sigma,
    ell_line,
    lambda_line,
    verify_witness,
    witness_plan,
    witness_point,
)
from linestab.rng import Rng
from linestab.scalar import Rat, rat

V = Vec3.of
X_AXIS = Line3(V(0, 0, 0), V(1, 0, 0))

alphas_st = st.fractions(min_value="1/8", max_value=12, max_denominator=8)


def plan_for(alphas, stab, r_lines):
    fam = RulingFamily(tuple(alphas))
    return witness_plan(fam, stab, r_lines)


# ---------------------------------------------------------------------------
# The two ruling families.


def test_ruling_lines_fixtures():
    lam1 = lambda_line(1)
    assert lam1 == Line3(V(1, 0, 0), V(0, 1, 1))
    assert lambda_line(0) == Line3(V(0, 0, 0), V(0, 1, 0))  # the y-axis
    assert lambda_line(2).at(Rat(7, 6)) == V(2, Rat(7, 6), Rat(7, 3))
    assert ell_line(0) == X_AXIS
    assert ell_line(1) == Line3(V(0, 1, 0), V(1, 0, 1))


@given(alphas_st, alphas_st)
def test_rulings_meet_on_the_surface(a, b):
    a, b = rat(a), rat(b)
    meet = V(a, b, a * b)
    assert line_point_dist_sq(lambda_line(a), meet) == 0
    assert line_point_dist_sq(ell_line(b), meet) == 0
    assert line_line_dist_sq(lambda_line(a), ell_line(b)) == 0


@given(alphas_st, alphas_st)
def test_same_family_rulings_are_disjoint(a, b):
    if rat(a) != rat(b):
        assert line_line_dist_sq(lambda_line(a), lambda_line(b)) > 0


def test_family_validation():
    with pytest.raises(ValueError):
        RulingFamily(())
    with pytest.raises(ValueError):
        RulingFamily((1, 1))
    with pytest.raises(ValueError):
        RulingFamily((2, 1))
    with pytest.raises(ValueError):
        RulingFamily((0, 1))
    fam = RulingFamily((Rat(1, 2), 1, 3))
    assert len(fam) == 3
    assert fam.lines()[2] == lambda_line(3)


# ---------------------------------------------------------------------------
# Classification against the surface.


def test_classify_fixtures():
    c = classify_vs_sigma(lambda_line(3))
    assert (c.kind, c.param) == ("ruling-x-const", 3)
    c = classify_vs_sigma(ell_line(2))
    assert (c.kind, c.param) == ("ruling-y-const", 2)
    c = classify_vs_sigma(Line3(V(0, 0, 0), V(1, 1, 1)))
    assert c.kind == "secant" and c.y_values == (0, 1)
    c = classify_vs_sigma(Line3(V(0, 5, 0), V(1, 0, 0)))
    assert c.kind == "secant" and c.y_values == (5,)
    # crossings at irrational parameters carry no rational y-values
    c = classify_vs_sigma(Line3(V(0, 0, 1), V(1, 2, 0)))
    assert c.kind == "secant" and c.y_values == ()


# ---------------------------------------------------------------------------
# Witness construction.


def test_choose_beta_star_fixtures():
    assert choose_beta_star([X_AXIS]) == 1
    assert choose_beta_star([Line3(V(0, 0, 0), V(1, 1, 1)), ell_line(1)]) == 2
    assert choose_beta_star([]) == 1


def test_witness_point_fixtures():
    assert witness_point(1, 1, Rat(1, 3)) == V(1, Rat(4, 3), Rat(4, 3))
    assert witness_point(2, 1, Rat(1, 3)) == V(2, Rat(7, 6), Rat(7, 3))
    assert witness_point(1, 0, 0) == V(1, 0, 0)
    with pytest.raises(ZeroAlpha):
        witness_point(0, 1, 1)


def test_witness_plan_worked_example():
    plan = plan_for((1, 2), (1, 2), [X_AXIS])
    assert plan.beta_star == 1
    assert plan.delta_sq == 1
    assert plan.s == Rat(1, 3)
    assert plan.alphas == (1, 2)
    assert plan.r_sigma == () and plan.r_prime == (X_AXIS,)


def test_witness_plan_partitions_mixed_avoid_set():
    r = [lambda_line(1), lambda_line(2), X_AXIS]
    plan = plan_for(range(1, 8), (3, 4, 5, 6, 7), r)
    assert set(plan.r_sigma) == {lambda_line(1), lambda_line(2)}
    assert plan.r_prime == (X_AXIS,)
    assert plan.beta_star == 1
    # alpha_1 = 3: need (1/i)^2 (4/3)^2 < 1, so i = 2
    assert plan.s == Rat(1, 2)


def test_witness_plan_empty_avoid_set():
    plan = plan_for((1, 2), (1,), [])
    assert (plan.beta_star, plan.s, plan.delta_sq) == (1, 1, None)
    poly = build_witness(plan)
    assert poly.vertices == (V(1, 2, 2),)


def test_witness_plan_errors():
    with pytest.raises(EmptyB):
        plan_for((1, 2), (), [X_AXIS])
    with pytest.raises(NonDisjointBR):
        plan_for((1, 2), (1,), [lambda_line(1)])
    with pytest.raises(ValueError):
        plan_for((1, 2), (3,), [])  # stab parameter outside the family


def test_build_witness_zero_tilt_rejected():
    # s = 0 drops every vertex onto the base ruling line: collinear, not convex
    flat = WitnessPlan(Rat(1), Rat(0), None, (Rat(1), Rat(2), Rat(3)), (), ())
    with pytest.raises(ConvexityCheckFailed):
        build_witness(flat)


def test_build_witness_fixtures():
    seg = build_witness(plan_for((1, 2), (1, 2), [X_AXIS]))
    assert seg.vertices == (V(1, Rat(4, 3), Rat(4, 3)), V(2, Rat(7, 6), Rat(7, 3)))
    tri = build_witness(plan_for((1, 2, 3), (1, 2, 3), [X_AXIS]))
    assert tri.vertices == (
        V(1, Rat(4, 3), Rat(4, 3)),
        V(2, Rat(7, 6), Rat(7, 3)),
        V(3, Rat(10, 9), Rat(10, 3)),
    )


def test_verify_witness_worked_example():
    plan = plan_for((1, 2), (1, 2), [X_AXIS])
    poly = build_witness(plan)
    report = verify_witness(poly, [lambda_line(1), lambda_line(2)], [X_AXIS])
    assert report.stabbed == (0, 1)
    assert report.missed == (0,)
    assert report.violations == ()


def test_verify_witness_oversized_tilt_still_misses():
    # s = 2 violates the planning bound but the avoid test is still exact:
    # the single witness point (1, 3, 3) misses the x-axis anyway.
    poly = ConvexPolygon3((witness_point(1, 1, 2),))
    assert poly.vertices == (V(1, 3, 3),)
    report = verify_witness(poly, [lambda_line(1)], [X_AXIS])
    assert report.violations == ()


def test_verify_witness_reports_avoid_violation():
    poly = build_witness(plan_for((1, 2), (1, 2), [X_AXIS]))
    report = verify_witness(poly, [lambda_line(1)], [lambda_line(2)])
    assert ("avoid", 0) in report.violations


def test_verify_witness_reports_stab_violation():
    poly = build_witness(plan_for((1, 2), (1, 2), [X_AXIS]))
    report = verify_witness(poly, [lambda_line(3)], [])
    assert report.violations == (("stab", 0),)
    assert report.stabbed == ()


# ---------------------------------------------------------------------------
# Randomized instances: the planning invariants, exactly.


def random_instance(rng: Rng):
    n = rng.randint(1, 12)
    alphas = set()
    while len(alphas) < n:
        alphas.add(rng.fraction(Rat(1, 4), 8, max_den=6))
    alphas = tuple(sorted(alphas))
    fam = RulingFamily(alphas)
    stab = tuple(alphas[i] for i in rng.subset(range(n), rng.randint(1, n)))
    stab_lines = {lambda_line(a) for a in stab}
    r_lines = []
    for _ in range(rng.randint(0, 4)):
        kind = rng.choice(["lambda", "ell", "secant"])
        if kind == "lambda":
            cand = lambda_line(rng.fraction(Rat(1, 4), 10, max_den=6))
        elif kind == "ell":
            cand = ell_line(rng.fraction(0, 10, max_den=6))
        else:
            anchor = V(rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6))
            d = V(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            if d.is_zero():
                d = V(1, 1, 0)
            cand = Line3(anchor, d)
        if cand not in stab_lines:
            r_lines.append(cand)
    return fam, stab, r_lines


def test_random_instances_verify_clean():
    rng = Rng(60601)
    for _ in range(60):
        fam, stab, r_lines = random_instance(rng)
        plan = witness_plan(fam, stab, r_lines)
        poly = build_witness(plan)
        report = verify_witness(poly, [lambda_line(a) for a in stab], r_lines)
        assert report.violations == ()
        assert len(report.stabbed) == len(set(stab))
        assert len(report.missed) == len(r_lines)


def test_planarity_and_cylinder_bound():
    rng = Rng(70707)
    for _ in range(40):
        fam, stab, r_lines = random_instance(rng)
        plan = witness_plan(fam, stab, r_lines)
        poly = build_witness(plan)
        base = ell_line(plan.beta_star)
        for alpha, p in zip(plan.alphas, poly.vertices):
            assert p.z == plan.beta_star * p.x + plan.s  # on the tilted plane
            bound = plan.s * plan.s * (1 + 1 / alpha) ** 2
            assert line_point_dist_sq(base, p) <= bound
        if plan.delta_sq is not None:
            # planning bound: the whole polygon clears the avoid cylinder
            assert plan.s * plan.s * (1 + 1 / plan.alphas[0]) ** 2 < plan.delta_sq


def test_on_surface_avoid_lines_miss_for_every_tilt():
    # Avoided same-family rulings never touch the witness, whatever s is.
    rng = Rng(80808)
    seen = 0
    for _ in range(60):
        fam, stab, r_lines = random_instance(rng)
        plan = witness_plan(fam, stab, r_lines)
        if not plan.r_sigma:
            continue
        seen += 1
        for i in range(1, 11):
            tilted = WitnessPlan(
                plan.beta_star, Rat(1, i), plan.delta_sq, plan.alphas,
                plan.r_sigma, plan.r_prime,
            )
            poly = build_witness(tilted)
            for r in plan.r_sigma:
                assert not line_intersects_polygon(r, poly)
    assert seen >= 10


def test_beta_star_certified_disjoint():
    rng = Rng(90909)
    for _ in range(40):
        _, _, r_lines = random_instance(rng)
        plan_lines = [r for r in r_lines if classify_vs_sigma(r).kind != "ruling-x-const"]
        beta = choose_beta_star(plan_lines)
        assert beta.denominator == 1 and beta >= 1
        base = ell_line(beta)
        for r in plan_lines:
            assert line_line_dist_sq(base, r) > 0
        # minimality: every smaller positive integer collides with some line
        for smaller in range(1, int(beta)):
            cand = ell_line(smaller)
            assert any(line_line_dist_sq(cand, r) == 0 for r in plan_lines)
