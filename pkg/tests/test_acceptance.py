"""Acceptance checklist: one test per shipped guarantee, at full size.

Run with -v to get one pass/fail line per criterion; each test also prints a
one-line summary with its instance count and wall time, and enforces its own
time budget.  Everything here is exact rational arithmetic; random instances
are seeded and therefore reproducible.
"""

import json
import time
from functools import lru_cache

import pytest

from linestab.cube import (
    DIAG_CLAIM_EPS,
    assemble_three_cubes,
    check_joint_region_case,
    incidence_table,
    verify_diag_claim,
    verify_nine_thirteen,
)
from linestab.game import (
    GameParams,
    HardeningFailed,
    harden,
    minimal_n,
    miss_margin,
    refute,
)
from linestab.geometry import ConvexBody, Line3, Vec3, line_point_dist_sq
from linestab.higherdim import meets_embedded_body, sample_hitting_lines, verify_projection_property
from linestab.jsonio import polygon_to_json
from linestab.rays import (
    Ray2,
    RayTriple,
    Vec2,
    interior_margin,
    is_separated_triple,
    joint_region,
    spanned_triangle,
    triangle_contains,
)
from linestab.ruling import (
    RulingFamily,
    build_witness,
    ell_line,
    lambda_line,
    verify_witness,
    witness_plan,
)
from linestab.rng import Rng
from linestab.scalar import Rat, ceil_rat, sqrt_lower_bound

V3 = Vec3.of
P2 = Vec2.of
X_AXIS = Line3(V3(0, 0, 0), V3(1, 0, 0))


def announce(criterion: int, detail: str, started: float, budget: float):
    elapsed = time.monotonic() - started
    assert elapsed < budget, f"criterion {criterion} exceeded its {budget:.0f}s budget ({elapsed:.1f}s)"
    print(f"criterion {criterion}: PASS ({detail}, {elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# Shared instance builders (seeded, deterministic).


def random_ruling_instance(rng: Rng):
    n = rng.randint(1, 12)
    alphas = set()
    while len(alphas) < n:
        alphas.add(rng.fraction(Rat(1, 4), 8, max_den=6))
    fam = RulingFamily(tuple(sorted(alphas)))
    stab = tuple(fam.alphas[i] for i in rng.subset(range(n), rng.randint(1, n)))
    stab_lines = {lambda_line(a) for a in stab}
    r_lines = []
    for _ in range(rng.randint(0, 4)):
        kind = rng.choice(["lambda", "ell", "secant"])
        if kind == "lambda":
            cand = lambda_line(rng.fraction(Rat(1, 4), 10, max_den=6))
        elif kind == "ell":
            cand = ell_line(rng.fraction(0, 10, max_den=6))
        else:
            anchor = V3(rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6))
            d = V3(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            cand = Line3(anchor, d) if not d.is_zero() else X_AXIS
        if cand not in stab_lines:
            r_lines.append(cand)
    return fam, stab, r_lines


def random_adversary(rng: Rng, k: int, fam: RulingFamily) -> list:
    lines = []
    for _ in range(rng.randint(0, k)):
        kind = rng.choice(["family", "lambda", "ell", "secant"])
        if kind == "family":
            lines.append(lambda_line(rng.choice(fam.alphas)))
        elif kind == "lambda":
            lines.append(lambda_line(rng.fraction(Rat(1, 4), 30, max_den=5)))
        elif kind == "ell":
            lines.append(ell_line(rng.fraction(0, 6, max_den=5)))
        else:
            anchor = V3(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
            d = V3(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            lines.append(Line3(anchor, d) if not d.is_zero() else X_AXIS)
    return lines


@lru_cache(maxsize=1)
def game_grid():
    """All refutation-game instances for criteria 2 and 3: the full epsilon x k
    grid at n = minimal_n with 100 seeded adversaries per cell."""
    rng = Rng(2024)
    out = []
    for eps in (Rat(1, 4), Rat(1, 2), Rat(3, 4)):
        for k in range(1, 6):
            n = minimal_n(eps, k)
            fam = RulingFamily(tuple(range(1, n + 1)))
            params = GameParams(eps, k, n)
            for _ in range(100):
                adversary = random_adversary(rng, k, fam)
                out.append((params, fam, adversary, refute(fam, params, adversary)))
    return out


def random_ray_triple(rng: Rng) -> RayTriple:
    rays = []
    for _ in range(3):
        o = P2(rng.randint(-10, 10), rng.randint(-10, 10))
        d = P2(rng.randint(-5, 5), rng.randint(-5, 5))
        while d.is_zero():
            d = P2(rng.randint(-5, 5), rng.randint(-5, 5))
        rays.append(Ray2(o, d))
    return RayTriple(*rays)


def separated_triples_with_interior(seed: int, count: int) -> list:
    rng = Rng(seed)
    out = []
    while len(out) < count:
        t = random_ray_triple(rng)
        if not t.pairwise_nonparallel():
            continue
        o = [r.origin for r in t.rays]
        if (o[1] - o[0]).cross(o[2] - o[0]) == 0:
            continue
        if not is_separated_triple(t):
            continue
        if not joint_region(t).has_interior():
            continue
        out.append(t)
    return out


# ---------------------------------------------------------------------------
# The eight criteria.


def test_criterion_1_witness_construction_suite():
    started = time.monotonic()
    rng = Rng(11)
    count = 200
    for _ in range(count):
        fam, stab, r_lines = random_ruling_instance(rng)
        plan = witness_plan(fam, stab, r_lines)
        poly = build_witness(plan)
        report = verify_witness(poly, [lambda_line(a) for a in plan.alphas], r_lines)
        assert report.violations == ()
        assert len(report.stabbed) == len(plan.alphas)
        assert len(report.missed) == len(r_lines)
        base = ell_line(plan.beta_star)
        for alpha, p in zip(plan.alphas, poly.vertices):
            assert p.z == plan.beta_star * p.x + plan.s
            assert line_point_dist_sq(base, p) <= plan.s**2 * (1 + 1 / alpha) ** 2
        if plan.delta_sq is not None:
            assert plan.s**2 * (1 + 1 / plan.alphas[0]) ** 2 < plan.delta_sq
    announce(1, f"{count} witness instances, zero violations", started, 60)


def test_criterion_2_refutation_game_grid():
    started = time.monotonic()
    grid = game_grid()
    assert len(grid) == 15 * 100
    for params, fam, adversary, witness in grid:
        threshold = ceil_rat(params.epsilon * params.n)
        assert len(witness.stabbed) >= threshold
        assert witness.report.violations == ()
        assert len(witness.report.missed) == len(adversary)
    announce(2, "15 cells x 100 adversaries, all refuted", started, 120)


def test_criterion_3_hardening():
    grid = game_grid()  # built under criterion 2's budget; cached here
    started = time.monotonic()
    delta, jitter = Rat(1, 1000), Rat(1, 10**6)
    hardened = skipped = 0
    for i, (params, fam, adversary, witness) in enumerate(grid):
        margin = miss_margin([witness.body], adversary)
        if margin is not None and margin <= delta * delta:
            skipped += 1  # the adversary grazes closer than delta: out of scope
            continue
        harden(fam, [witness.body], [adversary], delta, jitter, seed=i)
        hardened += 1
    assert hardened >= 1200, f"only {hardened} instances satisfied the margin precondition"

    # engineered failure 1: inflation pushed just past the exact miss margin
    fam7 = RulingFamily(tuple(range(1, 8)))
    params7 = GameParams(Rat(1, 2), 3, 7)
    adv = [lambda_line(1), lambda_line(2), X_AXIS]
    w = refute(fam7, params7, adv)
    margin = miss_margin([w.body], adv)
    too_far = sqrt_lower_bound(margin) + Rat(1, 2**30)
    with pytest.raises(HardeningFailed) as exc:
        harden(fam7, [w.body], [adv], too_far, jitter)
    assert exc.value.check == "adversary-now-hits"

    # engineered failure 2: jitters large enough to collide two family lines
    with pytest.raises(HardeningFailed) as exc:
        harden(
            RulingFamily((1, 2)), [], [],
            delta, 2, jitters=[[-1, 0, 0, 0, 0, 0], [-2, 0, 0, 0, 0, 0]],
        )
    assert exc.value.check == "pairwise-skew" and exc.value.detail == (0, 1)
    announce(3, f"{hardened} hardened ({skipped} below margin), both failure paths named", started, 60)


def test_criterion_4_joint_region_containment_and_stability():
    started = time.monotonic()
    triples = separated_triples_with_interior(40404, 100)
    for idx, t in enumerate(triples):
        region = joint_region(t)
        x = region.sample_interior_point()
        assert x is not None
        trng = Rng(idx)
        for _ in range(1000):
            tri = spanned_triangle(
                t,
                trng.fraction(0, 50, max_den=7),
                trng.fraction(0, 50, max_den=7),
                trng.fraction(0, 50, max_den=7),
            )
            assert triangle_contains(tri, x)

        margin_sq = interior_margin(region, x)
        assert margin_sq > 0
        bound = sqrt_lower_bound(margin_sq) / 1000
        assert bound > 0
        prng = Rng(idx + 10**6)
        moved = []
        for r in t.rays:
            o = P2(r.origin.x + prng.jitter(bound), r.origin.y + prng.jitter(bound))
            d = P2(r.dir.x + prng.jitter(bound), r.dir.y + prng.jitter(bound))
            moved.append(Ray2(o, d))
        shaken = RayTriple(*moved)
        assert is_separated_triple(shaken)
        assert interior_margin(joint_region(shaken), x) > 0
    announce(4, "100 triples x 1000 triangles + stability at margin/1000", started, 60)


def test_criterion_5_perturbed_diagonal_claim():
    started = time.monotonic()
    for which in (1, 2, 3, 4):
        rep = check_joint_region_case(which)
        assert rep.separated == (True, True)
        assert all(m > 0 for m in rep.margins)
    claim = verify_diag_claim(DIAG_CLAIM_EPS, 10**4, 0)
    assert claim.failures == ()
    assert claim.worst_margin_sq is not None and claim.worst_margin_sq > 0
    announce(5, "4 joint-region cases + 10^4 trials at eps 1/100, zero failures", started, 300)


def test_criterion_6_nine_thirteen_assembly():
    started = time.monotonic()
    cfg = assemble_three_cubes()
    rep = verify_nine_thirteen(cfg, 1000, 0)
    assert rep.failures == ()
    names = {cfg.red_name(i) for i in range(13)}
    assert len(rep.certificates) == 1000
    assert all(c in names for c in rep.certificates)
    assert len(set(rep.certificates)) >= 3  # several regimes, several certifiers
    announce(6, "10^3 sampled hulls, every one named a certifying line", started, 300)


def test_criterion_7_projection_implication():
    started = time.monotonic()
    bodies = []
    for stab, avoid in (((1,), ()), ((1, 2), (X_AXIS,)), ((1, 2, 3, 4, 5), (X_AXIS,))):
        fam = RulingFamily(tuple(stab))
        poly = build_witness(witness_plan(fam, stab, list(avoid)))
        bodies.append(ConvexBody(poly.vertices, Rat(0)))
    checked = 0
    for d in (4, 5, 6):
        for b_idx, body in enumerate(bodies):
            for line in sample_hitting_lines(body, d, 100, seed=100 * d + b_idx):
                assert meets_embedded_body(line, body)
                assert verify_projection_property(line, body).holds
                checked += 1
    assert checked == 900
    announce(7, "3 witness bodies x d in {4,5,6} x 100 lines", started, 30)


def test_criterion_8_frozen_fixtures():
    started = time.monotonic()
    assert json.dumps(incidence_table()) == (
        "[[false, false, false], [true, true, false],"
        " [true, false, true], [false, true, true]]"
    )
    assert (minimal_n(Rat(1, 2), 3), minimal_n(Rat(3, 4), 1), minimal_n(Rat(1, 2), 1)) == (7, 5, 3)
    poly = build_witness(witness_plan(RulingFamily((1, 2)), (1, 2), [X_AXIS]))
    assert json.dumps(polygon_to_json(poly), sort_keys=True) == (
        '{"vertices": [["1", "4/3", "4/3"], ["2", "7/6", "7/3"]]}'
    )
    announce(8, "incidence table, budget table, witness segment byte-exact", started, 1)
