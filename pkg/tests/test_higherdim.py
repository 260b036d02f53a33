"""Zero-padded embeddings into R^d and the projection implication."""

import pytest

from linestab.geometry import ConvexBody, Line3, Vec3
from linestab.higherdim import (
    DimensionMismatch,
    LineD,
    PointD,
    embed_body,
    embed_line,
    embed_point,
    meets_embedded_body,
    project_line_to_S,
    project_point_to_S,
    sample_hitting_lines,
    verify_projection_property,
)
from linestab.ruling import lambda_line
from linestab.scalar import Rat

V = Vec3.of
TETRA = ConvexBody((V(0, 0, 0), V(6, 0, 0), V(0, 6, 0), V(0, 0, 6)), Rat(0))
SEGMENT = ConvexBody((V(1, Rat(4, 3), Rat(4, 3)), V(2, Rat(7, 6), Rat(7, 3))), Rat(0))


def P(*coords):
    return PointD(tuple(coords))


def test_embed_fixtures():
    assert embed_point(V(1, 2, 3), 5).coords == (1, 2, 3, 0, 0)
    assert embed_point(V(1, 2, 3), 3).coords == (1, 2, 3)
    lam = embed_line(lambda_line(1), 4)
    assert lam.anchor.coords == (1, 0, 0, 0)
    assert lam.dir.coords == (0, 1, 1, 0)
    assert lam.dim == 4
    assert lam.at(2).coords == (1, 2, 2, 0)
    assert project_point_to_S(embed_point(V(1, 2, 3), 6)) == V(1, 2, 3)


def test_dimension_validation():
    with pytest.raises(DimensionMismatch):
        embed_point(V(0, 0, 0), 2)
    with pytest.raises(DimensionMismatch):
        P(1, 2)
    with pytest.raises(DimensionMismatch):
        LineD(P(0, 0, 0, 0), P(1, 0, 0))
    with pytest.raises(ValueError):
        LineD(P(0, 0, 0, 0), P(0, 0, 0, 0))


def test_embed_body():
    pts = embed_body(SEGMENT, 5)
    assert [p.coords for p in pts] == [
        (1, Rat(4, 3), Rat(4, 3), 0, 0),
        (2, Rat(7, 6), Rat(7, 3), 0, 0),
    ]
    with pytest.raises(ValueError):
        embed_body(ConvexBody(SEGMENT.vertices, Rat(1, 1000)), 5)


def test_projection_cases():
    # direction orthogonal to S collapses to the anchor's truncation
    vertical = LineD(P(1, Rat(4, 3), Rat(4, 3), 7), P(0, 0, 0, 1))
    assert project_line_to_S(vertical) == V(1, Rat(4, 3), Rat(4, 3))
    slanted = LineD(P(0, 0, 0, 0), P(1, 1, 1, 1))
    assert project_line_to_S(slanted) == Line3(V(0, 0, 0), V(1, 1, 1))


def test_meets_embedded_inside_S():
    inside_hit = embed_line(Line3(V(1, 1, 1), V(1, 0, 0)), 6)
    assert meets_embedded_body(inside_hit, TETRA)
    inside_miss = embed_line(Line3(V(7, 7, 7), V(1, -1, 0)), 6)
    assert not meets_embedded_body(inside_miss, TETRA)
    lam = embed_line(lambda_line(1), 5)
    assert meets_embedded_body(lam, SEGMENT)


def test_meets_embedded_unique_crossing():
    dips_in = LineD(P(1, 1, 1, 1), P(0, 0, 0, -1))
    assert meets_embedded_body(dips_in, TETRA)
    dips_out = LineD(P(5, 5, 5, 1), P(0, 0, 0, -1))
    assert not meets_embedded_body(dips_out, TETRA)
    skims = LineD(P(Rat(1, 4), Rat(1, 4), Rat(1, 4), 0, 0), P(0, 0, 0, 1, 1))
    assert meets_embedded_body(skims, TETRA)


def test_meets_embedded_never_touches_S():
    parallel = LineD(P(1, 1, 1, 1, 0), P(1, 0, 0, 0, 0))
    assert not meets_embedded_body(parallel, TETRA)
    twisted = LineD(P(1, 1, 1, 1, 0), P(0, 0, 0, -1, 1))
    assert not meets_embedded_body(twisted, TETRA)


def test_meets_embedded_rejects_inflated_body():
    fat = ConvexBody(TETRA.vertices, Rat(1, 2))
    line = embed_line(Line3(V(1, 1, 1), V(1, 0, 0)), 4)
    with pytest.raises(ValueError):
        meets_embedded_body(line, fat)


def test_projection_property_is_one_way():
    # hovering above S: the line misses the embedded body, its shadow hits
    hover = LineD(P(1, 1, 1, 1, 0), P(1, 0, 0, 0, 0))
    report = verify_projection_property(hover, TETRA)
    assert not report.meets_embedded
    assert report.projection_meets
    assert report.holds
    hit = LineD(P(1, 1, 1, 1), P(0, 0, 0, -1))
    report = verify_projection_property(hit, TETRA)
    assert report.meets_embedded and report.projection_meets and report.holds


def test_projection_property_degenerate_projection():
    vertical_in = LineD(P(1, 1, 1, 0), P(0, 0, 0, 1))
    report = verify_projection_property(vertical_in, TETRA)
    assert report.meets_embedded and report.projection_meets
    vertical_out = LineD(P(9, 9, 9, 1), P(0, 0, 0, 1))
    report = verify_projection_property(vertical_out, TETRA)
    assert not report.meets_embedded and not report.projection_meets
    assert report.holds


@pytest.mark.parametrize("d", [4, 5, 6])
@pytest.mark.parametrize("body", [TETRA, SEGMENT], ids=["tetra", "segment"])
def test_sampled_lines_all_satisfy_property(d, body):
    lines = sample_hitting_lines(body, d, 25, seed=d)
    assert len(lines) == 25
    degenerate = 0
    for line in lines:
        assert line.dim == d
        report = verify_projection_property(line, body)
        assert report.meets_embedded and report.holds
        if isinstance(project_line_to_S(line), Vec3):
            degenerate += 1
    assert degenerate >= 5  # every fifth sampled direction is orthogonal to S


def test_sample_hitting_lines_deterministic():
    a = sample_hitting_lines(TETRA, 5, 10, seed=3)
    b = sample_hitting_lines(TETRA, 5, 10, seed=3)
    c = sample_hitting_lines(TETRA, 5, 10, seed=4)
    assert a == b and a != c
