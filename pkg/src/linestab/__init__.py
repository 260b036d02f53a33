"""Exact rational constructions for stabbing convex sets with lines.

The package builds convex witnesses that meet prescribed families of
pairwise skew lines while avoiding others, plays the adversarial stab-or-
avoid game on a doubly ruled surface, and verifies the three-cube
configuration in which nine lines force one of thirteen candidate stabbers.
All arithmetic is exact (rationals end to end, squared distances instead of
norms); randomness is deterministic and seeded.
"""

from .scalar import Rat, rat, parse_rational, format_rational
from .rng import Rng
from .geometry import (
    ConvexBody,
    ConvexPolygon3,
    Line3,
    Plane3,
    Vec3,
    line_body_dist_sq,
    line_line_dist_sq,
    line_meets_body,
    line_meets_interior,
    pairwise_skew,
    point_in_hull,
)
from .rays import (
    ConvexRegion2,
    Halfplane,
    Line2,
    Ray2,
    RayTriple,
    Vec2,
    find_transversal,
    half_strip,
    interior_margin,
    is_separated_triple,
    joint_region,
    spanned_triangle,
    triangle_contains,
)
from .ruling import (
    RulingFamily,
    build_witness,
    choose_beta_star,
    classify_vs_sigma,
    ell_line,
    lambda_line,
    verify_witness,
    witness_plan,
)
from .game import GameParams, HardeningFailed, harden, inflate, minimal_n, miss_margin, refute
from .cube import (
    DIAG_CLAIM_EPS,
    assemble_three_cubes,
    blue_lines,
    check_joint_region_case,
    incidence_table,
    main_diagonals,
    rays_for_diagonal,
    sample_perturbation,
    triangle_T,
    verify_diag_claim,
    verify_nine_thirteen,
)
from .higherdim import (
    LineD,
    PointD,
    embed_line,
    embed_point,
    meets_embedded_body,
    project_line_to_S,
    verify_projection_property,
)

__version__ = "0.1.0"
