"""The finite refutation game for proposed stabbing sets.

Fix 0 < epsilon < 1 and a proposed transversal budget k.  Whenever
n(1 - epsilon) > k, any k lines the adversary offers against a first-ruling
family of n lines leave at least n - k > epsilon*n family members unstabbed,
and a single convex witness polygon meets all of the leftovers while avoiding
every adversary line.  `refute` builds that witness and verifies it exactly;
`harden` then inflates the witnesses and perturbs the family into general
position while re-verifying everything, which upgrades vertex contacts to
interior crossings without letting the adversary back in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import (
    ConvexBody,
    Line3,
    find_non_skew_pair,
    line_body_dist_sq,
    line_meets_body,
    line_meets_interior,
    perturb_line,
)
from .ruling import RulingFamily, WitnessReport, build_witness, lambda_line, verify_witness, witness_plan
from .rng import Rng
from .scalar import Rat, ceil_rat, floor_rat, rat

__all__ = [
    "GameParams",
    "RefutationWitness",
    "HardenedConfig",
    "BadEpsilon",
    "TooManyAdversaryLines",
    "NonpositiveRadius",
    "EmptyFamily",
    "HardeningFailed",
    "minimal_n",
    "refute",
    "inflate",
    "miss_margin",
    "harden",
]


class BadEpsilon(ValueError):
    pass


class TooManyAdversaryLines(ValueError):
    pass


class NonpositiveRadius(ValueError):
    pass


class EmptyFamily(ValueError):
    pass


class HardeningFailed(RuntimeError):
    def __init__(self, check: str, detail):
        super().__init__(f"hardening check failed: {check} ({detail})")
        self.check = check
        self.detail = detail


@dataclass(frozen=True)
class GameParams:
    epsilon: Rat
    k: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "epsilon", rat(self.epsilon))
        if not (0 < self.epsilon < 1):
            raise BadEpsilon("epsilon must lie strictly between 0 and 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.n * (1 - self.epsilon) <= self.k:
            raise ValueError("need n(1 - epsilon) > k")


def minimal_n(epsilon, k: int) -> int:
    """Smallest n with n(1 - epsilon) > k."""
    epsilon = rat(epsilon)
    if not (0 < epsilon < 1):
        raise BadEpsilon("epsilon must lie strictly between 0 and 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    return floor_rat(rat(k) / (1 - epsilon)) + 1


@dataclass(frozen=True)
class RefutationWitness:
    body: ConvexBody
    stabbed: tuple  # indices into the family
    adversary: tuple
    report: WitnessReport
    plan: object


def refute(fam: RulingFamily, params: GameParams, adversary: Sequence[Line3]) -> RefutationWitness:
    """Build and verify a witness against one adversary play."""
    if len(fam) != params.n:
        raise ValueError("family size does not match the game parameters")
    adversary = tuple(adversary)
    if len(adversary) > params.k:
        raise TooManyAdversaryLines(f"{len(adversary)} > k = {params.k}")
    adv_set = set(adversary)
    leftovers = [
        (i, a) for i, a in enumerate(fam.alphas) if lambda_line(a) not in adv_set
    ]
    stab_alphas = [a for _, a in leftovers]
    plan = witness_plan(fam, stab_alphas, adversary)
    poly = build_witness(plan)
    report = verify_witness(poly, [lambda_line(a) for a in stab_alphas], adversary)
    threshold = ceil_rat(params.epsilon * params.n)
    if len(leftovers) < threshold or report.violations:
        # Mathematically unreachable; kept as a hard audit.
        raise RuntimeError("refutation failed verification")
    return RefutationWitness(
        body=ConvexBody(poly.vertices, Rat(0)),
        stabbed=tuple(i for i, _ in leftovers),
        adversary=adversary,
        report=report,
        plan=plan,
    )


def inflate(body: ConvexBody, delta_prime) -> ConvexBody:
    delta_prime = rat(delta_prime)
    if delta_prime <= 0:
        raise NonpositiveRadius("inflation step must be positive")
    return ConvexBody(body.vertices, body.inflation + delta_prime)


def miss_margin(bodies: Sequence[ConvexBody], adversary: Sequence[Line3]) -> Optional[Rat]:
    """max over bodies of min over adversary lines of squared distance to the
    hull; None when the adversary set is empty (nothing constrains it)."""
    if not bodies:
        raise EmptyFamily("no bodies")
    if not adversary:
        return None
    return max(min(line_body_dist_sq(r, body) for r in adversary) for body in bodies)


@dataclass(frozen=True)
class HardenedConfig:
    bodies: tuple
    lines: tuple
    stab_pairs: tuple  # (line index, body index) that met before hardening


def harden(
    fam: RulingFamily,
    bodies: Sequence[ConvexBody],
    adversaries: Sequence[Sequence[Line3]],
    delta_prime,
    jitter_bound,
    jitters: Optional[Sequence[Sequence]] = None,
    seed: int = 0,
) -> HardenedConfig:
    """Inflate every witness by delta_prime and jitter every family line by at
    most jitter_bound per coordinate, then re-verify:

    1. every line that met a witness now passes through the inflated interior,
    2. every adversary line still misses its own inflated witness,
    3. the perturbed family is pairwise skew.

    Raises HardeningFailed naming the first check that breaks and the pair
    that breaks it.  Jitters may be supplied (six rationals per line); by
    default they are drawn deterministically from `seed` at the full bound.
    """
    if len(bodies) != len(adversaries):
        raise ValueError("each witness needs its own adversary list")
    delta_prime = rat(delta_prime)
    jitter_bound = rat(jitter_bound)
    lines = fam.lines()
    stab_pairs = [
        (i, j)
        for i, line in enumerate(lines)
        for j, body in enumerate(bodies)
        if line_meets_body(line, body)
    ]
    inflated = [inflate(body, delta_prime) for body in bodies]
    if jitters is None:
        rng = Rng(seed)
        jitters = [[rng.jitter(jitter_bound) for _ in range(6)] for _ in lines]
    perturbed = [perturb_line(line, jit, jitter_bound) for line, jit in zip(lines, jitters)]
    for i, j in stab_pairs:
        if not line_meets_interior(perturbed[i], inflated[j]):
            raise HardeningFailed("stab-not-interior", (i, j))
    for j, adv in enumerate(adversaries):
        for a_idx, r in enumerate(adv):
            if line_meets_body(r, inflated[j]):
                raise HardeningFailed("adversary-now-hits", (a_idx, j))
    bad = find_non_skew_pair(perturbed)
    if bad is not None:
        raise HardeningFailed("pairwise-skew", bad)
    return HardenedConfig(tuple(inflated), tuple(perturbed), tuple(stab_pairs))
