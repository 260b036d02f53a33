"""Command-line verification harness.

Every subcommand prints one JSON report to standard output and reserves
standard error for diagnostics.  Reports are deterministic given identical
arguments (the wall_time_ms field is the one exception and is understood to
be excluded from byte comparisons).  Exit codes: 0 all checks passed, 1 a
check failed (the report carries the failing certificate), 2 malformed
input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import cube, game, higherdim, ruling
from .geometry import Line3, Vec3
from .jsonio import (
    ParseError,
    body_from_json,
    body_to_json,
    line2_to_json,
    line3_from_json,
    line3_to_json,
    lined_from_json,
    polygon_to_json,
    ray2_to_json,
    region_to_json,
    scalar_from_json,
    scalar_to_json,
    triple_from_json,
    vec2_to_json,
    vec3_to_json,
)
from .rays import find_transversal, joint_region, is_separated_triple
from .ruling import RulingFamily, lambda_line
from .scalar import Rat, ceil_rat, parse_rational, rat

__all__ = ["main"]


class CheckFailure(RuntimeError):
    """A verification check failed; carries the report to publish."""

    def __init__(self, report: dict):
        super().__init__("check failed")
        self.report = report


def _parse_scalar_arg(text: str, what: str) -> Rat:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from exc


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _check(name: str, ok: bool, **extra) -> dict:
    entry = {"name": name, "pass": bool(ok)}
    entry.update(extra)
    return entry


# ---------------------------------------------------------------------------
# Subcommand handlers.  Each returns a report dict; raising CheckFailure
# publishes the attached report with exit code 1.


def _cmd_ruling_witness(args) -> dict:
    data = _load_json(args.input)
    if not isinstance(data, dict):
        raise ParseError("input must be an object with A, B, R")
    a_values = [scalar_from_json(x) for x in data.get("A", [])]
    b_indices = data.get("B", [])
    if not isinstance(b_indices, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in b_indices
    ):
        raise ParseError("B must be a list of integer indices into A")
    try:
        b_alphas = [a_values[i] for i in b_indices]
    except IndexError as exc:
        raise ParseError(f"B index out of range: {exc}") from exc
    r_lines = [line3_from_json(x) for x in data.get("R", [])]
    fam = ruling.RulingFamily(tuple(a_values))
    plan = ruling.witness_plan(fam, b_alphas, r_lines)
    poly = ruling.build_witness(plan)
    report = ruling.verify_witness(poly, [lambda_line(a) for a in plan.alphas], r_lines)
    out = {
        "plan": {
            "beta_star": scalar_to_json(plan.beta_star),
            "s": scalar_to_json(plan.s),
            "delta_sq": None if plan.delta_sq is None else scalar_to_json(plan.delta_sq),
            "alphas": [scalar_to_json(a) for a in plan.alphas],
            "avoid_on_surface": len(plan.r_sigma),
            "avoid_off_surface": len(plan.r_prime),
        },
        "witness": polygon_to_json(poly),
        "report": {
            "stabbed": list(report.stabbed),
            "missed": list(report.missed),
            "violations": [list(v) for v in report.violations],
        },
        "checks": [_check("witness-verified", not report.violations)],
    }
    if report.violations:
        raise CheckFailure(out)
    return out


def _cmd_net_refute(args) -> dict:
    epsilon = _parse_scalar_arg(args.epsilon, "--epsilon")
    n = args.n if args.n is not None else game.minimal_n(epsilon, args.k)
    params = game.GameParams(epsilon, args.k, n)
    data = _load_json(args.adversary)
    if isinstance(data, dict):
        data = data.get("lines", [])
    if not isinstance(data, list):
        raise ParseError("adversary file must hold a list of lines")
    adversary = [line3_from_json(x) for x in data]
    fam = RulingFamily(tuple(rat(i) for i in range(1, n + 1)))
    witness = game.refute(fam, params, adversary)
    threshold = ceil_rat(params.epsilon * params.n)
    out = {
        "parameters": {
            "epsilon": scalar_to_json(params.epsilon),
            "k": params.k,
            "n": params.n,
        },
        "stabbed": len(witness.stabbed),
        "stabbed_indices": list(witness.stabbed),
        "threshold": threshold,
        "witness": body_to_json(witness.body),
        "checks": [
            _check("stab-count", len(witness.stabbed) >= threshold),
            _check("no-adversary-hit", not witness.report.violations),
        ],
    }
    if args.harden is not None:
        delta_raw, jitter_raw = args.harden
        delta = _parse_scalar_arg(delta_raw, "--harden delta")
        jitter = _parse_scalar_arg(jitter_raw, "--harden jitter")
        try:
            hardened = game.harden(
                fam, [witness.body], [adversary], delta, jitter, seed=args.seed
            )
            out["harden"] = {
                "stab_pairs": [list(p) for p in hardened.stab_pairs],
                "lines": [line3_to_json(l) for l in hardened.lines],
            }
            out["checks"].append(_check("harden", True))
        except game.HardeningFailed as exc:
            out["harden"] = {"failed_check": exc.check, "detail": list(exc.detail)}
            out["checks"].append(_check("harden", False, failed=exc.check))
            raise CheckFailure(out)
    return out


def _cmd_cube_verify(args) -> dict:
    eps = _parse_scalar_arg(args.eps, "--eps")
    report = cube.verify_diag_claim(eps, args.trials, args.seed)
    out = {
        "parameters": {"eps": scalar_to_json(eps), "trials": args.trials, "seed": args.seed},
        "failures": [
            {"trial": t, "params": [scalar_to_json(x) for x in xs]} for t, xs in report.failures
        ],
        "worst_margin_sq": None
        if report.worst_margin_sq is None
        else scalar_to_json(report.worst_margin_sq),
        "checks": [_check("diag-claim", not report.failures, failures=len(report.failures))],
    }
    if report.failures:
        raise CheckFailure(out)
    return out


def _cmd_cube_assemble(args) -> dict:
    eps = _parse_scalar_arg(args.eps, "--eps")
    separation = _parse_scalar_arg(args.separation, "--separation")
    cfg = cube.assemble_three_cubes(separation=separation, eps=eps, seed=args.seed)
    out = {
        "parameters": {
            "separation": scalar_to_json(separation),
            "eps": scalar_to_json(eps),
            "seed": args.seed,
        },
        "centers": [vec3_to_json(c.placement.translation) for c in cfg.cubes],
        "blue": [line3_to_json(l) for l in cfg.blue],
        "red": [line3_to_json(l) for l in cfg.red],
        "red_names": [cfg.red_name(i) for i in range(13)],
        "certs": [
            {
                "u": vec3_to_json(c.u),
                "anchor": vec3_to_json(c.anchor),
                "dir": vec3_to_json(c.dir),
                "eps": scalar_to_json(c.eps),
            }
            for cube_cfg in cfg.cubes
            for c in cube_cfg.certs
        ],
        "checks": [_check("assembly", True)],
    }
    if args.nine_trials:
        nine = cube.verify_nine_thirteen(cfg, args.nine_trials, args.seed)
        out["nine_thirteen"] = {
            "trials": nine.trials,
            "failures": [list(f) for f in nine.failures],
            "certificates": list(nine.certificates),
        }
        out["checks"].append(
            _check("nine-thirteen", not nine.failures, failures=len(nine.failures))
        )
        if nine.failures:
            raise CheckFailure(out)
    return out


def _cmd_rays_joint_region(args) -> dict:
    if (args.case is None) == (args.input is None):
        raise ParseError("give exactly one of --case or --input")
    if args.case is not None:
        report = cube.check_joint_region_case(args.case)
        ok = all(report.separated) and all(m > 0 for m in report.margins)
        out = {
            "parameters": {"case": args.case},
            "separated": list(report.separated),
            "origin_margins_sq": [scalar_to_json(m) for m in report.margins],
            "interior_points": [
                None if p is None else vec2_to_json(p) for p in report.interior_points
            ],
            "checks": [_check("joint-region-case", ok)],
        }
        if not ok:
            raise CheckFailure(out)
        return out
    triple = triple_from_json(_load_json(args.input))
    separated = is_separated_triple(triple)
    out = {
        "parameters": {"input": args.input},
        "rays": [ray2_to_json(r) for r in triple.rays],
        "separated": separated,
        "checks": [],
    }
    transversal = find_transversal(triple)
    out["transversal"] = None if transversal is None else line2_to_json(transversal)
    if separated:
        region = joint_region(triple)
        out["joint_region"] = region_to_json(region)
        sample = region.sample_point()
        out["sample_point"] = None if sample is None else vec2_to_json(sample)
        out["has_interior"] = region.has_interior()
    return out


def _cmd_project_d(args) -> dict:
    data = _load_json(args.input)
    if not isinstance(data, dict):
        raise ParseError("input must be an object with body and line(s)")
    body = body_from_json(_field_required(data, "body"))
    raw_lines = data.get("lines")
    if raw_lines is None:
        raw_lines = [_field_required(data, "line")]
    if not isinstance(raw_lines, list):
        raise ParseError("lines must be a list")
    lines = [lined_from_json(x, d=args.d) for x in raw_lines]
    results = []
    all_hold = True
    for idx, line in enumerate(lines):
        rep = higherdim.verify_projection_property(line, body)
        proj = higherdim.project_line_to_S(line)
        results.append(
            {
                "line": idx,
                "meets_embedded": rep.meets_embedded,
                "projection_meets": rep.projection_meets,
                "holds": rep.holds,
                "projection": vec3_to_json(proj)
                if isinstance(proj, Vec3)
                else line3_to_json(proj),
            }
        )
        all_hold = all_hold and rep.holds
    out = {
        "parameters": {"d": args.d, "input": args.input},
        "results": results,
        "checks": [_check("projection-implication", all_hold)],
    }
    if not all_hold:
        raise CheckFailure(out)
    return out


def _field_required(data: dict, key: str):
    if key not in data:
        raise ParseError(f"missing field {key!r}")
    return data[key]


def _selftest_fixtures() -> list:
    checks = []

    expected_incidence = (
        (False, False, False),
        (True, True, False),
        (True, False, True),
        (False, True, True),
    )
    checks.append(_check("incidence-table", cube.incidence_table() == expected_incidence))

    table = {(Rat(1, 2), 3): 7, (Rat(3, 4), 1): 5, (Rat(1, 2), 1): 3}
    ok = all(game.minimal_n(e, k) == want for (e, k), want in table.items())
    checks.append(_check("minimal-n-table", ok))

    fam = RulingFamily((rat(1), rat(2)))
    x_axis = Line3(Vec3.of(0, 0, 0), Vec3.of(1, 0, 0))
    plan = ruling.witness_plan(fam, [rat(1), rat(2)], [x_axis])
    poly = ruling.build_witness(plan)
    want = (Vec3.of(1, Rat(4, 3), Rat(4, 3)), Vec3.of(2, Rat(7, 6), Rat(7, 3)))
    checks.append(_check("two-line-witness-segment", poly.vertices == want))

    for case in (1, 2, 3, 4):
        rep = cube.check_joint_region_case(case)
        ok = all(rep.separated) and all(m > 0 for m in rep.margins)
        checks.append(_check(f"joint-region-case-{case}", ok))

    return checks


def _cmd_selftest(args) -> dict:
    checks = _selftest_fixtures()
    out = {"parameters": {}, "checks": checks}
    if not all(c["pass"] for c in checks):
        raise CheckFailure(out)
    return out


# ---------------------------------------------------------------------------
# Parser and entry point.


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linestab",
        description="Exact verification runs for line-stabbing constructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ruling-witness", help="build and audit one witness polygon")
    p.add_argument("--input", required=True, help="JSON file with A, B (indices), R (lines)")
    p.set_defaults(func=_cmd_ruling_witness)

    p = sub.add_parser("net-refute", help="refute one adversary play of the stabbing game")
    p.add_argument("--epsilon", required=True, help="fraction to stab, e.g. 1/2")
    p.add_argument("--k", type=int, required=True, help="adversary budget")
    p.add_argument("--n", type=int, default=None, help="family size (default: minimal)")
    p.add_argument("--adversary", required=True, help="JSON file with the adversary lines")
    p.add_argument(
        "--harden",
        nargs=2,
        metavar=("DELTA", "JITTER"),
        default=None,
        help="inflate by DELTA and jitter lines by JITTER, then re-verify",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_net_refute)

    p = sub.add_parser("cube-verify", help="sample the perturbed-diagonal claim")
    p.add_argument("--eps", default=str(cube.DIAG_CLAIM_EPS), help="perturbation radius")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_cube_verify)

    p = sub.add_parser("cube-assemble", help="place three cubes and emit the 9+13 line config")
    p.add_argument("--separation", default="300", help="center spacing (rational, >= 100)")
    p.add_argument("--eps", default=str(cube.DIAG_CLAIM_EPS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--nine-trials",
        type=int,
        default=0,
        help="also sample this many 9-point hulls and certify each",
    )
    p.set_defaults(func=_cmd_cube_assemble)

    p = sub.add_parser("rays-joint-region", help="joint region of a separated ray triple")
    p.add_argument("--case", type=int, choices=(1, 2, 3, 4), default=None)
    p.add_argument("--input", default=None, help="JSON file with {rays: [three rays]}")
    p.set_defaults(func=_cmd_rays_joint_region)

    p = sub.add_parser("project-d", help="projection implication for lines in R^d")
    p.add_argument("--d", type=int, required=True, help="ambient dimension (>= 3)")
    p.add_argument("--input", required=True, help="JSON file with body and line(s)")
    p.set_defaults(func=_cmd_project_d)

    p = sub.add_parser("selftest", help="run the fixed exact fixtures")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 on --help; keep its convention.
        return int(exc.code or 0)
    started = time.monotonic()
    try:
        report = args.func(args)
        code = 0
    except CheckFailure as exc:
        report = exc.report
        code = 1
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    report = {"command": args.command, **report}
    report["wall_time_ms"] = str(int((time.monotonic() - started) * 1000))
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
