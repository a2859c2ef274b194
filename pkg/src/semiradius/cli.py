"""Command-line surface: gauges, certifications, block checks, fuzzing.

Exit codes, uniform across subcommands:

    0   computed / relation holds / no violations
    1   relation fails or a campaign found violations
    2   input error (bad JSON, bad schema, bad flags)
    3   mathematical precondition failure (operator outside its class)

``SEMIRADIUS_TOL`` overrides the default relative decision tolerance
wherever a ``--tol`` flag is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import blockmat, certify, genfuzz, schema
from .errors import INPUT_ERRORS, PRECONDITION_ERRORS, SchemaError
from .gauges import (
    SweepConfig,
    a_crawford,
    a_numerical_radius,
    a_opnorm,
    a_spectral_radius,
)
from .rankone import make_rank_one, rank_one_norm, rank_one_radius
from .semiop import wrap

ENV_TOL = "SEMIRADIUS_TOL"


def _default_tol(flag_value: float | None, fallback: float) -> float:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(ENV_TOL)
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise SchemaError(f"{ENV_TOL} must be a float, got {env!r}") from exc
    return fallback


def _operator(inst: schema.Instance, mat: np.ndarray | None, name: str):
    if mat is None:
        raise SchemaError(f'instance file is missing "{name}"')
    return wrap(mat, inst.weight)


def cmd_radius(args) -> int:
    inst = schema.load_instance(args.file)
    op = _operator(inst, inst.t, "T")
    cfg = SweepConfig(grid=args.grid, refine_tol=_default_tol(args.tol, 1e-7))
    omega, profile = a_numerical_radius(op, cfg)
    gauges = {
        "omega": omega,
        "crawford": profile.crawford,
        "opnorm": a_opnorm(op),
        "spectral_radius": a_spectral_radius(op),
        "error_bound": profile.sweep_meta["error_bound"],
    }
    for key, val in gauges.items():
        print(f"{key} = {val:.12g}")
    if args.profile:
        Path(args.profile).write_text(
            json.dumps(schema.profile_to_jsonable(profile), indent=2) + "\n"
        )
    if args.csv:
        Path(args.csv).write_text(schema.profile_to_csv(profile))
    figure = args.figure
    if figure is None and args.csv:
        figure = str(Path(args.csv).with_suffix(".svg"))
    if figure:
        from .plotting import render_profile

        render_profile(profile, figure, title=f"numerical range (omega={omega:.6g})")
    return 0


def cmd_rankone(args) -> int:
    inst = schema.load_instance(args.file)
    if inst.x is None or inst.y is None:
        raise SchemaError('rankone requires "x" and "y"')
    op = make_rank_one(inst.weight.vector(inst.x), inst.weight.vector(inst.y))
    norm_closed = rank_one_norm(op)
    radius_closed = rank_one_radius(op)
    norm_sweep = a_opnorm(op.op)
    radius_sweep, _ = a_numerical_radius(op.op)
    tol = _default_tol(args.tol, 1e-8) * max(norm_closed, 1.0)
    out = {
        "norm_closed": norm_closed,
        "norm_sweep": norm_sweep,
        "radius_closed": radius_closed,
        "radius_sweep": radius_sweep,
        "agreement": bool(
            abs(norm_closed - norm_sweep) <= tol
            and abs(radius_closed - radius_sweep) <= tol
        ),
    }
    print(json.dumps(out, indent=2))
    return 0 if out["agreement"] else 1


def _certify_cfg(args) -> certify.CertifyConfig:
    return certify.CertifyConfig(decision_tol=_default_tol(args.tol, 1e-7))


def cmd_ortho(args) -> int:
    inst = schema.load_instance(args.file)
    t = _operator(inst, inst.t, "T")
    s = _operator(inst, inst.s, "S")
    fn = certify.bj_orthogonal if args.relation == "bj" else certify.wa_orthogonal
    verdict = fn(t, s, _certify_cfg(args))
    print(json.dumps(schema.verdict_to_jsonable(verdict), indent=2))
    return 0 if verdict.holds else 1


def cmd_parallel(args) -> int:
    inst = schema.load_instance(args.file)
    if inst.t is not None and inst.s is not None:
        t = _operator(inst, inst.t, "T")
        s = _operator(inst, inst.s, "S")
        fn = certify.norm_parallel if args.relation == "norm" else certify.wa_parallel
        verdict = fn(t, s, _certify_cfg(args))
    elif inst.x is not None and inst.y is not None:
        verdict = certify.vec_parallel(
            inst.weight.vector(inst.x),
            inst.weight.vector(inst.y),
            tol=_default_tol(args.tol, 1e-7),
        )
    else:
        raise SchemaError('parallel requires either "T" and "S" or "x" and "y"')
    print(json.dumps(schema.verdict_to_jsonable(verdict), indent=2))
    return 0 if verdict.holds else 1


def cmd_block(args) -> int:
    inst = schema.load_instance(args.file)
    if inst.blocks is None:
        raise SchemaError('block requires "blocks"')
    w = inst.weight
    b = blockmat.build_block(inst.blocks, w)
    tol = _default_tol(args.tol, blockmat.DEFAULT_SLACK_TOL)
    if args.check == "sandwich":
        if b.d != 2:
            raise SchemaError("sandwich requires d = 2 blocks")
        rep = blockmat.check_sandwich(
            wrap(inst.blocks[0][1], w), wrap(inst.blocks[1][0], w), tol=tol
        )
    elif args.check == "pinch":
        rep = blockmat.check_pinch(b, tol=tol)
    elif args.check == "crawford":
        rep = blockmat.check_crawford_bound(b, tol=tol)
    elif args.check == "triangular":
        rep = blockmat.check_triangular(b, tol=tol)
    elif args.check == "phase":
        rep = blockmat.check_phase_invariance(b, tol=tol)
    else:
        rep = blockmat.check_block_adjoint(b)
    print(json.dumps(rep.to_jsonable(), indent=2))
    return 0 if rep.passed else 1


def cmd_fuzz(args) -> int:
    checks = args.checks.split(",") if args.checks else None
    cfg = genfuzz.GenConfig(
        seed=args.seed, n=args.dim, rank=args.rank, trials=args.trials
    )
    report = genfuzz.run_campaign(cfg, checks=checks, workers=args.workers)
    doc = report.to_jsonable(include_runtime=True)
    print(json.dumps(doc, indent=2))
    if args.report:
        Path(args.report).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 1 if report.failing else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiradius",
        description="Weighted numerical radius gauges, orthogonality and "
        "parallelism certification, block-matrix inequality checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="gauges of T relative to the weight A")
    p.add_argument("file", help="instance JSON with n, A, T")
    p.add_argument("--grid", type=int, default=720, help="sweep grid size")
    p.add_argument("--tol", type=float, default=None, help="sweep refinement tolerance")
    p.add_argument("--profile", help="write the range profile JSON here")
    p.add_argument("--csv", help="write support/boundary samples CSV here")
    p.add_argument("--figure", help="render the range figure here (svg/png/pdf)")
    p.set_defaults(fn=cmd_radius)

    p = sub.add_parser("rankone", help="closed-form vs sweep gauges of x (x) y")
    p.add_argument("file", help="instance JSON with n, A, x, y")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=cmd_rankone)

    p = sub.add_parser("ortho", help="orthogonality verdict for T against S")
    p.add_argument("file", help="instance JSON with n, A, T, S")
    p.add_argument("--relation", choices=["bj", "wa"], required=True)
    p.add_argument("--tol", type=float, default=None, help="relative decision tolerance")
    p.set_defaults(fn=cmd_ortho)

    p = sub.add_parser("parallel", help="parallelism verdict (operators or vectors)")
    p.add_argument("file", help="instance JSON with n, A and T,S or x,y")
    p.add_argument("--relation", choices=["norm", "wa"], default="norm")
    p.add_argument("--tol", type=float, default=None, help="relative decision tolerance")
    p.set_defaults(fn=cmd_parallel)

    p = sub.add_parser("block", help="inflated-radius inequality checks")
    p.add_argument("file", help="instance JSON with n, A, blocks")
    p.add_argument(
        "--check",
        choices=["sandwich", "pinch", "crawford", "triangular", "phase", "adjoint"],
        required=True,
    )
    p.add_argument("--tol", type=float, default=None, help="relative slack tolerance")
    p.set_defaults(fn=cmd_block)

    p = sub.add_parser("fuzz", help="deterministic theorem battery")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--checks", default=None, help="comma-separated check names")
    p.add_argument("--report", default=None, help="write the campaign report here")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_fuzz)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except PRECONDITION_ERRORS as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        code = 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
