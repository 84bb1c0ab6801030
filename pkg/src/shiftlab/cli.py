"""``shiftlab`` command-line front end.

Every command writes a JSON document (to ``--out`` or stdout). Exit codes:
0 success, 1 a property check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import formats
from .criteria import (
    DEFAULT_WINDOW,
    chain_recurrence_trivial,
    default_grid,
    gh_check,
    periodic_point_exists,
    psp_condition_ii_falsify,
    psp_lp_sandwich,
    psp_search,
    shadowing_criterion,
    ute_classify,
)
from .repro import CASES, GENHYP_SPEC, TRIVCR_SPEC
from .solver import finite_shadow_solve, parse_mode
from .trajectories import (
    ConstructionError,
    Pseudotrajectory,
    gen_genhyp,
    gen_ramp,
    gen_sdelta_bridge,
    renormalized_pullback_orbit,
    validate,
)
from .weights import rates

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2

# spec used to validate spec-free constructions when --spec is absent
DEFAULT_SPECS = {"genhyp": GENHYP_SPEC, "ramp": TRIVCR_SPEC}


class InputError(Exception):
    pass


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError("window needs LO <= HI")
    return lo, hi


def parse_triple(text: str) -> tuple[int, int, int]:
    try:
        k, l, m = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"triple must look like K,L,M, got {text!r}") from None
    return k, l, m


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.command} {getattr(args, 'construction', '')}".strip() + ": missing "
                         + ", ".join("--" + n.replace("_", "-") for n in missing))


def _load_spec(args):
    _need(args, "spec")
    return formats.spec_from_text(formats.read_text(args.spec))


def _property(name: str, verdict, window) -> dict:
    doc = verdict.to_dict()
    return {"property": name, **doc, "window": list(window) if window else None}


def cmd_analyze(args) -> tuple[dict, int]:
    spec = _load_spec(args)
    window = args.window or DEFAULT_WINDOW
    eps = 1.0 if args.eps is None else args.eps
    grid = default_grid(eps, args.grid)
    space = formats.parse_space(args.space)
    props = [
        _property("periodic_points", periodic_point_exists(spec), None),
        _property("generalized_hyperbolicity", gh_check(spec, spec.core_start - 1), None),
        _property("shadowing", shadowing_criterion(spec), None),
        _property("chain_recurrence_trivial", chain_recurrence_trivial(spec), None),
        _property("psp", psp_search(spec, eps, window, grid)[1], window),
        _property("ute", ute_classify(spec, space, window), window),
    ]
    delta = grid[0] if args.delta is None else args.delta
    ys = psp_condition_ii_falsify(spec, eps, delta, window, space)
    cond = {"property": "psp_condition_ii", "window": list(window)}
    if ys is None:
        cond.update(status="unknown", reason="window-limited", evidence={"eps": eps, "delta": delta})
    else:
        cond.update(status="fails", reason="partial-sum-escape",
                    evidence={"eps": eps, "delta": delta, "defects": [y.to_list() for y in ys]})
    props.append(cond)
    if space.kind == "lp":
        props.append(_property("psp_lp_sandwich", psp_lp_sandwich(spec), None))
    payload = {
        "command": "analyze",
        "config": {"spec": spec.to_dict(), "window": list(window), "eps": eps, "grid": grid, "space": space.label()},
        "rates": rates(spec).to_dict(),
        "properties": props,
    }
    return payload, EXIT_OK


def _build_trajectory(args) -> Pseudotrajectory:
    name = args.construction
    space = formats.parse_space(args.space)
    if name == "genhyp":
        _need(args, "eps", "m", "length")
        return gen_genhyp(args.eps, args.m, args.length)
    if name == "ramp":
        _need(args, "delta", "n")
        return gen_ramp(args.delta, args.n, space)
    spec = _load_spec(args)
    if name == "sdelta-bridge":
        _need(args, "eps", "delta", "triple")
        return gen_sdelta_bridge(spec, args.eps, args.delta, *args.triple, space=space)
    # pullback: the reversed renormalized orbit is a chain with defects exactly delta
    _need(args, "y0", "delta")
    y0 = formats.vector_from_text(formats.read_text(args.y0))
    orbit = renormalized_pullback_orbit(spec, y0, args.delta, args.steps, space)
    if len(orbit) < 2:
        raise InputError("pullback orbit stopped immediately; ||y0|| must be at least delta")
    return Pseudotrajectory(tuple(reversed(orbit)), delta=args.delta, space=space)


def cmd_pseudo(args) -> tuple[dict, int]:
    traj = _build_trajectory(args)
    text = formats.trajectory_to_text(traj)
    summary = {"command": "pseudo", "construction": args.construction, "points": len(traj),
               "delta": traj.delta, "max_norm": traj.max_norm()}
    spec = _load_spec(args) if args.spec else DEFAULT_SPECS[args.construction]
    summary["max_defect"] = validate(traj, spec)[0]
    if args.traj_out:
        Path(args.traj_out).write_text(text)
        summary["trajectory_file"] = args.traj_out
        return summary, EXIT_OK
    summary["trajectory"] = formats.loads(text)
    return summary, EXIT_OK


def cmd_shadow(args) -> tuple[dict, int]:
    spec = _load_spec(args)
    _need(args, "traj", "eps")
    traj = formats.trajectory_from_text(formats.read_text(args.traj))
    space = formats.parse_space(args.space) if args.space != "c0" else traj.space
    result = finite_shadow_solve(spec, traj, args.eps, space=space, mode=parse_mode(args.mode))
    return {"command": "shadow", "eps": args.eps, "mode": args.mode, "result": result.to_dict()}, EXIT_OK


def cmd_repro(args) -> tuple[dict, int]:
    kwargs = {}
    if args.case == "trivcr":
        kwargs["window"] = args.window or DEFAULT_WINDOW
        kwargs["grid_count"] = args.grid
    checks = CASES[args.case](**kwargs)
    ok = all(c["passed"] for c in checks)
    failed = [c["check"] for c in checks if not c["passed"]]
    payload = {"command": "repro", "case": args.case, "passed": ok, "failed_checks": failed, "checks": checks}
    return payload, EXIT_OK if ok else EXIT_CHECK


def cmd_rates(args) -> tuple[dict, int]:
    spec = _load_spec(args)
    return {"command": "rates", "spec": spec.to_dict(), "rates": rates(spec).to_dict()}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftlab", description="Dynamics of bilateral weighted shifts.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="weight spec JSON file")
    common.add_argument("--window", type=parse_window, help="index window LO:HI (write --window=-64:64)")
    common.add_argument("--eps", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--grid", type=int, default=12, help="delta grid eps*2^-j for j = 1..J")
    common.add_argument("--space", default="c0", help="c0 or lp:P")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--envelope", action="store_true", help="wrap the report with a generation timestamp")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", parents=[common], help="decide dynamical properties of a weight spec")

    p = sub.add_parser("pseudo", parents=[common], help="generate a pseudotrajectory")
    p.add_argument("construction", choices=["genhyp", "ramp", "sdelta-bridge", "pullback"])
    p.add_argument("--m", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--triple", type=parse_triple)
    p.add_argument("--y0", help="starting vector JSON file (pullback)")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--traj-out", help="write the trajectory file here")

    p = sub.add_parser("shadow", parents=[common], help="solve a finite shadowing problem")
    p.add_argument("--traj", help="trajectory JSON file")
    p.add_argument("--mode", default="unrestricted", help="unrestricted or support:M")

    p = sub.add_parser("repro", parents=[common], help="reproduce a worked counterexample")
    p.add_argument("case", choices=sorted(CASES))

    sub.add_parser("rates", parents=[common], help="print the side rates of a weight spec")
    return parser


COMMANDS = {"analyze": cmd_analyze, "pseudo": cmd_pseudo, "shadow": cmd_shadow, "repro": cmd_repro, "rates": cmd_rates}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        payload, code = COMMANDS[args.command](args)
    except (InputError, formats.FormatError, ConstructionError, ValueError) as exc:
        print(f"shiftlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.envelope:
        payload = {"generated_at": datetime.now(timezone.utc).isoformat(), "report": payload}
    text = formats.dumps(payload)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
