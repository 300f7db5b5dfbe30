"""Command-line interface: range figures, steering, trajectories, checks.

Subcommands
-----------
``range``       boundary sweep of W(A) → boundary.csv + range.svg
``steer``       full steering plan for a unitary matrix → report.json
``trajectory``  tracked eigenvalue paths of U·V(t) → trajectory.csv
``verify``      seeded property suite of the perturbation rules
``example``     bundled demonstration instance with reference-value checks

Exit codes: 0 success, 2 parse/input error, 3 check failure,
4 nothing to steer, 5 tracking collision.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import demo, iofmt
from .linalg import RELAXED_UNITARITY_TOL, schatten_inf, unitary_eig
from .numrange import INSIDE, contains_zero_general, support_profile
from .perturb import PerturbationGenerator, TrackingCollisionError, perturbed_unitary, track_trajectory
from .steering import NothingToSteerError, perturbation_cost, plan
from .verify import run_all

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CHECK = 3
EXIT_NOTHING_TO_STEER = 4
EXIT_COLLISION = 5

__all__ = ["main", "build_parser"]


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid dims list {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"invalid dims list {text!r}")
    return dims


def _parse_probability(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid probability vector {text!r}") from exc


def _parse_direction(text: str) -> str:
    alias = {"cw": "cw", "clockwise": "cw", "ccw": "ccw", "counterclockwise": "ccw"}
    if text.lower() not in alias:
        raise argparse.ArgumentTypeError(f"direction must be cw or ccw, got {text!r}")
    return alias[text.lower()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nrsteer", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_opts(p):
        p.add_argument("--input", required=True, help="matrix JSON file")
        p.add_argument(
            "--polar-fix",
            action="store_true",
            help="re-orthonormalize the ingested matrix by polar correction",
        )

    def add_out_dir(p):
        p.add_argument("--out-dir", default=".", help="directory for output files")

    p_range = sub.add_parser("range", help="numerical-range boundary sweep and figure")
    add_input_opts(p_range)
    add_out_dir(p_range)
    p_range.add_argument("--angles", type=int, default=720, help="sweep resolution")
    p_range.set_defaults(func=_cmd_range)

    p_steer = sub.add_parser("steer", help="steer the range over the origin")
    add_input_opts(p_steer)
    add_out_dir(p_steer)
    p_steer.add_argument("--horizon", type=float, default=2 * math.pi, help="largest t searched")
    p_steer.add_argument("--tol-t", type=float, default=1e-3, help="bisection width for t*")
    p_steer.add_argument("--angles", type=int, default=2048, help="membership sweep resolution")
    p_steer.set_defaults(func=_cmd_steer)

    p_traj = sub.add_parser("trajectory", help="track eigenvalue paths of U·V(t)")
    add_input_opts(p_traj)
    add_out_dir(p_traj)
    p_traj.add_argument("--p", type=_parse_probability, required=True, help="weights, e.g. 0,1,0")
    p_traj.add_argument("--direction", type=_parse_direction, default="ccw")
    p_traj.add_argument("--horizon", type=float, default=1.5, help="tracking end time")
    p_traj.set_defaults(func=_cmd_trajectory)

    p_verify = sub.add_parser("verify", help="run the seeded property suite")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--dims", type=_parse_dims, default=(2, 3, 4, 5, 6))
    p_verify.set_defaults(func=_cmd_verify)

    p_example = sub.add_parser("example", help="bundled demonstration instance")
    add_out_dir(p_example)
    p_example.set_defaults(func=_cmd_example)

    return parser


def _load_matrix(args) -> tuple[np.ndarray, dict]:
    matrix, meta = iofmt.read_matrix(args.input)
    if getattr(args, "polar_fix", False):
        w, _, vh = np.linalg.svd(matrix)
        matrix = w @ vh
        meta = dict(meta, polar_fix=True)
    return matrix, meta


def _digest(matrix: np.ndarray) -> str:
    payload = ",".join(
        f"{iofmt.format_float(z.real)}:{iofmt.format_float(z.imag)}" for z in matrix.ravel()
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _write_report(path, report: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _ensure_out_dir(args) -> str:
    out = args.out_dir
    os.makedirs(out, exist_ok=True)
    return out


def _maybe_eigenvalues(matrix: np.ndarray) -> np.ndarray | None:
    try:
        return unitary_eig(matrix, unitarity_tol=RELAXED_UNITARITY_TOL).values
    except ValueError:
        return None


def _cmd_range(args) -> int:
    matrix, _ = _load_matrix(args)
    out = _ensure_out_dir(args)
    profile = support_profile(matrix, n_angles=args.angles)
    iofmt.write_range_csv(os.path.join(out, "boundary.csv"), profile)
    iofmt.render_range_svg(
        os.path.join(out, "range.svg"),
        profile,
        eigenvalues=_maybe_eigenvalues(matrix),
        title=f"numerical range ({os.path.basename(args.input)})",
    )
    verdict = contains_zero_general(matrix, n_angles=max(args.angles, 2048))
    print(f"origin verdict: {verdict}")
    print(f"wrote {out}/boundary.csv and {out}/range.svg")
    return EXIT_OK


def _cmd_steer(args) -> int:
    matrix, meta = _load_matrix(args)
    out = _ensure_out_dir(args)
    started = time.perf_counter()
    result = plan(matrix, t_horizon=args.horizon, tol_t=args.tol_t, n_angles=args.angles)
    elapsed = time.perf_counter() - started

    report = {
        "command": "steer",
        "input": {"path": args.input, "sha256": _digest(matrix), "dim": matrix.shape[0], **meta},
        "settings": {
            "horizon": args.horizon,
            "tol_t": args.tol_t,
            "angles": args.angles,
            "unitarity_tol": RELAXED_UNITARITY_TOL,
        },
        "plan": {
            "p": result.p,
            "direction": result.direction,
            "t_star": result.t_star,
            "perturbation_norm": result.perturbation_norm,
            "verdict": result.verdict,
            "target_gap": list(result.target_gap),
        },
    }
    _write_report(os.path.join(out, "report.json"), report)
    print(f"verdict: {result.verdict}")
    if result.t_star is not None:
        print(f"t* = {result.t_star:.6f}, perturbation norm = {result.perturbation_norm:.6f}")
    print(f"wrote {out}/report.json ({elapsed:.2f}s)")
    return EXIT_OK


def _cmd_trajectory(args) -> int:
    matrix, _ = _load_matrix(args)
    out = _ensure_out_dir(args)
    gen = PerturbationGenerator(p=args.p, direction=args.direction)
    record = track_trajectory(
        matrix, gen, t_end=args.horizon, unitarity_tol=RELAXED_UNITARITY_TOL
    )
    iofmt.write_trajectory_csv(os.path.join(out, "trajectory.csv"), record)
    print(f"tracked {record.paths.shape[0]} paths over {record.n_steps} steps")
    print(f"wrote {out}/trajectory.csv")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.trials == 0:
        print("warning: 0 trials requested; every property passes vacuously")
    outcomes = run_all(seed=args.seed, n_trials=args.trials, dims=args.dims)
    all_ok = True
    for outcome in outcomes:
        status = "PASS" if outcome.passed else "FAIL"
        all_ok &= outcome.passed
        residual = "n/a" if outcome.trials == 0 else f"{outcome.max_residual:.3e}"
        print(
            f"{status} {outcome.name}: trials={outcome.trials} "
            f"failures={outcome.failures} max_residual={residual}"
        )
        for detail in outcome.details[:5]:
            print(f"    {detail}")
    return EXIT_OK if all_ok else EXIT_CHECK


def _match_profile_rows(computed: np.ndarray, reference: np.ndarray, tol: float) -> bool:
    """Reference rows must each match a distinct computed row entrywise."""
    remaining = list(range(computed.shape[0]))
    for row in reference:
        hit = next(
            (i for i in remaining if np.abs(computed[i] - row).max() <= tol), None
        )
        if hit is None:
            return False
        remaining.remove(hit)
    return True


def _cmd_example(args) -> int:
    out = _ensure_out_dir(args)
    started = time.perf_counter()
    matrix = demo.DEMO_MATRIX

    system = unitary_eig(matrix, unitarity_tol=demo.DEMO_UNITARITY_TOL)
    profile_matrix = np.abs(system.vectors.T) ** 2

    checks: list[tuple[str, bool, str]] = []
    rows_ok = _match_profile_rows(
        profile_matrix, demo.REFERENCE_SPEED_PROFILE, demo.REFERENCE_PROFILE_TOL
    )
    named = (
        np.abs(profile_matrix - demo.REFERENCE_FAST_ENTRY).min() <= demo.REFERENCE_PROFILE_TOL
        and np.abs(profile_matrix - demo.REFERENCE_SLOW_ENTRY).min() <= demo.REFERENCE_PROFILE_TOL
    )
    checks.append(
        ("speed-profile-entries", rows_ok and named, f"rows_ok={rows_ok} named_entries={named}")
    )

    result = plan(matrix, t_horizon=2 * math.pi, tol_t=1e-3)
    gen_ok = bool(
        np.array_equal(result.p, demo.REFERENCE_P) and result.direction == demo.REFERENCE_DIRECTION
    )
    checks.append(("generator-selection", gen_ok, f"p={result.p.tolist()} dir={result.direction}"))

    lo, hi = demo.REFERENCE_T_WINDOW
    t_ok = result.t_star is not None and lo <= result.t_star <= hi
    checks.append(("steering-time-window", t_ok, f"t_star={result.t_star}"))

    gen = PerturbationGenerator(p=result.p, direction=result.direction)
    pushed = perturbed_unitary(matrix, gen, demo.REFERENCE_PUSH_T)
    inside_ok = contains_zero_general(pushed) == INSIDE
    checks.append(("origin-inside-after-push", inside_ok, f"t={demo.REFERENCE_PUSH_T}"))

    if result.t_star is not None:
        measured = schatten_inf(matrix - perturbed_unitary(matrix, gen, result.t_star))
        closed = perturbation_cost(result.p, result.t_star)
        # the 6-decimal source data limits the agreement to its own precision
        norm_ok = abs(measured - closed) <= 1e-4
        checks.append(
            ("perturbation-norm-closed-form", norm_ok, f"measured={measured!r} closed={closed!r}")
        )

    initial_profile = support_profile(matrix, n_angles=720)
    iofmt.write_range_csv(os.path.join(out, "range_initial.csv"), initial_profile)
    iofmt.render_range_svg(
        os.path.join(out, "range_initial.svg"),
        initial_profile,
        eigenvalues=system.values,
        title="numerical range: demonstration matrix",
    )
    pushed_profile = support_profile(pushed, n_angles=720)
    iofmt.write_range_csv(os.path.join(out, "range_perturbed.csv"), pushed_profile)
    iofmt.render_range_svg(
        os.path.join(out, "range_perturbed.svg"),
        pushed_profile,
        eigenvalues=_maybe_eigenvalues(pushed),
        title=f"numerical range: pushed at t={demo.REFERENCE_PUSH_T}",
    )

    report = {
        "command": "example",
        "input": {"label": "bundled demonstration matrix", "sha256": _digest(matrix), "dim": 3},
        "settings": {
            "unitarity_tol": demo.DEMO_UNITARITY_TOL,
            "horizon": 2 * math.pi,
            "tol_t": 1e-3,
            "angles": 2048,
        },
        "speed_profile": profile_matrix,
        "plan": {
            "p": result.p,
            "direction": result.direction,
            "t_star": result.t_star,
            "perturbation_norm": result.perturbation_norm,
            "verdict": result.verdict,
            "target_gap": list(result.target_gap),
        },
        "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in checks],
        "files": [
            "range_initial.csv",
            "range_initial.svg",
            "range_perturbed.csv",
            "range_perturbed.svg",
        ],
    }
    _write_report(os.path.join(out, "report.json"), report)

    elapsed = time.perf_counter() - started
    print("speed profile (rows: eigenvalues ccw, columns: basis weights):")
    for row in profile_matrix:
        print("  " + "  ".join(f"{x:.6f}" for x in row))
    print(
        f"selected p = {result.p.tolist()}, direction = {result.direction}, "
        f"t* = {result.t_star}, perturbation norm = {result.perturbation_norm}"
    )
    failed = [name for name, ok, _ in checks if not ok]
    for name, ok, detail in checks:
        print(f"{'ok    ' if ok else 'FAILED'} {name}  ({detail})")
    print(f"wrote report and figures to {out} ({elapsed:.2f}s)")
    if failed:
        print(f"example check failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NothingToSteerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOTHING_TO_STEER
    except TrackingCollisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except iofmt.MatrixFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
