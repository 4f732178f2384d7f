"""Command-line interface: CSV samples in, JSON reports out.

Exit codes: 0 ok, 2 input error, 3 unsupported dimension, 4 size limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import geometry
from .cone_expectile import (
    DEFAULT_ALPHA_GRID,
    WeightedSample,
    downward_expectile,
    lower_expectile_order,
    risk_measure,
    upper_expectile_order,
    upward_expectile,
)
from .errors import ExpectileError, InputError, SizeLimitError, UnsupportedDimensionError
from .geometry import ConeSpec, hausdorff_2d, vertices_2d
from .rank_order import compare, infer_cone_order, rank_many
from .scalar import ScalarSample, expectile
from .scenario_dual import region_primal_2d, region_vertices, scenario_vertices
from .simulate import simulate_gumbel_sample


EXIT_INPUT = 2
EXIT_DIMENSION = 3
EXIT_SIZE = 4


def read_sample_csv(path: str | Path) -> tuple[WeightedSample, dict[str, np.ndarray]]:
    """Read columns x1..xd (and an optional ``weight`` column).

    Returns the sample plus every numeric column by name.
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if any(cell.strip() for cell in r)]
    if not body:
        raise InputError(f"{path} has no data rows")
    bad = []
    data = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            bad.append(lineno)
            continue
        try:
            data.append([float(cell) for cell in row])
        except ValueError:
            bad.append(lineno)
    if bad:
        raise InputError(f"non-numeric or ragged rows in {path}: {', '.join(map(str, bad))}")
    table = np.array(data)
    columns = {name: table[:, k] for k, name in enumerate(header)}
    xcols = sorted(
        (name for name in header if name.startswith("x") and name[1:].isdigit()),
        key=lambda name: int(name[1:]),
    )
    if not xcols:
        raise InputError(f"{path} has no x1..xd columns")
    points = np.column_stack([columns[c] for c in xcols])
    weights = columns.get("weight")
    return WeightedSample.from_points(points, weights), columns


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise InputError(f"cannot parse vector {text!r}") from exc


def _clean(obj):
    """Round floats to 15 significant digits (and drop negative zeros)."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.15g}") + 0.0
    return obj


def dumps(report) -> str:
    return json.dumps(_clean(report), indent=2) + "\n"


def _load_cone(args, d: int) -> ConeSpec:
    if args.cone:
        cone = ConeSpec.load(args.cone)
        if cone.dimension != d:
            raise InputError(f"cone has dimension {cone.dimension}, data has {d}")
        return cone
    return ConeSpec.orthant(d)


def _alphas(args, default):
    alphas = args.alpha if args.alpha else list(default)
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise InputError(f"alpha must lie in (0, 1), got {a}")
    return alphas


def cmd_expectile(args) -> dict:
    X, columns = read_sample_csv(args.input)
    if args.direction:
        w = _vector(args.direction)
        if w.size != X.dimension:
            raise InputError(f"direction has {w.size} entries, data has {X.dimension} columns")
        sample = X.project(w)
        target = {"direction": w.tolist()}
    else:
        if args.column not in columns:
            raise InputError(f"column {args.column!r} not found")
        sample = ScalarSample(columns[args.column], X.probabilities)
        target = {"column": args.column}
    alphas = _alphas(args, [round(0.1 * k, 1) for k in range(1, 10)])
    return {**target, "results": [{"alpha": a, "expectile": expectile(sample, a)} for a in alphas]}


def cmd_cone_expectile(args) -> dict:
    X, _ = read_sample_csv(args.input)
    cone = _load_cone(args, X.dimension)
    results = []
    for a in _alphas(args, [0.25]):
        down = downward_expectile(X, cone, a, workers=args.workers)
        up = upward_expectile(X, cone, 1.0 - a, workers=args.workers)
        results.append({"alpha": a, "downward": down.to_dict(), "upward": up.to_dict()})
    return {"cone": cone.to_dict(), "results": results}


def cmd_risk(args) -> dict:
    X, _ = read_sample_csv(args.input)
    cone = _load_cone(args, X.dimension)
    return {
        "cone": cone.to_dict(),
        "results": [risk_measure(X, cone, a, args.tolerance, args.workers).to_dict() for a in _alphas(args, [0.25])],
    }


def cmd_region(args) -> dict:
    X, _ = read_sample_csv(args.input)
    if X.dimension > 3:
        raise UnsupportedDimensionError(f"region is offered for d <= 3, got d = {X.dimension}")
    results = []
    for a in _alphas(args, [0.25]):
        if a > 0.5:
            raise InputError(f"region needs alpha in (0, 1/2], got {a}")
        poly = scenario_vertices(X.probabilities, a)
        region = region_vertices(X, a, args.tolerance)
        entry = {
            "alpha": a,
            "beta": poly.beta,
            "scenario_vertices": poly.vertices,
            "region_vertices": region.vertices,
        }
        if X.dimension == 2:
            entry["polygon"] = region.boundary
            if args.directions:
                primal = vertices_2d(region_primal_2d(X, a, args.directions), args.tolerance)
                entry["primal_directions"] = args.directions
                entry["primal_polygon"] = primal.vertices
                entry["hausdorff"] = hausdorff_2d(region.boundary, primal.vertices)
        results.append(entry)
    return {"results": results}


def cmd_rank(args) -> dict:
    X, _ = read_sample_csv(args.input)
    cone = _load_cone(args, X.dimension)
    if not args.point:
        raise InputError("rank needs at least one --point")
    points = np.array([_vector(p) for p in args.point])
    if points.shape[1] != X.dimension:
        raise InputError(f"points must have {X.dimension} coordinates")
    report = {"ranks": [r.to_dict() for r in rank_many(points, X, cone, args.workers)]}
    if args.compare:
        if len(points) != 2:
            raise InputError("--compare needs exactly two points")
        y, z = points
        report["comparison"] = compare(y, z, X, cone, args.tolerance).to_dict()
        report["inference"] = infer_cone_order(y, z, X, cone, args.tolerance).to_dict()
        report["cone_order_direct"] = cone.leq(y, z, args.tolerance)
    return report


def cmd_order(args) -> dict:
    X, _ = read_sample_csv(args.input)
    Y, _ = read_sample_csv(args.other)
    if X.dimension != Y.dimension:
        raise InputError("samples have different dimensions")
    cone = _load_cone(args, X.dimension)
    grid = _alphas(args, DEFAULT_ALPHA_GRID)
    return {
        "lower": lower_expectile_order(X, Y, cone, grid, args.tolerance).to_dict(),
        "upper": upper_expectile_order(X, Y, cone, grid, args.tolerance).to_dict(),
    }


def cmd_scenarios(args) -> dict:
    if args.probabilities:
        p = _vector(args.probabilities)
        p = p / p.sum()
    elif args.input:
        p = read_sample_csv(args.input)[0].probabilities
    elif args.n:
        p = np.full(args.n, 1.0 / args.n)
    else:
        raise InputError("scenarios needs --n, --probabilities or --input")
    results = []
    for a in _alphas(args, [0.25]):
        if a > 0.5:
            raise InputError(f"scenarios needs alpha in (0, 1/2], got {a}")
        results.append(scenario_vertices(p, a).to_dict())
    return {"probabilities": p, "results": results}


def cmd_simulate(args) -> str:
    data = simulate_gumbel_sample(
        args.n, args.seed, args.theta, args.normal_mean, args.normal_var, args.gamma_shape, args.gamma_rate
    )
    lines = ["x1,x2"] + [f"{a:.15g},{b:.15g}" for a, b in data]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expectile-sets",
        description="Cone expectiles, expectile regions, risk measures and rank functions for weighted samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cone=True):
        p.add_argument("--input", help="CSV with header x1..xd and optional weight column")
        if cone:
            p.add_argument("--cone", help="cone JSON file (default: nonnegative orthant)")
        p.add_argument("--alpha", type=float, action="append", help="level; repeat for several")
        p.add_argument("--tolerance", type=float, default=geometry.DEFAULT_TOL)
        p.add_argument("--output", help="write report here instead of stdout")
        p.add_argument("--workers", type=int, default=None, help="threads for per-generator work")

    p = sub.add_parser("expectile", help="univariate expectiles of a column or projection")
    common(p, cone=False)
    p.add_argument("--column", default="x1")
    p.add_argument("--direction", help="comma-separated projection vector")
    p.set_defaults(func=cmd_expectile)

    p = sub.add_parser("cone-expectile", help="downward and upward cone expectile sets")
    common(p)
    p.set_defaults(func=cmd_cone_expectile)

    p = sub.add_parser("region", help="expectile region from scenario vertices")
    common(p, cone=False)
    p.add_argument("--directions", type=int, help="also build the primal outer approximation")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("risk", help="set-valued expectile risk measure")
    common(p)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("rank", help="downward/upward expectile ranks of points")
    common(p)
    p.add_argument("--point", action="append", help="comma-separated point; repeatable")
    p.add_argument("--compare", action="store_true", help="compare exactly two points")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("order", help="lower/upper expectile stochastic orders on a level grid")
    common(p)
    p.add_argument("--other", required=True, help="CSV of the second sample")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("scenarios", help="vertices of the scenario polytope")
    common(p, cone=False)
    p.add_argument("--n", type=int, help="number of equally weighted atoms")
    p.add_argument("--probabilities", help="comma-separated base weights")
    p.set_defaults(func=cmd_scenarios)

    p = sub.add_parser("simulate", help="Gumbel-copula demo data as CSV")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta", type=float, default=2.0, help="Gumbel parameter (>= 1)")
    p.add_argument("--normal-mean", type=float, default=7.0)
    p.add_argument("--normal-var", type=float, default=4.0)
    p.add_argument("--gamma-shape", type=float, default=4.0)
    p.add_argument("--gamma-rate", type=float, default=3.0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tolerance", 1.0) <= 0:
        print("error: tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "directions", None) is not None and args.directions < 8:
        print("error: --directions must be at least 8", file=sys.stderr)
        return EXIT_INPUT
    needs_input = args.command not in ("scenarios", "simulate")
    if needs_input and not args.input:
        print(f"error: {args.command} needs --input", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = args.func(args)
    except UnsupportedDimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ExpectileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = result if isinstance(result, str) else dumps(result)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
