"""Command-line entry points: bench, calibrate, gen-env, serve."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .belief import load_records
from .environments import fetch_env, synthetic_env
from .errors import ScaleFeedbackError
from .experiments import DEFAULT_SIGMA_GRID, calibrate_sigma, parse_config, run_benchmark
from .trajectories import load_trajectory_set, save_trajectory_set


def _cmd_bench(args) -> int:
    config = parse_config(args.config)
    result = run_benchmark(config, out_dir=args.out)
    for path in result.files:
        print(f"wrote {path}")
    for curve in result.curves:
        print(f"{curve.policy} {curve.metric}: "
              f"start {curve.mean[0]:+.3f} final {curve.mean[-1]:+.3f} (n={curve.n})")
    return 0


def _cmd_calibrate(args) -> int:
    training = [load_records(path) for path in args.train]
    validation = [load_records(path) for path in args.val]
    tset = load_trajectory_set(args.set)
    grid = tuple(float(x) for x in args.grid.split(",")) if args.grid else DEFAULT_SIGMA_GRID
    sigma = calibrate_sigma(training, validation, grid, tset,
                            posterior_samples=args.posterior_samples, seed=args.seed)
    print(f"calibrated sigma: {sigma}")
    return 0


def _cmd_gen_env(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "synthetic":
        tset = synthetic_env(args.dimension, args.n, rng)
        note = (f"synthetic ellipsoid menu, dimension {args.dimension}, "
                f"seed {args.seed}")
    else:
        tset = fetch_env(args.n, rng)
        note = ("serving-task lattice, seed "
                f"{args.seed}; hitting the pan is only possible when moving over it")
    save_trajectory_set(tset, args.out, note=note)
    print(f"wrote {args.out} ({len(tset)} trajectories, dimension {tset.dimension})")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, posterior_samples=args.posterior_samples,
                     frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scalefb",
                                     description="Reward learning from slider feedback")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run a simulation campaign from a config file")
    bench.add_argument("--config", required=True)
    bench.add_argument("--out", default=None, help="override the config's output directory")
    bench.set_defaults(func=_cmd_bench)

    cal = sub.add_parser("calibrate", help="grid-search the slider noise level")
    cal.add_argument("--train", required=True, nargs="+",
                     help="training record files, one per user")
    cal.add_argument("--val", required=True, nargs="+",
                     help="validation record files, one per user")
    cal.add_argument("--set", required=True, help="trajectory set file")
    cal.add_argument("--grid", default=None, help="comma-separated sigma values")
    cal.add_argument("--posterior-samples", type=int, default=100)
    cal.add_argument("--seed", type=int, default=0)
    cal.set_defaults(func=_cmd_calibrate)

    gen = sub.add_parser("gen-env", help="generate a trajectory set file")
    gen.add_argument("--kind", choices=("synthetic", "fetch"), required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--dimension", type=int, default=10)
    gen.add_argument("--n", type=int, default=200)
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=_cmd_gen_env)

    serve = sub.add_parser("serve", help="run the live feedback session service")
    serve.add_argument("--data-dir", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8572)
    serve.add_argument("--posterior-samples", type=int, default=100)
    serve.add_argument("--frontend", default=None,
                       help="static directory to serve as the browser UI")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScaleFeedbackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
