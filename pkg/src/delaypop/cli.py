"""Command-line front end: simulate / analyze / sweep / verify.

History convention for --history: comma-separated, oldest first, i.e.
A[-m],...,A[0].  Exit codes: 0 success, 1 runtime or verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, model, simulate, svgplot, sweep, verify
from .analysis import REPORT_COLUMNS


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, choices=[model.BOBWHITE, model.PIELOU])
    p.add_argument("--alpha", type=float, help="bobwhite only")
    p.add_argument("--beta", type=float)
    p.add_argument("--r", type=float, help="bobwhite only")
    p.add_argument("--lambda", type=float, dest="lam", help="pielou only")


def _build_model(parser: argparse.ArgumentParser, args) -> model.GrowthModel:
    try:
        if args.model == model.BOBWHITE:
            if args.lam is not None:
                parser.error("--lambda conflicts with --model bobwhite")
            if args.alpha is None or args.beta is None or args.r is None:
                parser.error("--model bobwhite requires --alpha, --beta and --r")
            return model.make_bobwhite(args.alpha, args.beta, args.r)
        if args.alpha is not None or args.r is not None:
            parser.error("--alpha/--r conflict with --model pielou")
        if args.beta is None or args.lam is None:
            parser.error("--model pielou requires --beta and --lambda")
        return model.make_pielou(args.beta, args.lam)
    except ValueError as exc:
        parser.error(str(exc))


def _parse_history(parser, raw: str, m: int) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in raw.split(","))
    except ValueError:
        parser.error(f"--history must be comma-separated decimals, got {raw!r}")
    if len(values) != m + 1:
        parser.error(f"--history needs m+1 = {m + 1} values (oldest first), got {len(values)}")
    if any(v <= 0 for v in values):
        parser.error("--history values must be positive")
    return values


def cmd_simulate(parser, args) -> int:
    mdl = _build_model(parser, args)
    history = _parse_history(parser, args.history, args.m)
    trace = simulate.iterate(mdl, args.m, history, args.steps)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(simulate.trace_to_csv(trace))
    if args.plot:
        with open(args.plot, "w") as fh:
            fh.write(svgplot.orbit_svg(trace, mdl.x_bar, log_y=args.log_y))
    if trace.divergent:
        print(f"orbit diverged after {trace.n_steps} steps (|ln A| > {simulate.LOG_OVERFLOW:g})", file=sys.stderr)
        return 1
    print(f"x_bar={mdl.x_bar:.9g}")
    print(f"steps={trace.n_steps}")
    burn_in = args.burn_in if args.burn_in is not None else trace.n_steps // 2
    try:
        ts = simulate.tail_stats(trace, burn_in)
    except ValueError as exc:
        print(f"tail statistics unavailable: {exc}")
    else:
        print(f"tail_min={ts.tail_min:.9g}")
        print(f"tail_max={ts.tail_max:.9g}")
        print(f"liminf_est={ts.liminf_est:.9g}")
        print(f"limsup_est={ts.limsup_est:.9g}")
        print(f"last_value={ts.last_value:.9g}")
    return 0


def cmd_analyze(parser, args) -> int:
    mdl = _build_model(parser, args)
    sim = None
    if not args.no_sim:
        sim = analysis.SimOptions(n_steps=args.steps, burn_in=args.burn_in or args.steps // 2,
                                  tol=args.tol, seed=args.seed)
    report = analysis.classify(mdl, args.m, sim=sim, grid_size=args.grid_size)
    sys.stdout.write(analysis.report_text(report))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(",".join(REPORT_COLUMNS) + "\n")
            fh.write(analysis.report_csv_row(report) + "\n")
    return 0


def cmd_sweep(parser, args) -> int:
    try:
        config = sweep.load_config(args.config)
        result = sweep.run_sweep(config, jobs=args.jobs)
    except (ValueError, OSError) as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 1
    csv = sweep.result_to_csv(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    return 0


def cmd_verify(parser, args) -> int:
    try:
        results = verify.run_suites(seed=args.seed, only=args.only)
    except ValueError as exc:
        parser.error(str(exc))
    failed = [res.name for res in results if not res.passed]
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
    if failed:
        print(f"failing suites: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delaypop",
        description="Simulate the delayed recurrence A[n+1] = A[n]*F(A[n-m]) "
        "and evaluate persistence / global-attractivity criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="iterate an orbit and report tail statistics")
    _add_model_flags(p_sim)
    p_sim.add_argument("--m", type=int, required=True)
    p_sim.add_argument("--history", required=True, help="comma-separated A[-m],...,A[0] (oldest first)")
    p_sim.add_argument("--steps", type=int, required=True)
    p_sim.add_argument("--burn-in", type=int, default=None)
    p_sim.add_argument("--out", help="trace CSV path (header n,A_n,log_A_n)")
    p_sim.add_argument("--plot", help="SVG chart path")
    p_sim.add_argument("--log-y", action="store_true", help="log scale on the population axis")

    p_an = sub.add_parser("analyze", help="evaluate every stability criterion for one model")
    _add_model_flags(p_an)
    p_an.add_argument("--m", type=int, required=True)
    p_an.add_argument("--grid-size", type=int, default=analysis.DEFAULT_GRID_SIZE)
    p_an.add_argument("--steps", type=int, default=20000)
    p_an.add_argument("--burn-in", type=int, default=None)
    p_an.add_argument("--tol", type=float, default=1e-6)
    p_an.add_argument("--seed", type=int, default=0)
    p_an.add_argument("--no-sim", action="store_true", help="skip simulation evidence")
    p_an.add_argument("--out", help="CSV row output path")

    p_sw = sub.add_parser("sweep", help="run a parameter-grid study from a JSON config")
    p_sw.add_argument("--config", required=True)
    p_sw.add_argument("--out", help="CSV output path (default stdout)")
    p_sw.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p_ver = sub.add_parser("verify", help="run the built-in property suites")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--only", help=f"run a single suite ({', '.join(verify.SUITES)})")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "analyze": cmd_analyze,
        "sweep": cmd_sweep,
        "verify": cmd_verify,
    }
    return handlers[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())
