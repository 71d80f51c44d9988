"""Command-line front end.

Subcommands:

  run     execute a configured sweep and write the records CSV
  single  run one trial with step-by-step diagnostics
  signal  print the structure-function table and width-selection scan
  oracle  empirical-vs-expected spectrum convergence report

Exit codes: 0 success, 1 configuration/usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

import numpy as np

from . import bench, spectrum
from .bench import BenchConfig, ConfigError, load_config
from .measurement import measure, sample_sensing
from .numerics import dist, p_objective, p_opt, structure_function
from .pursuit import step2_direction
from .signals import SignalModelSpec, generate


class _UsageError(Exception):
    def __init__(self, message, parser):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message, self)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gesp", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_run = sub.add_parser("run", help="run a Monte Carlo sweep")
    p_run.add_argument("--config", required=True, help="path to the JSON benchmark config")
    p_run.add_argument("--out", help="records CSV path (overrides the config's out_path)")
    p_run.add_argument("--seed", type=int, help="base seed override (64-bit unsigned)")
    p_run.add_argument("--threads", type=int, help="worker thread override")
    p_run.add_argument("--plot-out", help="also write aggregated plot data to this path")
    p_run.set_defaults(func=_cmd_run)

    p_single = sub.add_parser("single", help="run one trial with diagnostics")
    p_single.add_argument("--config", required=True)
    p_single.add_argument("--ratio", type=float, required=True, help="one of the config's ratios")
    p_single.add_argument("--trial", type=int, required=True, help="trial index")
    p_single.add_argument("--verbose", action="store_true", help="print per-step pursuit internals")
    p_single.set_defaults(func=_cmd_single)

    p_signal = sub.add_parser("signal", help="structure-function calculator for the configured signal")
    p_signal.add_argument("--config", required=True)
    p_signal.set_defaults(func=_cmd_signal)

    p_oracle = sub.add_parser("oracle", help="spectrum-vs-expectation convergence report")
    p_oracle.add_argument("--n", type=int, required=True)
    p_oracle.add_argument("--k", type=int, required=True)
    p_oracle.add_argument("--m", type=int, required=True)
    p_oracle.add_argument("--seed", type=int, required=True)
    p_oracle.set_defaults(func=_cmd_oracle)

    return parser


def _apply_overrides(config: BenchConfig, args) -> BenchConfig:
    updates = {}
    if getattr(args, "out", None):
        updates["out_path"] = args.out
    if getattr(args, "seed", None) is not None:
        updates["base_seed"] = args.seed & ((1 << 64) - 1)
    if getattr(args, "threads", None) is not None:
        updates["threads"] = args.threads
    if not updates:
        return config
    from dataclasses import replace

    return replace(config, **updates)


def _cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    records = bench.run_sweep(config)
    bench.write_csv(records, config.out_path)
    print(f"wrote {len(records)} records to {config.out_path}")
    if args.plot_out:
        bench.write_plot_data(bench.aggregate(records), args.plot_out)
        print(f"wrote plot data to {args.plot_out}")
    return 0


def _find_ratio_index(config: BenchConfig, ratio: float) -> int:
    for i, (r, _m) in enumerate(config.resolved_ratios()):
        if r == ratio:
            return i
    raise ConfigError(f"ratio {ratio} is not one of the config's ratios")


def _cmd_single(args) -> int:
    config = load_config(args.config)
    ratio_index = _find_ratio_index(config, args.ratio)
    if not 0 <= args.trial < config.trials:
        raise ConfigError(f"trial index {args.trial} outside [0, {config.trials})")
    ratio, m = config.resolved_ratios()[ratio_index]
    seed, sig, meas = bench.build_trial_instance(config, ratio_index, args.trial)
    x = sig.vector
    nx_sq = float(np.vdot(x, x).real)
    print(f"trial seed={seed} model={config.signal.model} n={config.n} k={config.k} "
          f"m={m} ratio={ratio:g} lambda_sq={meas.lambda_sq:.6g}")
    if args.verbose:
        digest = hashlib.sha256(np.ascontiguousarray(meas.sensing).astype("<c16").tobytes()).hexdigest()
        print(f"sensing sha256={digest}")
        print(f"true support: {sig.support.tolist()}")
    for algo in config.algorithms:
        est = bench.run_algorithm(algo, meas, config.k, sig)
        label = f"{algo.name} {algo.strategy_label}".strip()
        overlap = np.intersect1d(est.support, sig.support)
        d = dist(est.z, x)
        print(f"[{label}] p_used={est.p_used} |S1 ∩ supp|={overlap.size}/{config.k} "
              f"dist={d:.6g} rel_err={d / np.sqrt(nx_sq):.6g} residual={est.residual_score:.3g}")
        if args.verbose and algo.name == "gesp":
            op = spectrum.build(meas, "exponential")
            e0 = step2_direction(op, est.s0)
            captured = float(np.sum(np.abs(x[est.s0]) ** 2)) / nx_sq
            print(f"    S0={est.s0.tolist()}")
            print(f"    ||x_S0||^2/||x||^2={captured:.6g}  |x* e0|={abs(complex(np.vdot(x, e0))):.6g}")
            print(f"    S1={est.support.tolist()}  S1∩supp={overlap.tolist()}")
    return 0


def _cmd_signal(args) -> int:
    config = load_config(args.config)
    rng = np.random.default_rng(bench.trial_seed(config.base_seed, 0, 0))
    sig = generate(config.signal, rng)
    profile = sig.profile
    k = config.k
    print(f"model={config.signal.model} n={config.n} k={k} ||x||^2={profile.total_energy:.6g}")
    print("  p    s(p)          obj_global     obj_capped")
    cap = int(np.ceil(np.sqrt(k)))
    for p in range(1, k + 1):
        s = structure_function(profile, p)
        og = p_objective(profile, k, p, "global")
        oc = f"{p_objective(profile, k, p, 'capped'):<14.6g}" if p <= cap else "-"
        print(f"  {p:<4d} {s:<13.6g} {og:<14.6g} {oc}")
    for variant in ("global", "capped"):
        best = p_opt(profile, k, variant)
        print(f"p_opt[{variant}] = {best} (objective {p_objective(profile, k, best, variant):.6g})")
    return 0


def _cmd_oracle(args) -> int:
    if args.n < 1 or not 1 <= args.k <= args.n or args.m < 1:
        raise ConfigError(f"need n >= 1, 1 <= k <= n, m >= 1; got n={args.n} k={args.k} m={args.m}")
    rng = np.random.default_rng(args.seed & ((1 << 64) - 1))
    sig = generate(SignalModelSpec(model="gaussian", n=args.n, k=args.k), rng)
    expected = spectrum.expectation_oracle(sig)
    full = np.arange(args.n)
    print(f"gaussian signal n={args.n} k={args.k}, expected spectrum trace=0.25")
    errors = {}
    for m in (args.m, 4 * args.m):
        meas = measure(sig, sample_sensing(args.n, m, rng))
        op = spectrum.build(meas, "exponential")
        emp = spectrum.submatrix(op, full)
        errors[m] = float(np.linalg.norm(emp - expected))
        print(f"m={m}: frobenius error {errors[m]:.6g}")
    ratio = errors[args.m] / errors[4 * args.m]
    print(f"error ratio m -> 4m: {ratio:.4g} (inverse-sqrt scaling predicts about 2)")
    return 0


def cli_main(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        exc.parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required (run, single, signal, oracle)", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures: I/O, non-convergence, ...
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
