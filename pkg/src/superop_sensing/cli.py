"""Command-line entry points.

Subcommands: generate (ground truth to disk), measure (design + data), solve
(strategy on stored data), reconstruct (full matrix from stored blocks), run
(full pipeline from a JSON config), rip-probe, report (aggregate stored
results). Every subcommand accepts --seed, --out and --threads. Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness, serialize
from .errors import (AssumptionViolationError, DegenerateSpectrumError,
                     DimensionError, DivergenceError, UndefinedMetricError)
from .linalg import load_cmx, save_cmx
from .measurements import (build_blockwise_design, build_random_design,
                           empirical_rip_probe, simulate_measurements)
from .models import (haar_low_rank_hermitian, lindblad_canonical, random_channel,
                     random_lindbladian, superop_from_reshaped)
from .reconstruction import reconstruct_full
from .reshaping import choi_reshape
from .solvers import (SolverConfig, nesterov_als_solve, solve_first_row_joint,
                      solve_first_row_parallel, solve_first_row_subset)

_CONFIG_ERRORS = (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError)
_NUMERICAL_ERRORS = (DivergenceError, AssumptionViolationError,
                     DegenerateSpectrumError, UndefinedMetricError,
                     np.linalg.LinAlgError)


def _common(parser):
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superop-sensing")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw a ground-truth superoperator")
    p.add_argument("--task", choices=["channel", "lindbladian", "haar"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kraus-rank", type=int, default=2)
    p.add_argument("--n-jumps", type=int, default=1)
    p.add_argument("--r-plus", type=int, default=2)
    p.add_argument("--r-minus", type=int, default=1)
    _common(p)

    p = sub.add_parser("measure", help="build a design and simulate data")
    p.add_argument("--truth", required=True, help="directory from `generate`")
    p.add_argument("--design", choices=["random_pairs", "blockwise"], required=True)
    p.add_argument("--source", choices=["pauli", "random"], default="random")
    p.add_argument("--m", type=int, default=100,
                   help="pair count (random_pairs) or observable count (blockwise)")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--noise-mode", choices=["synthetic", "physical"], default="synthetic")
    p.add_argument("--row-index", type=int, default=0)
    _common(p)

    p = sub.add_parser("solve", help="run a recovery strategy on stored data")
    p.add_argument("--data", required=True, help="directory from `measure`")
    p.add_argument("--strategy", choices=["als_n2", "als_p", "als_n", "als_i"],
                   required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--subset-ratio", type=float, default=0.5)
    p.add_argument("--max-iter", type=int, default=300)
    p.add_argument("--gamma", type=float, default=1e-8)
    p.add_argument("--eta", type=float, default=1.2)
    p.add_argument("--beta", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("reconstruct", help="complete the matrix from stored blocks")
    p.add_argument("--blocks", required=True,
                   help="CMX1 file holding the anchor row blocks side by side")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--rtol", type=float, default=None)
    p.add_argument("--anchor", type=int, default=0)
    p.add_argument("--hermitize", action="store_true")
    _common(p)

    p = sub.add_parser("run", help="full pipeline from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--formats", default="json,csv")
    _common(p)

    p = sub.add_parser("rip-probe", help="sampled frame bounds of a design")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--design", choices=["random_pairs", "blockwise"], required=True)
    p.add_argument("--source", choices=["pauli", "random"], default="random")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--row-index", type=int, default=0)
    _common(p)

    p = sub.add_parser("report", help="aggregate stored results")
    p.add_argument("--inputs", nargs="+", required=True,
                   help="results.json files or directories containing them")
    _common(p)
    return parser


def cmd_generate(args) -> int:
    extra = {"task": args.task, "seed": args.seed}
    if args.task == "channel":
        s = random_channel(args.n, args.kraus_rank, args.seed)
    elif args.task == "lindbladian":
        lind = random_lindbladian(args.n, args.n_jumps, args.seed)
        s = lindblad_canonical(lind)
        extra["n_jumps"] = args.n_jumps
    else:
        resh = haar_low_rank_hermitian(args.n, args.r_plus, args.r_minus, args.seed)
        s = superop_from_reshaped(resh)
    serialize.save_superoperator(args.out, s, extra)
    save_cmx(os.path.join(args.out, "reshaped.cmx"), choi_reshape(s).matrix)
    print(f"wrote superoperator (n={s.dim_n}, r_+={len(s.plus_ops)}, "
          f"r_-={len(s.minus_ops)}) to {args.out}")
    return 0


def cmd_measure(args) -> int:
    s = serialize.load_superoperator(args.truth)
    if args.design == "random_pairs":
        design = build_random_design(s.dim_n, args.m, args.source, args.seed)
    else:
        design = build_blockwise_design(s.dim_n, args.m, args.source,
                                        args.row_index, args.seed)
    data = simulate_measurements(s, design, args.sigma, args.noise_mode, args.seed)
    serialize.save_design(args.out, design, seed=args.seed)
    serialize.save_measurements(args.out, data)
    print(f"wrote design + measurements ({design.ref()}, sigma={args.sigma}) to {args.out}")
    return 0


def cmd_solve(args) -> int:
    design = serialize.load_design(args.data)
    data = serialize.load_measurements(args.data)
    cfg = SolverConfig(rank=args.rank, max_iter=args.max_iter, gamma=args.gamma,
                       eta=args.eta, beta=args.beta, seed=args.seed)
    n = design.dim_n
    os.makedirs(args.out, exist_ok=True)
    if args.strategy == "als_n2":
        if design.kind != "random_pairs":
            raise ValueError("als_n2 needs a random_pairs design")
        report = nesterov_als_solve(design, data.values, n * n, n * n, cfg)
        save_cmx(os.path.join(args.out, "estimate.cmx"), report.factors.product())
        reports = [report]
    else:
        if design.kind != "blockwise":
            raise ValueError(f"{args.strategy} needs a blockwise design")
        if args.strategy == "als_p":
            blocks, reports = solve_first_row_parallel(design.observables, data.values,
                                                       n, cfg, workers=args.threads)
        elif args.strategy == "als_n":
            blocks, report = solve_first_row_joint(design.observables, data.values, n, cfg)
            reports = [report]
        else:
            blocks, report = solve_first_row_subset(design.observables, data.values, n,
                                                    args.subset_ratio, cfg)
            reports = [report]
        serialize.save_matrix_stack(os.path.join(args.out, "blocks.cmx"), blocks)
    save_cmx(os.path.join(args.out, "left.cmx"), reports[-1].factors.left)
    save_cmx(os.path.join(args.out, "right.cmx"), reports[-1].factors.right)
    serialize.save_json(os.path.join(args.out, "report.json"), {
        "strategy": args.strategy,
        "rank": args.rank,
        "final_loss": sum(r.final_loss for r in reports),
        "iterations": sum(r.iterations for r in reports),
        "restarts": sum(r.restarts for r in reports),
        "wall_time_s": sum(r.wall_time for r in reports),
        "loss_trace": reports[-1].loss_trace,
    })
    print(f"solved with {args.strategy}: loss={sum(r.final_loss for r in reports):.3e}, "
          f"iterations={sum(r.iterations for r in reports)}")
    return 0


def cmd_reconstruct(args) -> int:
    stacked = load_cmx(args.blocks)
    dim = stacked.shape[0]
    count = stacked.shape[1] // dim
    blocks = [stacked[:, k * dim:(k + 1) * dim] for k in range(count)]
    resh = reconstruct_full(blocks, args.rank, rtol=args.rtol, anchor=args.anchor,
                            hermitize=args.hermitize, svd_seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    save_cmx(os.path.join(args.out, "k_est.cmx"), resh.matrix)
    serialize.save_json(os.path.join(args.out, "reconstruct.json"), {
        "rank": args.rank, "anchor": args.anchor, "hermitize": args.hermitize,
        "dim_n": dim,
    })
    print(f"reconstructed {dim * count} x {dim * count} matrix at rank {args.rank}")
    return 0


def cmd_run(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    if args.seed_explicit:
        raw["master_seed"] = args.seed
    raw.setdefault("workers", args.threads)
    config = harness.ExperimentConfig.from_dict(raw)
    result = harness.run_experiment(config)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    written = harness.emit_results(result, args.out, formats)
    for point in result.points:
        agg = point.aggregates(config.recovery_threshold)
        err = "n/a" if agg["mean_error"] is None else f"{agg['mean_error']:.3e}"
        print(f"m={point.m}: mean_error={err} recovery={agg['recovery_rate']:.2f} "
              f"mean_time={agg['mean_time_s']:.3f}s")
    print("wrote: " + ", ".join(written))
    return 0


def cmd_rip_probe(args) -> int:
    if args.design == "random_pairs":
        design = build_random_design(args.n, args.m, args.source, args.seed)
    else:
        design = build_blockwise_design(args.n, args.m, args.source,
                                        args.row_index, args.seed)
    probe = empirical_rip_probe(design, args.rank, args.samples, args.seed)
    payload = {"c0": probe.c0, "c1": probe.c1, "c": probe.c, "delta": probe.delta,
               "design": design.ref(), "rank": args.rank, "samples": args.samples}
    print(json.dumps(payload, sort_keys=True, indent=1))
    if args.out != ".":
        os.makedirs(args.out, exist_ok=True)
        serialize.save_json(os.path.join(args.out, "rip_probe.json"), payload)
    return 0


def cmd_report(args) -> int:
    paths = []
    for item in args.inputs:
        if os.path.isdir(item):
            paths.append(os.path.join(item, "results.json"))
        else:
            paths.append(item)
    combined = []
    for path in paths:
        payload = harness.load_result(path)
        strategy = payload["config"]["strategy"]
        for point in payload["points"]:
            agg = point["aggregates"]
            err = "n/a" if agg["mean_error"] is None else f"{agg['mean_error']:.3e}"
            print(f"{path}: strategy={strategy} m={point['m']} mean_error={err} "
                  f"recovery={agg['recovery_rate']:.2f}")
            combined.append({"path": path, "strategy": strategy, "m": point["m"],
                             "aggregates": agg})
    if args.out != ".":
        os.makedirs(args.out, exist_ok=True)
        serialize.save_json(os.path.join(args.out, "report.json"),
                            {"entries": combined})
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "measure": cmd_measure,
    "solve": cmd_solve,
    "reconstruct": cmd_reconstruct,
    "run": cmd_run,
    "rip-probe": cmd_rip_probe,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed_explicit = args.seed is not None
    if args.seed is None:
        args.seed = 0
    try:
        return _COMMANDS[args.command](args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except DimensionError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
