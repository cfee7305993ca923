"""Command-line entry point: ``holouav run`` and ``holouav sweep``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .alternating import DriverConfig
from .config import ConfigError, load_config
from .sweep import SweepSpec, parse_rhs, run_job, run_sweep, summarize, write_results


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _rhs(text):
    return tuple(parse_rhs(v.strip()) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holouav",
        description="Joint holographic beamforming and UAV placement simulator.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file (scenario/sweep/optimizer sections)")
    common.add_argument("--mode", choices=("proposed", "benchmark", "both"))
    common.add_argument("--snr-db", type=_floats, help="comma-separated SNR values in dB")
    common.add_argument("--rhs", type=_rhs, help="comma-separated RHS sizes, e.g. 8x8,10x10")
    common.add_argument("--users", type=_ints, help="comma-separated user counts")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--out", help="output directory for the CSV files")
    common.add_argument("--unguarded", action="store_true",
                        help="disable every monotone guard (raw fixed-step updates)")
    common.add_argument("--trace", action="store_true", help="write traj_<id>.csv files")
    common.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p_run = sub.add_parser("run", parents=[common], help="optimize a single scenario")
    p_run.add_argument("--realization", type=int, default=0)

    p_sweep = sub.add_parser("sweep", parents=[common], help="Monte-Carlo parameter sweep")
    p_sweep.add_argument("--realizations", type=int)
    return parser


def _resolve(args):
    scenario, spec, cfg = load_config(args.config)
    if args.seed is not None:
        scenario = replace(scenario, seed=args.seed)
    updates = {}
    if args.snr_db:
        updates["snr_db_list"] = args.snr_db
    if args.rhs:
        updates["m_list"] = args.rhs
    if args.users:
        updates["d_list"] = args.users
    if args.mode:
        updates["mode"] = args.mode
    if args.command == "sweep" and args.realizations is not None:
        updates["realizations"] = args.realizations
    spec = replace(spec, **updates)
    if args.command == "run":
        spec = SweepSpec(snr_db_list=spec.snr_db_list[:1], m_list=spec.m_list[:1],
                         d_list=spec.d_list[:1], realizations=1, mode=spec.mode)
        scenario = replace(scenario, realization=args.realization)
    if args.unguarded:
        cfg = DriverConfig.unguarded(eps_tol=cfg.eps_tol, max_outer=cfg.max_outer,
                                          holo=cfg.holo, pos=cfg.pos, weight_init=cfg.weight_init)
    return scenario, spec, cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scenario, spec, cfg = _resolve(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"holouav: {exc}", file=sys.stderr)
        return 2

    if args.command == "run":
        results, _ = _run_single(spec, scenario, cfg, args)
        for res in results:
            print(f"{res.mode:9s} R={res.final_sum_rate:.6f} bit/s/Hz iters={res.outer_iters} "
                  f"q=({res.q[0]:.2f}, {res.q[1]:.2f}, {res.q[2]:.2f}) status={res.status}")
        return 0 if all(r.status == "ok" for r in results) else 1

    _, summary = run_sweep(spec, scenario, args.out, cfg, workers=args.workers,
                           trajectories=args.trace)
    for row in summary:
        print(f"{row['mode']:9s} snr={row['snr_db']:g} m={row['m']} d={row['d']} "
              f"mean={row['mean_sum_rate_bps_hz']:.4f} std={row['std_sum_rate_bps_hz']:.4f} "
              f"ok={row['ok']}/{row['runs']}")
    return 0


def _run_single(spec, scenario, cfg, args):
    rhs, snr, d = spec.m_list[0], spec.snr_db_list[0], spec.d_list[0]
    results = [run_job((mode, snr, rhs, d, scenario.realization), scenario, cfg)
               for mode in spec.modes]
    if args.out:
        summary = write_results(results, args.out, args.trace)
    else:
        summary = summarize(results)
    return results, summary


if __name__ == "__main__":
    sys.exit(main())
