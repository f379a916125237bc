"""Command-line entry points: run a scenario, summarize a log, check a config.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import config_from_dict, load_config, validate
from .errors import ConfigError, SolverError
from .harness import Simulation, compute_metrics, read_log, write_log
from .ods import OrbitParams


def _load(path, seed=None, duration=None):
    if seed is None and duration is None:
        return load_config(path)
    with open(path) as fh:
        doc = json.load(fh)
    if seed is not None:
        doc["seed"] = seed
    if duration is not None:
        doc["duration"] = duration
    return config_from_dict(doc)


def cmd_run(args) -> int:
    try:
        cfg = _load(args.config, args.seed, args.duration)
    except (ConfigError, OSError, json.JSONDecodeError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    sim = Simulation(cfg)
    try:
        if args.serve:
            host, _, port = args.serve.rpartition(":")
            from .stream import serve
            serve(sim, host or "127.0.0.1", int(port), real_time=not args.headless)
        else:
            while not sim.done:
                sim.step()
    except SolverError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3
    result = sim.result()
    if args.log:
        write_log(result, args.log)
    print(json.dumps({"ticks": sim.tick, "status": result.status,
                      "metrics": result.metrics}, indent=2))
    return 0


def cmd_metrics(args) -> int:
    try:
        columns, rows = read_log(args.log)
        metrics = compute_metrics(rows, columns, OrbitParams().omega)
    except (ConfigError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(json.dumps(metrics, indent=2))
    return 0


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    assert not validate(cfg)
    print(f"OK: {cfg.scenario}, {len(cfg.satellites)} satellite(s), "
          f"{cfg.duration} s at dt={cfg.dt_sim}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="orbemu",
                                     description="on-orbit interaction emulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--log", help="write the tick log CSV here")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--duration", type=float)
    p_run.add_argument("--serve", metavar="HOST:PORT",
                       help="serve live telemetry/commands while running")
    p_run.add_argument("--headless", action="store_true",
                       help="do not pace to wall-clock time")
    p_run.set_defaults(func=cmd_run)

    p_metrics = sub.add_parser("metrics", help="summarize a log CSV")
    p_metrics.add_argument("--log", required=True)
    p_metrics.set_defaults(func=cmd_metrics)

    p_val = sub.add_parser("validate", help="check a scenario config")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
