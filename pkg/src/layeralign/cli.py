"""Command-line front end.

Subcommands:
    simulate-x    K x 2 or 2 x K sweep (CSV records + JSON summary)
    simulate-mac  3-user SIMO MAC sweep, per-antenna vs joint arms
    align-check   alignment feasibility/residual census (JSON report)
    diophantine   witness / measure / census probes (CSV rows + JSON summary)

Exit codes: 0 ok, 2 bad configuration, 3 enumeration budget exceeded,
4 infeasible alignment scenario.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceededError, ConfigError, InfeasibleScenarioError
from .harness import (
    ExperimentConfig,
    run_2xk,
    run_align_census,
    run_dioph,
    run_kx2,
    run_mac,
    write_json,
    write_records_csv,
    write_rows_csv,
)


def _add_common(p):
    p.add_argument("--config", help="JSON config file (ExperimentConfig fields)")
    p.add_argument("--seed", type=int, help="master seed override")
    p.add_argument("--out", help="output CSV (simulate/diophantine) or JSON (align-check)")
    p.add_argument("--trials", type=int, help="number of independent trials")
    p.add_argument("--threads", type=int, help="worker threads (results are thread-count independent)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="layeralign",
        description="Layered interference alignment simulator and Diophantine toolbox",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    px = sub.add_parser("simulate-x", help="X-channel DoF sweep")
    px.add_argument("--kind", choices=["kx2", "2xk"], help="topology layout")
    px.add_argument("--summary-out", help="JSON summary path")
    _add_common(px)

    pm = sub.add_parser("simulate-mac", help="3-user SIMO MAC sweep")
    pm.add_argument("--summary-out", help="JSON summary path")
    _add_common(pm)

    pa = sub.add_parser("align-check", help="alignment feasibility census")
    pa.add_argument("--kind", choices=["kx2", "2xk"], help="topology layout")
    _add_common(pa)

    pd = sub.add_parser("diophantine", help="Diophantine probes")
    pd.add_argument("--summary-out", help="JSON summary path")
    _add_common(pd)
    return ap


def _load_config(args, scenario):
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    data.setdefault("scenario", scenario)
    cfg = ExperimentConfig.from_dict(data)
    cfg = cfg.override(
        seed=getattr(args, "seed", None),
        trials=getattr(args, "trials", None),
        threads=getattr(args, "threads", None),
        out=getattr(args, "out", None),
        summary_out=getattr(args, "summary_out", None),
    )
    return cfg


def _emit(result, cfg, default_csv):
    if result.records:
        path = cfg.out or default_csv
        write_records_csv(result.records, path)
        print(f"wrote {len(result.records)} records to {path}")
    if result.rows:
        path = cfg.out or default_csv
        write_rows_csv(result.rows, path)
        print(f"wrote {len(result.rows)} rows to {path}")
    if cfg.summary_out:
        write_json(result.summary, cfg.summary_out)
        print(f"wrote summary to {cfg.summary_out}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate-x":
            kind = args.kind
            if kind is None:
                # fall back to the config scenario; default kx2
                kind = "kx2"
                if args.config:
                    with open(args.config) as fh:
                        kind = json.load(fh).get("scenario", "kx2")
            cfg = _load_config(args, kind)
            if cfg.scenario != kind:
                cfg = cfg.override(scenario=kind)
            result = run_kx2(cfg) if kind == "kx2" else run_2xk(cfg)
            _emit(result, cfg, f"simulate_{kind}.csv")
            print(f"dof_slope={result.summary['dof_slope']:.6g}")
        elif args.command == "simulate-mac":
            cfg = _load_config(args, "mac")
            result = run_mac(cfg)
            _emit(result, cfg, "simulate_mac.csv")
            for arm, info in result.summary["arms"].items():
                print(f"dof_slope[{arm}]={info['dof_slope']:.6g}")
            if "dof_separation" in result.summary:
                print(f"dof_separation={result.summary['dof_separation']:.6g}")
        elif args.command == "align-check":
            kind = args.kind or "kx2"
            cfg = _load_config(args, kind if kind in ("kx2", "2xk") else "kx2")
            cfg = cfg.override(scenario=kind)
            cfg.extras["kind"] = kind
            result = run_align_census(cfg)
            path = cfg.out or "align_check.json"
            write_json(result.summary, path)
            print(f"wrote alignment report to {path}")
            print(
                f"feasible={result.summary['feasible_trials']}/{cfg.trials} "
                f"max_residual={result.summary['max_residual']:.3e}"
            )
        elif args.command == "diophantine":
            cfg = _load_config(args, "dioph")
            result = run_dioph(cfg)
            _emit(result, cfg, "diophantine.csv")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InfeasibleScenarioError as exc:
        print(f"infeasible scenario: {exc}", file=sys.stderr)
        if exc.cycle is not None:
            print(f"offending cycle: {exc.cycle}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
