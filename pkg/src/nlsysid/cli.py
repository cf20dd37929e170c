"""Command-line front end for simulation, sweeps, and bound evaluation.

Subcommands: ``simulate`` dumps one trajectory, ``lse-sweep`` / ``sme-sweep``
run convergence sweeps, ``bmsb-estimate`` writes the excitation constants,
``bounds`` evaluates the theoretical curves from a saved constants file, and
``reproduce <figure-id>`` runs a canned study configuration.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bmsb import BmsbEstimate, estimate_bmsb
from .bounds import BoundInputs, lse_burn_in, lse_error_bound, sme_diameter_bound, sme_m_choice
from .experiments import (
    CANNED_FIGURES,
    ConfigError,
    ExperimentConfig,
    SweepResult,
    build_system,
    canned_config,
    resolve_bmsb,
    run_sweep,
)
from .models import simulate
from .noise import component_std, tightness_coefficient

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
FAILED_TRIAL_BUDGET = 0.10


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="nlsysid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to a TOML experiment config")
        p.add_argument("--seed", type=int, help="override the config root seed")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    common(sub.add_parser("simulate", help="dump one simulated trajectory"))
    common(sub.add_parser("lse-sweep", help="least-squares convergence sweep"))
    common(sub.add_parser("sme-sweep", help="membership-set convergence sweep"))
    common(sub.add_parser("bmsb-estimate", help="estimate excitation constants"))
    common(sub.add_parser("bounds", help="evaluate bound curves from saved constants"))
    repro = sub.add_parser("reproduce", help="run a canned study configuration")
    repro.add_argument("figure_id", choices=sorted(CANNED_FIGURES))
    common(repro)
    return parser


def _load_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this subcommand")
    cfg = ExperimentConfig.from_toml(args.config)
    if args.seed is not None:
        raw = cfg.to_dict()
        raw["sweep"]["seed"] = int(args.seed)
        cfg = ExperimentConfig.from_dict(raw)
    return cfg


def _write(out_dir: str, name: str, text: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    target.write_text(text, encoding="utf-8")
    return target


def _emit_sweep(result: SweepResult, args, stem: str) -> int:
    if args.format == "csv":
        _write(args.out, f"{stem}.csv", result.to_csv())
    else:
        payload = result.meta()
        payload["records"] = [
            {k: (None if isinstance(v, float) and math.isnan(v) else v)
             for k, v in rec.items()}
            for rec in result.records
        ]
        _write(args.out, f"{stem}.json", json.dumps(payload, indent=2, sort_keys=True))
    _write(args.out, f"{stem}.meta.json", result.to_meta_json())
    for proj in result.projections:
        name = f"{stem}_proj{proj['pair'][0]}-{proj['pair'][1]}_T{proj['T']}.json"
        _write(args.out, name, json.dumps(proj, indent=2, sort_keys=True))
    if result.failure_fraction > FAILED_TRIAL_BUDGET:
        print(
            f"{len(result.failures)}/{result.config.trials} trials failed",
            file=sys.stderr,
        )
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    model, policy = build_system(cfg)
    horizon = cfg.sim_horizon or cfg.t_grid[-1]
    traj = simulate(
        model, policy, cfg.disturbance, horizon, cfg.seed,
        guard_radius=cfg.guard_radius,
    )
    n_x, n_u = model.dims.n_x, model.dims.n_u
    if args.format == "csv":
        header = (
            ["t"]
            + [f"x{i}" for i in range(n_x)]
            + [f"u{i}" for i in range(n_u)]
            + [f"w{i}" for i in range(n_x)]
        )
        lines = [",".join(header)]
        for t in range(horizon + 1):
            row = [str(t)] + [repr(float(v)) for v in traj.states[t]]
            if t < horizon:
                row += [repr(float(v)) for v in traj.inputs[t]]
                row += [repr(float(v)) for v in traj.disturbances[t]]
            else:
                row += [""] * (n_u + n_x)
            lines.append(",".join(row))
        _write(args.out, "trajectory.csv", "\n".join(lines) + "\n")
    else:
        payload = {
            "states": traj.states.tolist(),
            "inputs": traj.inputs.tolist(),
            "disturbances": traj.disturbances.tolist(),
            "guard_tripped": traj.guard_tripped,
            "config_hash": cfg.hash(),
        }
        _write(args.out, "trajectory.json", json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_sweep(args, estimator: str) -> int:
    cfg = _load_config(args)
    if cfg.estimators != (estimator,):
        raw = cfg.to_dict()
        raw["sweep"]["estimators"] = [estimator]
        cfg = ExperimentConfig.from_dict(raw)
    result = run_sweep(cfg)
    return _emit_sweep(result, args, f"{estimator}-sweep")


def _cmd_bmsb(args) -> int:
    cfg = _load_config(args)
    model, policy = build_system(cfg)
    opts = dict(cfg.bmsb_options)
    opts.pop("load", None)
    kwargs = {
        "horizon": int(opts.get("horizon", 50)),
        "n_traj": int(opts.get("n_traj", 20)),
        "n_dirs": int(opts.get("n_dirs", 1000)),
        "n_mc": int(opts.get("n_mc", 200)),
        "seed": int(opts.get("seed", cfg.seed)),
    }
    if "s_grid" in opts:
        kwargs["s_grid"] = tuple(float(s) for s in opts["s_grid"])
    estimate = estimate_bmsb(model, policy, cfg.disturbance, **kwargs)
    _write(args.out, "bmsb.json", estimate.to_json() + "\n")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    cfg = _load_config(args)
    load = cfg.bmsb_options.get("load")
    if not load:
        raise ConfigError(
            "the bounds subcommand needs a saved constants file: "
            "set the 'load' field of the [bmsb] config section"
        )
    try:
        bmsb = BmsbEstimate.from_json(Path(load).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"bmsb estimate file not found: {load}") from exc
    except (KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"bmsb estimate file {load} is invalid: {exc}") from exc
    model, _ = build_system(cfg)
    sigma_w = component_std(cfg.disturbance)
    c_w = tightness_coefficient(cfg.disturbance)
    delta = float(cfg.bound_options.get("delta", 0.05))
    epsilon = float(cfg.bound_options.get("epsilon", 0.05))
    norm2 = float(np.linalg.norm(model.theta.entries, 2))
    frob = float(np.linalg.norm(model.theta.entries, "fro"))
    lines = ["T,theo_lse,theo_sme,theo_lse_norm,theo_sme_norm"]
    for t in cfg.t_grid:
        base = dict(
            n_x=model.dims.n_x, n_phi=model.dims.n_phi, sigma_w=sigma_w,
            bmsb=bmsb, c_w=c_w, horizon=t,
        )
        lse_inp = BoundInputs(confidence=delta, **base)
        lse_val = (
            lse_error_bound(lse_inp) if t >= lse_burn_in(lse_inp) else math.nan
        )
        sme_inp = BoundInputs(confidence=epsilon, **base)
        m = sme_m_choice(sme_inp)
        if t > m:
            sme_val = sme_diameter_bound(
                BoundInputs(confidence=epsilon, block_length=m, **base)
            )
        else:
            sme_val = math.nan
        cells = [lse_val, sme_val, lse_val / norm2, sme_val / frob]
        lines.append(
            ",".join([str(t)] + ["" if math.isnan(v) else repr(v) for v in cells])
        )
    _write(args.out, "bounds.csv", "\n".join(lines) + "\n")
    meta = {
        "config_hash": cfg.hash(),
        "bmsb": json.loads(bmsb.to_json()),
        "sigma_w": sigma_w,
        "c_w": c_w,
        "delta": delta,
        "epsilon": epsilon,
        "normalizers": {"theta_spectral_norm": norm2, "theta_frobenius_norm": frob},
    }
    _write(args.out, "bounds.meta.json", json.dumps(meta, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    cfg = canned_config(args.figure_id, seed=args.seed)
    result = run_sweep(cfg)
    return _emit_sweep(result, args, args.figure_id)


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "lse-sweep":
            return _cmd_sweep(args, "lse")
        if args.command == "sme-sweep":
            return _cmd_sweep(args, "sme")
        if args.command == "bmsb-estimate":
            return _cmd_bmsb(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "reproduce":
            return _cmd_reproduce(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
