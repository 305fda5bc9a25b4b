"""Command-line front end.

Exit codes: 0 success, 2 configuration or parse problem, 3 enumeration
capacity exceeded, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import dataio
from .config import ConfigError, deep_merge, load_config, parse_overrides
from .errors import CapacityError, DataFormatError
from .estimators import EstimatorConfig, accuracy, beta_schedule, fit_l0, fit_l1, fit_ml
from .experiments import (
    ExperimentSpec,
    ResultRow,
    beta_contour_spec,
    emit_plots,
    frozen_features_spec,
    rate_curve_spec,
    read_rows,
    run_beta_contour,
    run_diagnose,
    run_frozen_features,
    run_rate_curve,
    run_sparsity_curve,
    sparsity_curve_spec,
    write_rows,
)
from .synthetic import SyntheticSpec, gen_dataset

_SPEC_FIELDS = {f.name for f in dataclasses.fields(ExperimentSpec)} - {"kind", "solver"}
_SOLVER_FIELDS = {f.name for f in dataclasses.fields(EstimatorConfig)}
_GRID_KEYS = ("n_grid", "k_grid", "beta_grid", "estimators")

_FACTORIES = {
    "sparsity_curve": (sparsity_curve_spec, run_sparsity_curve, set()),
    "rate_curve": (rate_curve_spec, run_rate_curve, set()),
    "beta_contour": (beta_contour_spec, run_beta_contour, {"log10_n", "log10_beta"}),
}


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def build_spec(kind: str, cfg: dict) -> ExperimentSpec:
    cfg = dict(cfg)
    declared = cfg.pop("kind", kind)
    if declared != kind:
        raise ConfigError(f"config kind {declared!r} does not match command {kind!r}")
    solver_cfg = cfg.pop("solver", {})
    if not isinstance(solver_cfg, dict):
        raise ConfigError("solver must be a section of solver settings")
    unknown = set(solver_cfg) - _SOLVER_FIELDS
    if unknown:
        raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
    factory, _, extra_keys = _FACTORIES[kind]
    allowed = _SPEC_FIELDS | extra_keys
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, v in cfg.items():
        if isinstance(v, dict):
            raise ConfigError(f"{key} does not take a section")
    for key in _GRID_KEYS:
        if key in cfg:
            v = cfg[key]
            cfg[key] = tuple(v) if isinstance(v, (list, tuple)) else (v,)
    for key in ("log10_n", "log10_beta"):
        if key in cfg:
            v = cfg[key]
            if not isinstance(v, (list, tuple)) or len(v) != 3:
                raise ConfigError(f"{key} must be [low, high, step]")
            cfg[key] = tuple(float(x) for x in v)
    try:
        return factory(solver=EstimatorConfig(**solver_cfg), **cfg)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _merged_config(args, extra) -> dict:
    cfg: dict = {}
    if args.config:
        cfg = deep_merge(cfg, load_config(args.config))
    cfg = deep_merge(cfg, parse_overrides(extra))
    if args.seed is not None:
        cfg["base_seed"] = args.seed
    if args.threads is not None:
        cfg["threads"] = args.threads
    if args.out is not None:
        cfg["output_path"] = args.out
    return cfg


def _cmd_curve(kind):
    def run(args, extra):
        cfg = _merged_config(args, extra)
        cfg.setdefault("output_path", f"{kind}.csv")
        spec = build_spec(kind, cfg)
        _, runner, _ = _FACTORIES[kind]
        result = runner(spec)
        print(f"wrote {len(result.rows)} rows to {spec.output_path}")
        if kind == "rate_curve":
            for est, slope in result.summary["slope"].items():
                print(f"log-log error slope [{est}]: {slope:.4f}")
        elif kind == "beta_contour":
            print(f"argmin-beta valley slope: {result.summary['valley_slope']:.4f}")
            for n, b in result.summary["argmin_beta"].items():
                print(f"  n={n}: argmin beta = {b:.6g}")
        else:
            means = result.summary["mean_error"]
            for (k, est), v in means.items():
                print(f"  k={k} [{est}]: mean error {v:.6g}")
        return 0

    return run


def _cmd_frozen(args, extra):
    cfg = _merged_config(args, extra)
    cfg.setdefault("output_path", "frozen_features.csv")
    train = cfg.pop("train", args.train)
    test = cfg.pop("test", args.test)
    if not train or not test:
        raise ConfigError("frozen-features needs --train and --test files")
    solver_cfg = cfg.pop("solver", {})
    unknown = set(solver_cfg) - _SOLVER_FIELDS
    if unknown:
        raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
    unknown = set(cfg) - _SPEC_FIELDS - {"kind"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg.pop("kind", None)
    if args.c is not None:
        cfg["c"] = args.c
    if args.sigma is not None:
        cfg["sigma"] = args.sigma
    spec = frozen_features_spec(solver=EstimatorConfig(**solver_cfg), **cfg)
    result = run_frozen_features(spec, train, test)
    print(f"wrote {len(result.rows)} rows to {spec.output_path}")
    print(f"beta = {result.summary['beta']:.6g}")
    for est in sorted(result.summary["test_accuracy"]):
        acc = result.summary["test_accuracy"][est]
        sr = result.summary["sparsity_ratio"][est]
        print(f"  {est}: test accuracy {acc:.4f}, sparsity ratio {sr:.4f}")
    return 0


def _cmd_simulate(args, extra):
    if extra:
        raise ConfigError(f"unrecognized arguments: {' '.join(extra)}")
    spec = SyntheticSpec(d=args.d, k=args.k, n=args.n, sigma=args.sigma,
                         link=args.link, seed=args.seed or 0)
    dataset, theta = gen_dataset(spec, keep_pairs=True)
    dataio.write_dataset(args.out, dataset, format=args.format)
    if args.theta_out:
        with open(args.theta_out, "w", encoding="utf-8") as fh:
            json.dump({"theta_star": theta.values.tolist()}, fh)
            fh.write("\n")
    print(f"wrote {dataset.n} comparisons (d={dataset.d}) to {args.out}")
    return 0


def _cmd_fit(args, extra):
    if extra:
        raise ConfigError(f"unrecognized arguments: {' '.join(extra)}")
    dataset = dataio.read_dataset(args.data)
    solver = EstimatorConfig(b_radius=args.b_radius, max_iter=args.max_iter,
                             tol=args.tol)
    beta = None
    if args.estimator == "ml":
        report = fit_ml(dataset, args.link, args.sigma, solver)
    elif args.estimator == "l1":
        beta = args.beta if args.beta is not None else beta_schedule(
            "practical", dataset.n, c=args.c)
        report = fit_l1(dataset, args.link, args.sigma,
                        dataclasses.replace(solver, beta=beta))
    else:
        if args.k is None:
            raise ConfigError("--k is required for the l0 estimator")
        report = fit_l0(dataset, args.link, args.sigma, args.k, solver)
    theta = report.theta_hat
    print(f"estimator: {args.estimator}" + (f" (beta={beta:.6g})" if beta else ""))
    print(f"objective: {report.objective:.12g}")
    print(f"iterations: {report.iterations} (converged: {report.converged})")
    print(f"nonzeros: {theta.num_nonzero}/{theta.dim} "
          f"(ratio {theta.sparsity_ratio:.4f}), l2 norm {theta.l2:.6g}")
    head = [int(i) for i in theta.support[:10]]
    print(f"support head: {head}")
    print(f"train accuracy: {accuracy(theta, dataset):.4f}")
    if args.theta_out:
        with open(args.theta_out, "w", encoding="utf-8") as fh:
            json.dump({"theta_hat": theta.values.tolist()}, fh)
            fh.write("\n")
    if args.out:
        row = ResultRow(
            kind="fit", n=dataset.n, d=dataset.d, sigma=args.sigma, beta=beta,
            estimator=args.estimator, accuracy=accuracy(theta, dataset),
            sparsity_ratio=theta.sparsity_ratio, iterations=report.iterations,
            converged=report.converged, wall_time_s=report.wall_time_s,
        )
        write_rows(args.out, [row])
        print(f"wrote row to {args.out}")
    return 0


def _cmd_diagnose(args, extra):
    if extra:
        raise ConfigError(f"unrecognized arguments: {' '.join(extra)}")
    dataset = dataio.read_dataset(args.data) if args.data else None
    synth = None
    if dataset is None:
        synth = SyntheticSpec(d=args.d, k=args.k, n=args.n, sigma=args.sigma,
                              link=args.link, seed=args.seed or 0)
    report = run_diagnose(
        dataset=dataset, k=args.k, link=args.link, sigma=args.sigma,
        b_radius=args.b_radius, seed=args.seed or 0,
        re_trials=args.re_trials, kl_pairs=args.kl_pairs, synth=synth,
    )
    print(report.text())
    if args.out:
        report.write_csv(args.out)
        print(f"wrote report to {args.out}")
    return 0


def _cmd_plot(args, extra):
    if extra:
        raise ConfigError(f"unrecognized arguments: {' '.join(extra)}")
    rows = read_rows(args.data)
    for path in emit_plots(rows, args.out_dir):
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sparsepref",
        description="Sparse reward learning from pairwise comparisons.",
        allow_abbrev=False,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML experiment config")
        sp.add_argument("--seed", type=int, help="base seed")
        sp.add_argument("--out", help="output CSV path")
        sp.add_argument("--threads", type=int, help="worker pool size (0 = auto)")

    sim = sub.add_parser("simulate", help="generate a synthetic dataset file",
                         allow_abbrev=False)
    sim.add_argument("--d", type=int, required=True)
    sim.add_argument("--k", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--sigma", type=float, default=0.1)
    sim.add_argument("--link", default="btl", choices=("btl", "tm"))
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True)
    sim.add_argument("--format", choices=("csv", "jsonl"))
    sim.add_argument("--theta-out", help="write the true parameter as JSON")

    fit = sub.add_parser("fit", help="fit one estimator on a dataset file",
                         allow_abbrev=False)
    fit.add_argument("--data", required=True)
    fit.add_argument("--estimator", required=True, choices=("ml", "l1", "l0"))
    fit.add_argument("--beta", type=float, help="l1 penalty (default c/sqrt(n))")
    fit.add_argument("--c", type=float, default=0.5)
    fit.add_argument("--k", type=int, help="sparsity cap for l0")
    fit.add_argument("--sigma", type=float, default=1.0)
    fit.add_argument("--link", default="btl", choices=("btl", "tm"))
    fit.add_argument("--b-radius", type=float, default=2.0)
    fit.add_argument("--max-iter", type=int, default=10_000)
    fit.add_argument("--tol", type=float, default=1e-10)
    fit.add_argument("--out", help="write a one-row result CSV")
    fit.add_argument("--theta-out", help="write the fitted parameter as JSON")

    for name in ("sparsity-curve", "rate-curve", "beta-contour"):
        sp = sub.add_parser(name, help=f"run the {name.replace('-', ' ')} experiment",
                            allow_abbrev=False)
        common(sp)

    fro = sub.add_parser("frozen-features",
                         help="train an l1 head and a baseline on embedding files",
                         allow_abbrev=False)
    common(fro)
    fro.add_argument("--train", help="training embeddings (csv or jsonl)")
    fro.add_argument("--test", help="held-out embeddings")
    fro.add_argument("--c", type=float, help="beta = c / sqrt(n_train)")
    fro.add_argument("--sigma", type=float)

    dia = sub.add_parser("diagnose", help="model constants and dataset checks",
                         allow_abbrev=False)
    dia.add_argument("--data", help="dataset file (default: small synthetic)")
    dia.add_argument("--d", type=int, default=8)
    dia.add_argument("--n", type=int, default=200)
    dia.add_argument("--k", type=int, default=2)
    dia.add_argument("--sigma", type=float, default=1.0)
    dia.add_argument("--link", default="btl", choices=("btl", "tm"))
    dia.add_argument("--b-radius", type=float, default=1.0)
    dia.add_argument("--re-trials", type=int, default=200)
    dia.add_argument("--kl-pairs", type=int, default=200)
    dia.add_argument("--seed", type=int, default=0)
    dia.add_argument("--out", help="write the machine-readable report CSV")

    plo = sub.add_parser("plot", help="render SVG plots from a result CSV",
                         allow_abbrev=False)
    plo.add_argument("--data", required=True, help="result CSV from a runner")
    plo.add_argument("--out-dir", default="plots")

    return p


_DISPATCH = {
    "simulate": _cmd_simulate,
    "fit": _cmd_fit,
    "sparsity-curve": _cmd_curve("sparsity_curve"),
    "rate-curve": _cmd_curve("rate_curve"),
    "beta-contour": _cmd_curve("beta_contour"),
    "frozen-features": _cmd_frozen,
    "diagnose": _cmd_diagnose,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        return _DISPATCH[args.command](args, extra)
    except CapacityError as exc:
        _err(exc)
        return 3
    except (ConfigError, DataFormatError) as exc:
        _err(exc)
        return 2
    except (ValueError, TypeError) as exc:
        _err(exc)
        return 2
    except OSError as exc:
        _err(exc)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
