"""Batch experiment runners: synthetic sweeps, frozen-feature pipeline, diagnostics.

Every runner is deterministic given its spec: trial seeds derive from the
swept values rather than grid positions, rows are sorted by (grid point,
trial, estimator) before writing, and the CSV wall_time_s field is left
empty so byte-identical reruns hold (timings stay on the in-memory rows).
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import math
import os
from typing import Optional

import numpy as np

from . import dataio
from .data import (
    PreferenceDataset,
    check_incoherence,
    check_submatrix_nonsingularity,
    refute_restricted_eigenvalue,
    seminorm_sq,
)
from .diagnostics import verify_kl_bound
from .errors import CapacityError, DataFormatError
from .estimators import (
    SUPPORT_ENUM_CAP,
    EstimatorConfig,
    accuracy,
    beta_schedule,
    empirical_error,
    fit_l0,
    fit_l1,
    fit_ml,
)
from .model import ModelConstants, get_link
from .synthetic import SyntheticSpec, derive_trial_seed, gen_dataset, philox_generator

CSV_COLUMNS = (
    "kind", "n", "d", "k", "sigma", "beta", "seed", "estimator",
    "error_sigma_norm", "error_l2", "accuracy", "sparsity_ratio",
    "iterations", "converged", "wall_time_s",
)

KNOWN_ESTIMATORS = ("ml", "l1", "l0")


def _fmt(x) -> str:
    return format(float(x), ".17g")


@dataclasses.dataclass
class ResultRow:
    kind: str
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    sigma: Optional[float] = None
    beta: Optional[float] = None
    seed: Optional[int] = None
    estimator: str = ""
    error_sigma_norm: Optional[float] = None
    error_l2: Optional[float] = None
    accuracy: Optional[float] = None
    sparsity_ratio: Optional[float] = None
    iterations: Optional[int] = None
    converged: Optional[bool] = None
    wall_time_s: Optional[float] = None

    def to_csv(self) -> str:
        cells = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if v is None or col == "wall_time_s":  # timings break byte determinism
                cells.append("")
            elif col == "converged":
                cells.append("true" if v else "false")
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            elif isinstance(v, float):
                cells.append(_fmt(v))
            else:
                cells.append(str(v))
        return ",".join(cells)


def write_rows(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(row.to_csv() + "\n")


def read_rows(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n")
        if header.split(",") != list(CSV_COLUMNS):
            raise DataFormatError(f"line 1: unexpected result header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            toks = line.split(",")
            if len(toks) != len(CSV_COLUMNS):
                raise DataFormatError(
                    f"line {lineno}: expected {len(CSV_COLUMNS)} columns, got {len(toks)}"
                )
            vals = dict(zip(CSV_COLUMNS, toks))
            try:
                rows.append(ResultRow(
                    kind=vals["kind"],
                    n=int(vals["n"]) if vals["n"] else None,
                    d=int(vals["d"]) if vals["d"] else None,
                    k=int(vals["k"]) if vals["k"] else None,
                    sigma=float(vals["sigma"]) if vals["sigma"] else None,
                    beta=float(vals["beta"]) if vals["beta"] else None,
                    seed=int(vals["seed"]) if vals["seed"] else None,
                    estimator=vals["estimator"],
                    error_sigma_norm=float(vals["error_sigma_norm"]) if vals["error_sigma_norm"] else None,
                    error_l2=float(vals["error_l2"]) if vals["error_l2"] else None,
                    accuracy=float(vals["accuracy"]) if vals["accuracy"] else None,
                    sparsity_ratio=float(vals["sparsity_ratio"]) if vals["sparsity_ratio"] else None,
                    iterations=int(vals["iterations"]) if vals["iterations"] else None,
                    converged={"true": True, "false": False}.get(vals["converged"]),
                    wall_time_s=float(vals["wall_time_s"]) if vals["wall_time_s"] else None,
                ))
            except ValueError:
                raise DataFormatError(f"line {lineno}: malformed value") from None
    return rows


def log_grid(lo: float, hi: float, step: float) -> tuple:
    """Inclusive uniform grid; count derived from the step to avoid drift."""
    count = int(round((hi - lo) / step)) + 1
    if count < 1:
        raise ValueError(f"empty grid [{lo}, {hi}] step {step}")
    return tuple(float(v) for v in np.linspace(lo, hi, count))


DEFAULT_K_GRID = (1, 2, 5, 10, 20, 50, 100)
DEFAULT_N_GRID = (100, 200, 400, 800, 1600, 3200)
DEFAULT_LOG10_N = (1.0, 5.0, 0.25)
DEFAULT_LOG10_BETA = (-4.0, 0.0, 0.25)


@dataclasses.dataclass(frozen=True)
class ExperimentSpec:
    """Everything a sweep needs; identical specs give byte-identical CSVs."""

    kind: str
    d: int = 100
    sigma: float = 0.1
    link: str = "btl"
    repetitions: int = 20
    base_seed: int = 0
    estimators: tuple = ("ml", "l1")
    n_grid: tuple = ()
    k_grid: tuple = ()
    beta_grid: tuple = ()
    beta: float = 0.1
    beta_rule: str = "practical"
    c: float = 1.0
    solver: EstimatorConfig = dataclasses.field(default_factory=EstimatorConfig)
    threads: int = 1
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if not self.estimators:
            raise ValueError("estimators must be nonempty")
        for est in self.estimators:
            if est not in KNOWN_ESTIMATORS:
                raise ValueError(f"unknown estimator {est!r}")
        get_link(self.link)
        if "l0" in self.estimators:
            k_max = max(self.k_grid) if self.k_grid else self.d
            total = sum(math.comb(self.d, m) for m in range(0, k_max + 1))
            if total > SUPPORT_ENUM_CAP:
                raise CapacityError(
                    f"l0 with d={self.d}, k={k_max} needs {total} supports, "
                    f"over the enumeration cap {SUPPORT_ENUM_CAP}"
                )


def sparsity_curve_spec(**overrides) -> ExperimentSpec:
    base = dict(kind="sparsity_curve", k_grid=DEFAULT_K_GRID, n_grid=(100,),
                beta=0.1, repetitions=20)
    base.update(overrides)
    return ExperimentSpec(**base)


def rate_curve_spec(**overrides) -> ExperimentSpec:
    base = dict(kind="rate_curve", n_grid=DEFAULT_N_GRID, k_grid=(5,),
                beta_rule="practical", c=1.0, repetitions=20)
    base.update(overrides)
    return ExperimentSpec(**base)


def beta_contour_spec(**overrides) -> ExperimentSpec:
    log_n = overrides.pop("log10_n", DEFAULT_LOG10_N)
    log_beta = overrides.pop("log10_beta", DEFAULT_LOG10_BETA)
    base = dict(
        kind="beta_contour",
        n_grid=tuple(int(round(10.0 ** v)) for v in log_grid(*log_n)),
        beta_grid=tuple(10.0 ** v for v in log_grid(*log_beta)),
        k_grid=(5,),
        repetitions=5,
        estimators=("l1",),
    )
    base.update(overrides)
    return ExperimentSpec(**base)


def frozen_features_spec(**overrides) -> ExperimentSpec:
    base = dict(kind="frozen_features", sigma=1.0, c=0.5, estimators=("l1", "ml"),
                repetitions=1)
    base.update(overrides)
    return ExperimentSpec(**base)


@dataclasses.dataclass
class RunResult:
    spec: ExperimentSpec
    rows: list
    summary: dict

    def write(self, path=None):
        path = path or self.spec.output_path
        if path is None:
            raise ValueError("no output path given")
        write_rows(path, self.rows)
        return path


def _fit_one(estimator, dataset, link, sigma, beta, k, solver):
    if estimator == "ml":
        return fit_ml(dataset, link, sigma, solver), None
    if estimator == "l1":
        if beta is None:
            raise ValueError("l1 estimator needs a beta value")
        return fit_l1(dataset, link, sigma, dataclasses.replace(solver, beta=beta)), beta
    if estimator == "l0":
        return fit_l0(dataset, link, sigma, k, solver), None
    raise ValueError(f"unknown estimator {estimator!r}")


def run_trial(
    d: int,
    k: int,
    n: int,
    sigma: float,
    link,
    seed: int,
    estimator: str,
    beta: Optional[float] = None,
    solver: EstimatorConfig = EstimatorConfig(),
    kind: str = "trial",
) -> ResultRow:
    """One (grid point, seed, estimator) cell, regenerated from scratch.

    This is the reproduction path for any synthetic ResultRow: the seed
    column plus the swept columns fully determine the dataset and the fit.
    """
    spec = SyntheticSpec(d=d, k=k, n=n, sigma=sigma, link=get_link(link).kind, seed=seed)
    dataset, theta_star = gen_dataset(spec, keep_pairs=False)
    report, used_beta = _fit_one(estimator, dataset, link, sigma, beta, k, solver)
    return _metrics_row(kind, spec, dataset, theta_star, estimator, used_beta, report, seed)


def _metrics_row(kind, spec, dataset, theta_star, estimator, beta, report, seed):
    return ResultRow(
        kind=kind,
        n=spec.n,
        d=spec.d,
        k=spec.k,
        sigma=spec.sigma,
        beta=beta,
        seed=seed,
        estimator=estimator,
        error_sigma_norm=empirical_error(report.theta_hat, theta_star, dataset.gram),
        error_l2=float(np.linalg.norm(report.theta_hat.values - theta_star.values)),
        accuracy=accuracy(report.theta_hat, dataset),
        sparsity_ratio=report.theta_hat.sparsity_ratio,
        iterations=report.iterations,
        converged=report.converged,
        wall_time_s=report.wall_time_s,
    )


def _execute(tasks, threads):
    """Run keyed tasks, return rows sorted by their keys."""
    workers = threads if threads > 0 else (os.cpu_count() or 1)
    keyed = []
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            keyed.extend(task())
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(lambda t: t(), tasks):
                keyed.extend(part)
    keyed.sort(key=lambda kr: kr[0])
    return [row for _, row in keyed]


def _estimator_beta(spec: ExperimentSpec, n: int):
    if spec.beta_rule == "practical":
        return beta_schedule("practical", n, c=spec.c)
    if spec.beta_rule == "fixed":
        return spec.beta
    raise ValueError(f"unknown beta_rule {spec.beta_rule!r}")


def run_sparsity_curve(spec: ExperimentSpec) -> RunResult:
    """Error versus true sparsity at fixed n: fresh data per (k, trial)."""
    if spec.kind != "sparsity_curve":
        raise ValueError(f"spec kind {spec.kind!r} is not sparsity_curve")
    if not spec.k_grid or len(spec.n_grid) != 1:
        raise ValueError("sparsity_curve needs a k grid and a single n")
    n = spec.n_grid[0]

    def make_task(ki, k):
        def task():
            out = []
            for t in range(spec.repetitions):
                seed = derive_trial_seed(spec.base_seed, spec.d, k, n, spec.sigma,
                                         spec.link, t)
                sy = SyntheticSpec(d=spec.d, k=k, n=n, sigma=spec.sigma,
                                   link=spec.link, seed=seed)
                dataset, theta_star = gen_dataset(sy, keep_pairs=False)
                for est in spec.estimators:
                    beta = spec.beta if est == "l1" else None
                    rep, used_beta = _fit_one(est, dataset, spec.link, spec.sigma,
                                              beta, k, spec.solver)
                    row = _metrics_row(spec.kind, sy, dataset, theta_star, est,
                                       used_beta, rep, seed)
                    out.append(((ki, 0, t, est), row))
            return out
        return task

    rows = _execute([make_task(ki, k) for ki, k in enumerate(spec.k_grid)], spec.threads)
    summary = {"mean_error": _mean_by(rows, ("k", "estimator"), "error_sigma_norm")}
    result = RunResult(spec=spec, rows=rows, summary=summary)
    if spec.output_path:
        result.write()
    return result


def run_rate_curve(spec: ExperimentSpec) -> RunResult:
    """Error versus n at fixed k, beta = c / sqrt(n); fits a log-log slope."""
    if spec.kind != "rate_curve":
        raise ValueError(f"spec kind {spec.kind!r} is not rate_curve")
    if not spec.n_grid or len(spec.k_grid) != 1:
        raise ValueError("rate_curve needs an n grid and a single k")
    k = spec.k_grid[0]

    def make_task(ni, n):
        def task():
            beta = _estimator_beta(spec, n)
            out = []
            for t in range(spec.repetitions):
                seed = derive_trial_seed(spec.base_seed, spec.d, k, n, spec.sigma,
                                         spec.link, t)
                sy = SyntheticSpec(d=spec.d, k=k, n=n, sigma=spec.sigma,
                                   link=spec.link, seed=seed)
                dataset, theta_star = gen_dataset(sy, keep_pairs=False)
                for est in spec.estimators:
                    rep, used_beta = _fit_one(est, dataset, spec.link, spec.sigma,
                                              beta if est == "l1" else None, k,
                                              spec.solver)
                    row = _metrics_row(spec.kind, sy, dataset, theta_star, est,
                                       used_beta, rep, seed)
                    out.append(((ni, 0, t, est), row))
            return out
        return task

    rows = _execute([make_task(ni, n) for ni, n in enumerate(spec.n_grid)], spec.threads)
    means = _mean_by(rows, ("n", "estimator"), "error_sigma_norm")
    slopes = {}
    for est in spec.estimators:
        ns = np.array([n for (n, e) in means if e == est], dtype=float)
        errs = np.array([means[(n, e)] for (n, e) in means if e == est])
        if len(ns) >= 2 and np.all(errs > 0):
            slopes[est] = float(np.polyfit(np.log(ns), np.log(errs), 1)[0])
        else:
            slopes[est] = float("nan")
    result = RunResult(spec=spec, rows=rows, summary={"mean_error": means, "slope": slopes})
    if spec.output_path:
        result.write()
    return result


def run_beta_contour(spec: ExperimentSpec) -> RunResult:
    """Mean error over an (n, beta) grid; reports the argmin-beta valley slope.

    One dataset per (n, trial) shared across the beta column; each fit starts
    cold so any single cell is reproducible in isolation via run_trial.
    """
    if spec.kind != "beta_contour":
        raise ValueError(f"spec kind {spec.kind!r} is not beta_contour")
    if not spec.n_grid or not spec.beta_grid or len(spec.k_grid) != 1:
        raise ValueError("beta_contour needs n, beta grids and a single k")
    if tuple(spec.estimators) != ("l1",):
        raise ValueError("beta_contour sweeps the l1 penalty; set estimators=('l1',)")
    k = spec.k_grid[0]

    def make_task(ni, n):
        def task():
            out = []
            for t in range(spec.repetitions):
                seed = derive_trial_seed(spec.base_seed, spec.d, k, n, spec.sigma,
                                         spec.link, t)
                sy = SyntheticSpec(d=spec.d, k=k, n=n, sigma=spec.sigma,
                                   link=spec.link, seed=seed)
                dataset, theta_star = gen_dataset(sy, keep_pairs=False)
                for bi, beta in enumerate(spec.beta_grid):
                    rep, used_beta = _fit_one("l1", dataset, spec.link, spec.sigma,
                                              beta, k, spec.solver)
                    row = _metrics_row(spec.kind, sy, dataset, theta_star, "l1",
                                       used_beta, rep, seed)
                    out.append(((ni, bi, t, "l1"), row))
            return out
        return task

    rows = _execute([make_task(ni, n) for ni, n in enumerate(spec.n_grid)], spec.threads)
    means, argmin, slope = contour_summary(rows)
    summary = {"mean_error": means, "argmin_beta": argmin, "valley_slope": slope}
    result = RunResult(spec=spec, rows=rows, summary=summary)
    if spec.output_path:
        result.write()
    return result


def run_frozen_features(spec: ExperimentSpec, train_file, test_file) -> RunResult:
    """Fit the l1 head and the unpenalized baseline on frozen embeddings.

    beta = c / sqrt(n_train); accuracy is measured on the held-out file.
    """
    if spec.kind != "frozen_features":
        raise ValueError(f"spec kind {spec.kind!r} is not frozen_features")
    train = dataio.read_dataset(train_file)
    test = dataio.read_dataset(test_file)
    if train.d != test.d:
        raise ValueError(
            f"train dimension {train.d} does not match test dimension {test.d}"
        )
    beta = beta_schedule("practical", train.n, c=spec.c)
    rows = []
    for est in sorted(set(spec.estimators)):
        if est == "l0":
            raise ValueError("frozen_features supports the ml and l1 estimators")
        rep, used_beta = _fit_one(est, train, spec.link, spec.sigma,
                                  beta if est == "l1" else None, 0, spec.solver)
        rows.append(ResultRow(
            kind=spec.kind,
            n=train.n,
            d=train.d,
            sigma=spec.sigma,
            beta=used_beta,
            estimator=est,
            accuracy=accuracy(rep.theta_hat, test),
            sparsity_ratio=rep.theta_hat.sparsity_ratio,
            iterations=rep.iterations,
            converged=rep.converged,
            wall_time_s=rep.wall_time_s,
        ))
    summary = {
        "beta": beta,
        "test_accuracy": {r.estimator: r.accuracy for r in rows},
        "sparsity_ratio": {r.estimator: r.sparsity_ratio for r in rows},
    }
    result = RunResult(spec=spec, rows=rows, summary=summary)
    if spec.output_path:
        result.write()
    return result


def _mean_by(rows, key_fields, value_field):
    """Group rows in order and average; same arithmetic the plots embed."""
    groups = {}
    for row in rows:
        key = tuple(getattr(row, f) for f in key_fields)
        v = getattr(row, value_field)
        if v is not None:
            groups.setdefault(key, []).append(v)
    return {key: float(np.mean(np.asarray(vals))) for key, vals in groups.items()}


@dataclasses.dataclass
class DiagnoseReport:
    constants: list  # ModelConstants for both links at the reference scales
    submatrix: object
    incoherence: object
    restricted_eig: object
    kl_pairs: int
    kl_holds: int
    kl_max_ratio: float
    k: int
    data_shape: tuple

    def csv_rows(self):
        out = []
        for c in self.constants:
            for name in ("zeta", "gamma", "omega"):
                out.append(("constants", name, c.link, _fmt(getattr(c, name)), "", "", ""))
        s = self.submatrix
        out.append(("check", "submatrix_nonsingularity", "", _fmt(s.worst_sigma_min),
                    _fmt(1e-10), "true" if s.passed else "false",
                    "worst_subset=" + "|".join(str(i) for i in s.worst_subset)))
        i = self.incoherence
        out.append(("check", "incoherence", "", _fmt(i.max_abs_deviation),
                    _fmt(i.threshold), "true" if i.passed else "false", ""))
        r = self.restricted_eig
        out.append(("check", "restricted_eigenvalue", "", _fmt(r.min_ratio), _fmt(0.5),
                    "false" if r.refuted else "true",
                    "refuted" if r.refuted else "not_refuted_searched_only"))
        ratio = self.kl_max_ratio
        out.append(("check", "kl_bound", "", _fmt(ratio), _fmt(1.0),
                    "true" if self.kl_holds == self.kl_pairs else "false",
                    f"held_on={self.kl_holds}_of_{self.kl_pairs}"))
        return out

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("section,name,link,value,threshold,passed,detail\n")
            for row in self.csv_rows():
                fh.write(",".join(row) + "\n")
        return path

    def text(self) -> str:
        lines = ["model constants (B=L=sigma=1):"]
        lines.append(f"  {'link':<5} {'zeta':>10} {'gamma':>10} {'omega':>10}")
        for c in self.constants:
            lines.append(f"  {c.link:<5} {c.zeta:>10.4f} {c.gamma:>10.4f} {c.omega:>10.4f}")
        n, d = self.data_shape
        lines.append(f"dataset: n={n}, d={d}, k={self.k}")
        s = self.submatrix
        lines.append(
            f"  submatrix nonsingularity: {'pass' if s.passed else 'FAIL'} "
            f"(worst sigma_min {s.worst_sigma_min:.3e} on subset {list(s.worst_subset)}, "
            f"{s.subsets_checked} subsets)"
        )
        i = self.incoherence
        lines.append(
            f"  incoherence: {'pass' if i.passed else 'FAIL'} "
            f"(max deviation {i.max_abs_deviation:.4f}, threshold {i.threshold:.4f})"
        )
        r = self.restricted_eig
        verdict = "REFUTED" if r.refuted else "not refuted (search only)"
        lines.append(f"  restricted eigenvalue >= 1/2: {verdict} (min ratio {r.min_ratio:.4f})")
        lines.append(
            f"  kl bound: held on {self.kl_holds}/{self.kl_pairs} pairs "
            f"(max kl/bound {self.kl_max_ratio:.4f})"
        )
        return "\n".join(lines)


def run_diagnose(
    dataset: Optional[PreferenceDataset] = None,
    k: int = 2,
    link="btl",
    sigma: float = 1.0,
    b_radius: float = 1.0,
    seed: int = 0,
    re_trials: int = 200,
    kl_pairs: int = 200,
    synth: Optional[SyntheticSpec] = None,
) -> DiagnoseReport:
    """Constants table plus design-matrix and bound checks on one dataset.

    Without a dataset, a small synthetic one is generated. The reference
    constants table is always at B=L=sigma=1; the KL bound check uses the
    dataset's realized feature radius as L so the bound applies as stated.
    """
    if dataset is None:
        synth = synth or SyntheticSpec(d=8, k=k, n=200, sigma=sigma, seed=seed)
        dataset, _ = gen_dataset(synth, keep_pairs=False)
    constants = [ModelConstants.compute("btl"), ModelConstants.compute("tm")]
    sub = check_submatrix_nonsingularity(dataset, k)
    inc = check_incoherence(dataset.gram, k)
    re_rep = refute_restricted_eigenvalue(
        dataset.gram, k, trials=re_trials, rng=philox_generator(seed, 1)
    )
    kl_consts = ModelConstants.compute(link, B=b_radius,
                                       L=max(dataset.feature_radius(), 1e-12),
                                       sigma=sigma)
    rng = philox_generator(seed, 2)
    held = 0
    max_ratio = 0.0
    for _ in range(kl_pairs):
        t1 = _uniform_ball(rng, dataset.d, b_radius)
        t2 = _uniform_ball(rng, dataset.d, b_radius)
        rep = verify_kl_bound(t1, t2, dataset, link, kl_consts)
        if rep.holds:
            held += 1
        if rep.bound > 0:
            max_ratio = max(max_ratio, rep.kl / rep.bound)
    return DiagnoseReport(
        constants=constants,
        submatrix=sub,
        incoherence=inc,
        restricted_eig=re_rep,
        kl_pairs=kl_pairs,
        kl_holds=held,
        kl_max_ratio=max_ratio,
        k=k,
        data_shape=(dataset.n, dataset.d),
    )


def _uniform_ball(rng, d, radius):
    v = rng.standard_normal(d)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        return np.zeros(d)
    return v * (radius * rng.random() ** (1.0 / d) / nrm)


def contour_summary(rows):
    """(means, argmin_beta, slope) recomputed from contour rows alone."""
    means = _mean_by(rows, ("n", "beta"), "error_sigma_norm")
    n_values = sorted({r.n for r in rows})
    beta_values = sorted({r.beta for r in rows})
    argmin = {}
    for n in n_values:
        col = [(means[(n, b)], bi, b) for bi, b in enumerate(beta_values)
               if (n, b) in means]
        argmin[n] = min(col)[2]
    slope = float("nan")
    if len(n_values) >= 2:
        ns = np.array(n_values, dtype=float)
        bs = np.array([argmin[n] for n in n_values])
        slope = float(np.polyfit(np.log10(ns), np.log10(bs), 1)[0])
    return means, argmin, slope


def emit_plots(rows, output_dir):
    """Write one SVG per experiment kind found in the table.

    Values embedded in data-* attributes are the same 17-digit strings the
    CSV carries (per-cell means recomputed with identical arithmetic).
    """
    from . import svgplot

    if not rows:
        raise ValueError("empty result table: nothing to plot")
    os.makedirs(output_dir, exist_ok=True)
    by_kind = {}
    for row in rows:
        by_kind.setdefault(row.kind, []).append(row)
    written = []

    if "sparsity_curve" in by_kind:
        part = by_kind["sparsity_curve"]
        d = part[0].d
        means = _mean_by(part, ("k", "estimator"), "error_sigma_norm")
        series = []
        for est in sorted({r.estimator for r in part}):
            ks = sorted({k for (k, e) in means if e == est})
            series.append((est, [k / d for k in ks], [means[(k, est)] for k in ks]))
        written.append(svgplot.line_plot(
            os.path.join(output_dir, "sparsity_curve.svg"), series,
            xlabel="k / d", ylabel="estimation error",
            title=f"error vs sparsity (d={d})",
        ))

    if "rate_curve" in by_kind:
        part = by_kind["rate_curve"]
        means = _mean_by(part, ("n", "estimator"), "error_sigma_norm")
        series = []
        for est in sorted({r.estimator for r in part}):
            ns = sorted({n for (n, e) in means if e == est})
            series.append((est, list(map(float, ns)), [means[(n, est)] for n in ns]))
        written.append(svgplot.line_plot(
            os.path.join(output_dir, "rate_curve.svg"), series,
            xlabel="n", ylabel="estimation error",
            title="error vs sample size", logx=True, logy=True,
        ))

    if "beta_contour" in by_kind:
        part = by_kind["beta_contour"]
        means, argmin, slope = contour_summary(part)
        n_values = sorted({r.n for r in part})
        beta_values = sorted({r.beta for r in part})
        xs = [math.log10(n) for n in n_values]
        ys = [math.log10(b) for b in beta_values]
        matrix = []
        attrs = []
        for b in beta_values:
            matrix.append([means.get((n, b)) for n in n_values])
            attrs.append([{"n": n, "beta": _fmt(b)} for n in n_values])
        points = [(math.log10(n), math.log10(argmin[n])) for n in n_values]
        line = None
        if len(n_values) >= 2 and not math.isnan(slope):
            coef = np.polyfit([p[0] for p in points], [p[1] for p in points], 1)
            line = (
                (xs[0], float(np.polyval(coef, xs[0]))),
                (xs[-1], float(np.polyval(coef, xs[-1]))),
            )
        written.append(svgplot.heatmap(
            os.path.join(output_dir, "beta_contour.svg"), xs, ys, matrix,
            xlabel="log10 n", ylabel="log10 beta",
            title="estimation error contour",
            cell_attrs=attrs, overlay_points=points, overlay_line=line,
        ))

    if not written:
        raise ValueError(
            f"no plottable kinds in table (found {sorted(by_kind)}); "
            "expected sparsity_curve, rate_curve, or beta_contour rows"
        )
    return written
