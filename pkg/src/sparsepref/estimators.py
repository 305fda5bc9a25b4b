"""Reward estimators: ball-constrained ML, l1-penalized, and support-enumerating l0."""

from __future__ import annotations

import dataclasses
import itertools
import math
import time
from typing import Optional

import numpy as np

from .data import IndexSet, PreferenceDataset, seminorm_sq
from .errors import CapacityError
from .loss import nll, nll_value_grad, restrict
from .model import ModelConstants, RewardParam, get_link

DEFAULT_B_RADIUS = 2.0
SUPPORT_ENUM_CAP = 100_000


@dataclasses.dataclass(frozen=True)
class EstimatorConfig:
    """Solver settings shared by all estimators.

    fixed_step disables backtracking when set; otherwise the step starts at
    step_init, shrinks by step_shrink until the sufficient-decrease test
    passes, and carries over between iterations.
    """

    b_radius: float = DEFAULT_B_RADIUS
    beta: float = 0.0
    max_iter: int = 10_000
    tol: float = 1e-10
    step_init: float = 1.0
    step_shrink: float = 0.5
    fixed_step: Optional[float] = None

    def __post_init__(self):
        if not self.b_radius > 0:
            raise ValueError(f"b_radius must be positive, got {self.b_radius}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if not 0 < self.step_shrink < 1:
            raise ValueError(f"step_shrink must be in (0, 1), got {self.step_shrink}")
        if not self.step_init > 0:
            raise ValueError(f"step_init must be positive, got {self.step_init}")
        if self.fixed_step is not None and not self.fixed_step > 0:
            raise ValueError(f"fixed_step must be positive, got {self.fixed_step}")


@dataclasses.dataclass
class EstimateReport:
    theta_hat: RewardParam
    converged: bool
    iterations: int
    objective_trace: np.ndarray
    wall_time_s: float

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1])

    @property
    def support(self) -> IndexSet:
        return IndexSet(self.theta_hat.support, self.theta_hat.dim)


def soft_threshold(v, a: float) -> np.ndarray:
    """Componentwise shrink toward zero by a (a >= 0)."""
    if a < 0:
        raise ValueError(f"threshold must be nonnegative, got {a}")
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - a, 0.0)


def project_ball(v, radius: float) -> np.ndarray:
    """Euclidean projection onto the l2 ball of the given radius."""
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    v = np.asarray(v, dtype=float)
    nrm = float(np.linalg.norm(v))
    if nrm <= radius:
        return v.copy()
    return v * (radius / nrm)


def prox_l1_ball(v, a: float, radius: float) -> np.ndarray:
    """Exact minimizer of (1/2)||z - v||^2 + a ||z||_1 over the radius ball.

    Soft-threshold then radial projection: the ball multiplier only rescales
    the thresholded vector, so the composition solves the joint problem.
    """
    return project_ball(soft_threshold(v, a), radius)


def _solve_prox_gradient(
    dataset: PreferenceDataset,
    link,
    sigma: float,
    cfg: EstimatorConfig,
    theta0: Optional[np.ndarray] = None,
):
    """Proximal gradient descent on nll + beta ||.||_1 over the b_radius ball."""
    start = time.perf_counter()
    B = cfg.b_radius
    beta = cfg.beta
    theta = np.zeros(dataset.d) if theta0 is None else project_ball(theta0, B)
    val, grad = nll_value_grad(theta, dataset, link, sigma)
    obj = val + beta * float(np.sum(np.abs(theta)))
    trace = [obj]
    eta = cfg.fixed_step if cfg.fixed_step is not None else cfg.step_init
    converged = False
    while len(trace) - 1 < cfg.max_iter:
        accepted = None
        while True:
            z = prox_l1_ball(theta - eta * grad, eta * beta, B)
            dz = z - theta
            gap = float(dz @ dz)
            if gap == 0.0:  # exact fixed point of the prox map
                converged = True
                break
            fz, gz = nll_value_grad(z, dataset, link, sigma)
            if cfg.fixed_step is not None or fz <= val + float(grad @ dz) + gap / (
                2.0 * eta
            ) + 1e-15 * max(1.0, abs(val)):
                accepted = (z, fz, gz)
                break
            eta *= cfg.step_shrink
            if eta < 1e-20:
                break
        if accepted is None:
            break
        z, fz, gz = accepted
        obj_z = fz + beta * float(np.sum(np.abs(z)))
        change = obj - obj_z
        if change < 0:  # descent exhausted at floating-point resolution
            converged = abs(change) <= cfg.tol * max(1.0, abs(obj))
            break
        trace.append(obj_z)
        theta, val, grad, obj = z, fz, gz, obj_z
        if change <= cfg.tol * max(1.0, abs(obj)):
            converged = True
            break
    return EstimateReport(
        theta_hat=RewardParam(theta),
        converged=converged,
        iterations=len(trace) - 1,
        objective_trace=np.asarray(trace),
        wall_time_s=time.perf_counter() - start,
    )


def fit_ml(
    dataset: PreferenceDataset,
    link,
    sigma: float,
    config: EstimatorConfig = EstimatorConfig(),
) -> EstimateReport:
    """Constrained maximum likelihood over the b_radius ball (no penalty)."""
    link = get_link(link)
    cfg = dataclasses.replace(config, beta=0.0)
    return _solve_prox_gradient(dataset, link, sigma, cfg)


def fit_l1(
    dataset: PreferenceDataset,
    link,
    sigma: float,
    config: EstimatorConfig,
) -> EstimateReport:
    """l1-penalized likelihood over the ball, at the penalty in config.beta."""
    link = get_link(link)
    return _solve_prox_gradient(dataset, link, sigma, config)


def fit_l0(
    dataset: PreferenceDataset,
    link,
    sigma: float,
    k: int,
    config: EstimatorConfig = EstimatorConfig(),
    cap: int = SUPPORT_ENUM_CAP,
) -> EstimateReport:
    """Exact support search: constrained ML on every support of size <= k.

    Exhaustive and exponential in k; raises CapacityError before starting
    when the support count exceeds the cap. Ties in objective go to the
    lexicographically smallest support.
    """
    link = get_link(link)
    start = time.perf_counter()
    d = dataset.d
    if not 0 <= k <= d:
        raise ValueError(f"k must be in [0, {d}], got {k}")
    total = sum(math.comb(d, m) for m in range(0, k + 1))
    if total > cap:
        raise CapacityError(
            f"{total} supports of size <= {k} exceed the enumeration cap {cap}"
        )
    cfg = dataclasses.replace(config, beta=0.0)
    best_obj = nll(np.zeros(d), dataset, link, sigma)
    best_support = ()
    best_report = EstimateReport(
        theta_hat=RewardParam(np.zeros(d)),
        converged=True,
        iterations=0,
        objective_trace=np.array([best_obj]),
        wall_time_s=0.0,
    )
    for m in range(1, k + 1):
        for S in itertools.combinations(range(d), m):
            sub = restrict(dataset, IndexSet(S, d))
            rep = _solve_prox_gradient(sub, link, sigma, cfg)
            obj = rep.objective
            if obj < best_obj or (obj == best_obj and S < best_support):
                theta = np.zeros(d)
                theta[list(S)] = rep.theta_hat.values
                best_obj = obj
                best_support = S
                best_report = EstimateReport(
                    theta_hat=RewardParam(theta),
                    converged=rep.converged,
                    iterations=rep.iterations,
                    objective_trace=rep.objective_trace,
                    wall_time_s=0.0,
                )
    best_report.wall_time_s = time.perf_counter() - start
    return best_report


def beta_schedule(
    rule: str,
    n: int,
    d: Optional[int] = None,
    delta: float = 0.1,
    constants: Optional[ModelConstants] = None,
    H: Optional[float] = None,
    c: float = 1.0,
) -> float:
    """Penalty level for fit_l1.

    * ``slow``: sqrt(2) omega H / sigma * sqrt((log 2d + log 1/delta) / n)
    * ``fast``: 4 omega / sigma * sqrt((log 2d + log 1/delta) / n)
    * ``practical``: c / sqrt(n), the tuned rate used by the experiments
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if rule == "practical":
        return c / math.sqrt(n)
    if rule not in ("slow", "fast"):
        raise ValueError(f"unknown schedule rule {rule!r}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if d is None or d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    if constants is None:
        raise ValueError(f"the {rule} schedule needs model constants")
    width = math.sqrt((math.log(2 * d) + math.log(1.0 / delta)) / n)
    if rule == "slow":
        if H is None or H < 0:
            raise ValueError(f"the slow schedule needs the column norm bound H, got {H}")
        return math.sqrt(2.0) * constants.omega * H / constants.sigma * width
    return 4.0 * constants.omega / constants.sigma * width


def empirical_error(theta_hat, theta_star, Sigma) -> float:
    """Squared Gram seminorm of the estimation gap."""
    a = theta_hat.values if isinstance(theta_hat, RewardParam) else np.asarray(theta_hat, dtype=float)
    b = theta_star.values if isinstance(theta_star, RewardParam) else np.asarray(theta_star, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"parameter shapes differ: {a.shape} vs {b.shape}")
    return seminorm_sq(Sigma, a - b)


def predict(theta, x0, x1) -> int:
    """Predicted winner: 0 when <theta, x0 - x1> > 0, else 1 (ties to 1)."""
    theta = theta.values if isinstance(theta, RewardParam) else np.asarray(theta, dtype=float)
    margin = float((np.asarray(x0, dtype=float) - np.asarray(x1, dtype=float)) @ theta)
    return 0 if margin > 0 else 1


def predict_labels(theta, diffs) -> np.ndarray:
    theta = theta.values if isinstance(theta, RewardParam) else np.asarray(theta, dtype=float)
    margins = np.asarray(diffs, dtype=float) @ theta
    return np.where(margins > 0, 0, 1).astype(np.int8)


def accuracy(theta, dataset: PreferenceDataset) -> float:
    """Fraction of comparisons whose label the parameter predicts."""
    pred = predict_labels(theta, dataset.diffs)
    return float(np.mean(pred == dataset.labels))
