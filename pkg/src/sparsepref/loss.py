"""Average negative log-likelihood of preference labels and its certificates."""

from __future__ import annotations

import dataclasses

import numpy as np

from . import _kernels
from .data import IndexSet, PreferenceDataset, seminorm_sq
from .model import ModelConstants, RewardParam, get_link


def _as_theta(theta, d: int) -> np.ndarray:
    if isinstance(theta, RewardParam):
        theta = theta.values
    v = np.ascontiguousarray(theta, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != d:
        raise ValueError(f"parameter shape {v.shape} does not match dimension {d}")
    if not np.all(np.isfinite(v)):
        raise ValueError("parameter has non-finite entries")
    return v


def _check_sigma(sigma: float):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def nll(theta, dataset: PreferenceDataset, link, sigma: float) -> float:
    """Mean of -log F((-1)^y <theta, x0 - x1> / sigma) over the dataset."""
    link = get_link(link)
    _check_sigma(sigma)
    v = _as_theta(theta, dataset.d)
    return _kernels.nll_value(dataset.diffs, dataset.labels, v, sigma, link.kernel_id)


def nll_value_grad(theta, dataset: PreferenceDataset, link, sigma: float):
    """Value and gradient in one pass; the solver's inner call."""
    link = get_link(link)
    _check_sigma(sigma)
    v = _as_theta(theta, dataset.d)
    grad = np.empty(dataset.d)
    val = _kernels.nll_value_grad(
        dataset.diffs, dataset.labels, v, sigma, link.kernel_id, grad
    )
    return val, grad


def nll_gradient(theta, dataset: PreferenceDataset, link, sigma: float) -> np.ndarray:
    return nll_value_grad(theta, dataset, link, sigma)[1]


def restrict(dataset: PreferenceDataset, subset: IndexSet) -> PreferenceDataset:
    """Dataset with features sliced to the subset coordinates.

    The restricted loss equals the full loss on vectors supported in the
    subset, and the restricted Gram is the principal submatrix.
    """
    if subset.dim != dataset.d:
        raise IndexError(
            f"subset dimension {subset.dim} does not match dataset dimension {dataset.d}"
        )
    if len(subset) == 0:
        raise ValueError("cannot restrict to an empty subset")
    idx = subset.indices
    if dataset.has_pairs:
        return PreferenceDataset.from_pairs(
            dataset.x0[:, idx], dataset.x1[:, idx], dataset.labels
        )
    return PreferenceDataset.from_differences(dataset.diffs[:, idx], dataset.labels)


@dataclasses.dataclass(frozen=True)
class CurvatureReport:
    lhs: float
    rhs: float
    holds: bool


def strong_convexity_certificate(
    theta_star,
    delta,
    dataset: PreferenceDataset,
    link,
    sigma: float,
    gamma: float,
    b_radius: float,
    slack: float = 1e-10,
) -> CurvatureReport:
    """Check the curvature lower bound at theta_star in direction delta.

    lhs is the Bregman gap nll(theta*+delta) - nll(theta*) - <grad, delta>;
    rhs is (gamma / sigma^2) ||delta||_Sigma^2. Both points must lie in the
    b_radius ball, where gamma is a valid curvature floor.
    """
    ts = _as_theta(theta_star, dataset.d)
    dl = _as_theta(delta, dataset.d)
    for name, v in (("theta_star", ts), ("theta_star + delta", ts + dl)):
        nrm = float(np.linalg.norm(v))
        if nrm > b_radius + 1e-9:
            raise ValueError(f"{name} lies outside the radius-{b_radius} ball ({nrm:.6g})")
    val0, grad0 = nll_value_grad(ts, dataset, link, sigma)
    val1 = nll(ts + dl, dataset, link, sigma)
    lhs = val1 - val0 - float(grad0 @ dl)
    rhs = (gamma / sigma**2) * seminorm_sq(dataset.gram, dl)
    return CurvatureReport(lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs - slack))


@dataclasses.dataclass(frozen=True)
class ScoreBoundReport:
    max_score: float
    holds: bool
    n_in_range: int


def score_bound_check(
    theta,
    dataset: PreferenceDataset,
    link,
    constants: ModelConstants,
    slack: float = 1e-9,
) -> ScoreBoundReport:
    """Per-sample score magnitudes against the omega bound.

    The score of sample i is F'(s_i)/F(s_i) at the signed margin
    s_i = (-1)^{y_i} <theta, x0_i - x1_i> / sigma. The bound applies to
    samples whose unsigned margin lies in [-BL/sigma, BL/sigma]; samples
    outside are reported but not held to it.
    """
    link = get_link(link)
    _check_sigma(constants.sigma)
    v = _as_theta(theta, dataset.d)
    t = dataset.diffs @ v / constants.sigma
    sign = 1.0 - 2.0 * dataset.labels.astype(np.float64)
    scores = np.asarray(link.score(sign * t), dtype=float)
    in_range = np.abs(t) <= constants.t_max + 1e-12
    ok = bool(np.all(scores[in_range] <= constants.omega + slack)) if in_range.any() else True
    return ScoreBoundReport(
        max_score=float(np.max(scores)) if scores.size else 0.0,
        holds=ok,
        n_in_range=int(np.count_nonzero(in_range)),
    )
