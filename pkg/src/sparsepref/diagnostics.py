"""Exact pairwise KL divergence and its Gram seminorm upper bound."""

from __future__ import annotations

import dataclasses

import numpy as np

from .data import PreferenceDataset, seminorm_sq
from .model import ModelConstants, RewardParam, get_link

PROB_CLAMP = 1e-15  # probabilities stay interior; clamping only guards underflow


def _as_vec(theta, d: int, name: str) -> np.ndarray:
    if isinstance(theta, RewardParam):
        theta = theta.values
    v = np.asarray(theta, dtype=float)
    if v.ndim != 1 or v.shape[0] != d:
        raise ValueError(f"{name} shape {v.shape} does not match dimension {d}")
    return v


def pairwise_kl(
    theta1,
    theta2,
    dataset: PreferenceDataset,
    link,
    sigma: float,
    b_radius: float | None = None,
) -> float:
    """KL divergence between the n-fold product label laws of two parameters.

    Sum over samples of p log(p/q) + (1-p) log((1-p)/(1-q)) with p, q the
    label-0 probabilities under theta1, theta2. Not averaged. When b_radius
    is given, both parameters must lie inside that ball.
    """
    link = get_link(link)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    t1 = _as_vec(theta1, dataset.d, "theta1")
    t2 = _as_vec(theta2, dataset.d, "theta2")
    if b_radius is not None:
        for name, v in (("theta1", t1), ("theta2", t2)):
            nrm = float(np.linalg.norm(v))
            if nrm > b_radius + 1e-9:
                raise ValueError(
                    f"{name} lies outside the radius-{b_radius} ball ({nrm:.6g})"
                )
    lo, hi = PROB_CLAMP, 1.0 - PROB_CLAMP
    p = np.clip(link.cdf(dataset.diffs @ t1 / sigma), lo, hi)
    q = np.clip(link.cdf(dataset.diffs @ t2 / sigma), lo, hi)
    terms = p * (np.log(p) - np.log(q)) + (1.0 - p) * (np.log1p(-p) - np.log1p(-q))
    return float(np.sum(terms))


@dataclasses.dataclass(frozen=True)
class KlReport:
    kl: float
    bound: float
    holds: bool


def verify_kl_bound(
    theta1,
    theta2,
    dataset: PreferenceDataset,
    link,
    constants: ModelConstants,
    slack: float = 1e-10,
) -> KlReport:
    """Check KL <= (n zeta / sigma^2) ||theta1 - theta2||_Sigma^2."""
    t1 = _as_vec(theta1, dataset.d, "theta1")
    t2 = _as_vec(theta2, dataset.d, "theta2")
    kl = pairwise_kl(t1, t2, dataset, link, constants.sigma, b_radius=constants.B)
    bound = (
        dataset.n
        * constants.zeta
        / constants.sigma**2
        * seminorm_sq(dataset.gram, t1 - t2)
    )
    return KlReport(kl=kl, bound=bound, holds=bool(kl <= bound + slack))
