"""Comparison model: link functions, model constants, reward parameters.

A pairwise comparison between items with features x0 and x1 is won by item 0
with probability F(<theta, x0 - x1> / sigma), where F is the link CDF. Two
links are provided: the logistic CDF (Bradley-Terry style choice) and the
standard normal CDF (Thurstone style choice).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.special import expit, log_expit, log_ndtr, ndtr

# Zero detection for sparsity accounting: an entry counts as nonzero when it
# clears both a relative and an absolute floor.
ZERO_REL_TOL = 1e-3
ZERO_ABS_TOL = 1e-10

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class Link:
    """A symmetric CDF used as comparison link; F(t) = 1 - F(-t)."""

    kind: str = ""
    kernel_id: int = -1  # dispatch code shared with the compiled backend

    def cdf(self, t):
        raise NotImplementedError

    def pdf(self, t):
        raise NotImplementedError

    def neg_log_cdf(self, t):
        """-log F(t), computed without underflow for large negative t."""
        raise NotImplementedError

    def neg_log_cdf_dd(self, t):
        """Second derivative of -log F; nonnegative by log-concavity."""
        raise NotImplementedError

    def score(self, t):
        """F'(t) / F(t), the per-sample score weight."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class LogisticLink(Link):
    kind = "btl"
    kernel_id = 0

    def cdf(self, t):
        return expit(t)

    def pdf(self, t):
        p = expit(t)
        return p * (1.0 - p)

    def neg_log_cdf(self, t):
        return -log_expit(t)

    def neg_log_cdf_dd(self, t):
        # (-log F)'' = F(t) F(-t); evaluate in log space so t = +-800 is exact
        t = np.asarray(t, dtype=float)
        return np.exp(log_expit(t) + log_expit(-t))

    def score(self, t):
        # F'/F = 1 - F(t) = F(-t)
        return expit(np.negative(t))


class GaussianLink(Link):
    kind = "tm"
    kernel_id = 1

    def cdf(self, t):
        return ndtr(t)

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-0.5 * t * t - _LOG_SQRT_2PI)

    def neg_log_cdf(self, t):
        return -log_ndtr(t)

    def score(self, t):
        # phi(t) / Phi(t) via logs; stays finite far into the left tail
        t = np.asarray(t, dtype=float)
        return np.exp(-0.5 * t * t - _LOG_SQRT_2PI - log_ndtr(t))

    def neg_log_cdf_dd(self, t):
        # (-log Phi)''(t) = r(t) (t + r(t)) with r = phi/Phi
        t = np.asarray(t, dtype=float)
        r = self.score(t)
        return r * (t + r)


BTL = LogisticLink()
TM = GaussianLink()

_LINKS = {"btl": BTL, "tm": TM}


def get_link(kind) -> Link:
    if isinstance(kind, Link):
        return kind
    try:
        return _LINKS[str(kind).lower()]
    except KeyError:
        raise ValueError(f"unknown link kind {kind!r}; expected 'btl' or 'tm'") from None


def _refine_max(f, lo: float, hi: float, n_grid: int = 10001) -> float:
    """Argmax of f on [lo, hi]: dense grid then golden-section refinement."""
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi == lo:
        return lo
    grid = np.linspace(lo, hi, n_grid)
    vals = f(grid)
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n_grid - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = float(f(c))
    fd = float(f(d))
    for _ in range(200):
        if b - a < 1e-14 * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(f(d))
    return 0.5 * (a + b)


def _refine_min(f, lo, hi, n_grid: int = 10001) -> float:
    return _refine_max(lambda t: -f(t), lo, hi, n_grid)


def _check_scale(B: float, L: float, sigma: float):
    if not (B >= 0 and L >= 0):
        raise ValueError(f"radii must be nonnegative, got B={B}, L={L}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def compute_zeta(link, B: float, L: float, sigma: float) -> float:
    """max F'(t)^2 over [0, BL/sigma], divided by F(BL/sigma) (1 - F(BL/sigma)).

    Both factors are evaluated in log space: the denominator underflows for
    moderate BL/sigma and the result can legitimately overflow to inf.
    """
    link = get_link(link)
    _check_scale(B, L, sigma)
    m = B * L / sigma

    def log_pdf(t):
        with np.errstate(divide="ignore"):
            return np.log(link.pdf(np.asarray(t, dtype=float)))

    t_star = _refine_max(log_pdf, 0.0, m)
    log_num = 2.0 * float(log_pdf(t_star))
    log_den = float(-link.neg_log_cdf(m) - link.neg_log_cdf(-m))
    with np.errstate(over="ignore"):
        return float(np.exp(log_num - log_den))


def compute_gamma(link, B: float, L: float, sigma: float) -> float:
    """Half the minimum of (-log F)'' over [-BL/sigma, BL/sigma]."""
    link = get_link(link)
    _check_scale(B, L, sigma)
    m = B * L / sigma
    t_star = _refine_min(link.neg_log_cdf_dd, -m, m)
    return 0.5 * float(link.neg_log_cdf_dd(t_star))


def compute_omega(link, B: float, L: float, sigma: float) -> float:
    """sup of F'(t)/F(t) over [-BL/sigma, BL/sigma].

    The score is decreasing for both links so the sup sits at -BL/sigma; the
    grid search is kept anyway as a guard against future link additions.
    """
    link = get_link(link)
    _check_scale(B, L, sigma)
    m = B * L / sigma
    t_star = _refine_max(link.score, -m, m)
    return float(np.maximum(link.score(t_star), link.score(-m)))


@dataclasses.dataclass(frozen=True)
class ModelConstants:
    """Curvature/score constants of a link on the scale box (B, L, sigma)."""

    link: str
    B: float
    L: float
    sigma: float
    zeta: float
    gamma: float
    omega: float

    @classmethod
    def compute(cls, link, B: float = 1.0, L: float = 1.0, sigma: float = 1.0):
        link = get_link(link)
        return cls(
            link=link.kind,
            B=B,
            L=L,
            sigma=sigma,
            zeta=compute_zeta(link, B, L, sigma),
            gamma=compute_gamma(link, B, L, sigma),
            omega=compute_omega(link, B, L, sigma),
        )

    @property
    def t_max(self) -> float:
        return self.B * self.L / self.sigma


def support_indices(values: np.ndarray) -> np.ndarray:
    """Indices whose magnitude clears both zero floors (sorted, 0-based)."""
    values = np.asarray(values, dtype=float)
    peak = np.max(np.abs(values)) if values.size else 0.0
    mask = (np.abs(values) > ZERO_REL_TOL * peak) & (np.abs(values) > ZERO_ABS_TOL)
    return np.flatnonzero(mask)


@dataclasses.dataclass(frozen=True)
class RewardParam:
    """A reward vector with sparsity accounting attached."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError(f"expected a 1-d parameter, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("parameter has non-finite entries")
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def support(self) -> np.ndarray:
        return support_indices(self.values)

    @property
    def num_nonzero(self) -> int:
        return int(self.support.size)

    @property
    def sparsity_ratio(self) -> float:
        return self.num_nonzero / self.dim

    @property
    def l1(self) -> float:
        return float(np.sum(np.abs(self.values)))

    @property
    def l2(self) -> float:
        return float(np.linalg.norm(self.values))


def win_probability(link, theta, x0, x1, sigma: float):
    """P(item 0 wins) = F(<theta, x0 - x1> / sigma); rows broadcast over axis 0."""
    link = get_link(link)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    theta = np.asarray(theta, dtype=float)
    diff = np.asarray(x0, dtype=float) - np.asarray(x1, dtype=float)
    return link.cdf(diff @ theta / sigma)


def sample_preference(link, theta, x0, x1, sigma: float, rng: np.random.Generator):
    """Draw labels: 0 with the model win probability, else 1.

    One uniform is consumed per comparison, in row order, so the label
    stream is reproducible from the generator state alone.
    """
    p0 = win_probability(link, theta, x0, x1, sigma)
    u = rng.random(np.shape(p0))
    return np.where(u < p0, 0, 1).astype(np.int8)
