"""Independent oracles for the test suite.

Value oracles recompute formulas with different primitives and summation
order than the package (logaddexp instead of log_expit, fsum instead of a
fused kernel). Optimization oracles use dense grid search with nested
refinement and share nothing with the proximal solver.
"""

import math

import numpy as np
from scipy.special import expit, log_ndtr, ndtr


def nll_direct(diffs, labels, theta, sigma, kind) -> float:
    """Mean negative log-likelihood by direct per-row summation."""
    t = np.asarray(diffs, dtype=float) @ np.asarray(theta, dtype=float) / sigma
    s = np.where(np.asarray(labels) == 0, t, -t)
    if kind == "btl":
        terms = np.logaddexp(0.0, -s)
    elif kind == "tm":
        terms = -log_ndtr(s)
    else:
        raise ValueError(kind)
    return math.fsum(terms.tolist()) / len(terms)


def fd_gradient(f, theta, h: float = 1e-6) -> np.ndarray:
    """Centered finite differences of a scalar function, one coordinate at a time."""
    theta = np.asarray(theta, dtype=float)
    g = np.empty(theta.shape[0])
    for j in range(theta.shape[0]):
        e = np.zeros_like(theta)
        e[j] = h
        g[j] = (f(theta + e) - f(theta - e)) / (2.0 * h)
    return g


def _eval_chunks(objective, pts, chunk: int = 65536) -> np.ndarray:
    out = np.empty(pts.shape[0])
    for a in range(0, pts.shape[0], chunk):
        out[a : a + chunk] = objective(pts[a : a + chunk])
    return out


def grid_argmin_2d(objective, radius: float, levels: int = 3,
                   grid: int = 1201, ring: int = 2401, refine: int = 601):
    """Minimize objective over the radius-ball in the plane by dense search.

    objective maps an (m, 2) array of candidate points to m values. Level 0
    scans a full square grid masked to the ball plus the whole boundary
    circle; each refinement rescans a shrinking window around the incumbent
    (square, boundary arc, and the axis lines through the window, so kink
    and boundary minimizers are resolved too).
    """
    best = {"pt": None, "val": math.inf}

    def consider(pts):
        if pts.shape[0] == 0:
            return
        vals = _eval_chunks(objective, pts)
        i = int(np.argmin(vals))
        if vals[i] < best["val"]:
            best["val"] = float(vals[i])
            best["pt"] = pts[i].copy()

    def ball_square(cx, cy, half, m):
        xs = np.linspace(cx - half, cx + half, m)
        ys = np.linspace(cy - half, cy + half, m)
        X, Y = np.meshgrid(xs, ys)
        P = np.column_stack([X.ravel(), Y.ravel()])
        keep = np.einsum("ij,ij->i", P, P) <= radius * radius * (1 + 1e-15)
        axis_x = np.column_stack([xs, np.zeros(m)])
        axis_y = np.column_stack([np.zeros(m), ys])
        P = np.concatenate([P[keep], axis_x, axis_y, np.zeros((1, 2))])
        keep = np.einsum("ij,ij->i", P, P) <= radius * radius * (1 + 1e-15)
        return P[keep]

    def arc(center_angle, half_angle, m):
        a = np.linspace(center_angle - half_angle, center_angle + half_angle, m)
        return radius * np.column_stack([np.cos(a), np.sin(a)])

    consider(ball_square(0.0, 0.0, radius, grid))
    consider(arc(0.0, math.pi, ring))
    half = 2.0 * (2.0 * radius / (grid - 1))
    ahalf = 2.0 * (2.0 * math.pi / (ring - 1))
    for _ in range(levels):
        cx, cy = best["pt"]
        consider(ball_square(cx, cy, half, refine))
        consider(arc(math.atan2(cy, cx), ahalf, refine))
        half = 2.0 * (2.0 * half / (refine - 1))
        ahalf = 2.0 * (2.0 * ahalf / (refine - 1))
    return best["pt"], best["val"]


def penalized_nll_objective(dataset, kind, sigma, beta):
    """Vectorized candidate-batch objective for the 2-d estimator oracle."""
    X = dataset.diffs
    sign = np.where(dataset.labels == 0, 1.0, -1.0)

    def objective(pts):
        s = (X @ pts.T) * (sign / sigma)[:, None]
        if kind == "btl":
            terms = np.logaddexp(0.0, -s)
        else:
            terms = -log_ndtr(s)
        return terms.mean(axis=0) + beta * np.abs(pts).sum(axis=1)

    return objective


def prox_objective(v, a):
    """0.5 ||z - v||^2 + a ||z||_1 on candidate batches."""
    v = np.asarray(v, dtype=float)

    def objective(pts):
        dz = pts - v[None, :]
        return 0.5 * np.einsum("ij,ij->i", dz, dz) + a * np.abs(pts).sum(axis=1)

    return objective


def constants_closed_form(kind):
    """(zeta, gamma, omega) at B = L = sigma = 1 from endpoint/center extrema."""
    if kind == "btl":
        s1 = 1.0 / (1.0 + math.exp(-1.0))
        prod = s1 * (1.0 - s1)  # F(1) F(-1)
        return 0.0625 / prod, 0.5 * prod, s1
    if kind == "tm":
        Phi1 = float(ndtr(1.0))
        phi0 = 1.0 / math.sqrt(2.0 * math.pi)
        phi1 = math.exp(-0.5) * phi0
        r1 = phi1 / Phi1
        return phi0 * phi0 / (Phi1 * (1.0 - Phi1)), 0.5 * r1 * (1.0 + r1), phi1 / (1.0 - Phi1)
    raise ValueError(kind)


def constants_brute(kind, pts: int = 2_000_001):
    """Same three constants from a dense direct scan of the defining programs."""
    t = np.linspace(-1.0, 1.0, pts)
    if kind == "btl":
        p = expit(t)
        dd = p * (1.0 - p)
        score = expit(-t)
        th = np.linspace(0.0, 1.0, pts)
        ph = expit(th)
        num = (ph * (1.0 - ph)) ** 2
        den = float(expit(1.0) * expit(-1.0))
    elif kind == "tm":
        phi = np.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
        Phi = ndtr(t)
        score = phi / Phi
        dd = score * (t + score)
        th = np.linspace(0.0, 1.0, pts)
        num = (np.exp(-0.5 * th * th) / math.sqrt(2.0 * math.pi)) ** 2
        den = float(ndtr(1.0) * ndtr(-1.0))
    else:
        raise ValueError(kind)
    return float(num.max() / den), 0.5 * float(dd.min()), float(score.max())


def sign_test_pvalue(wins: int, m: int) -> float:
    """One-sided exact binomial tail P(Bin(m, 1/2) >= wins)."""
    if not 0 <= wins <= m:
        raise ValueError(f"wins={wins} out of range for m={m}")
    total = sum(math.comb(m, i) for i in range(wins, m + 1))
    return total / 2.0**m


# Frozen arithmetic oracles, each derived by the plain formula they restate.
SINGLE_SAMPLE_KL_BTL = 0.110944071671727355  # p log(2p) + (1-p) log(2(1-p)), p = expit(1)
SLOW_BETA_EXAMPLE = 0.285036026545  # sqrt(2) * expit(1) * sqrt((log 200 + log 10) / 100), H = 1
