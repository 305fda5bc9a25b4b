"""Comparison datasets, Gram geometry, and design-matrix condition checks."""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Optional

import numpy as np

from .errors import CapacityError

INCOHERENCE_FACTOR = 32  # entrywise deviation threshold is 1/(32 k)
SUBSET_ENUM_CAP = 2_000_000
RE_CONE_FACTOR = 3.0  # off-support l1 mass allowed in the restricted cone
RE_RATIO_FLOOR = 0.5


class IndexSet:
    """Sorted, duplicate-free coordinate subset of {0, ..., d-1}."""

    __slots__ = ("indices", "dim")

    def __init__(self, indices, dim: int):
        idx = np.asarray(sorted(int(i) for i in indices), dtype=np.intp)
        if idx.size and (idx[0] < 0 or idx[-1] >= dim):
            raise IndexError(f"index out of range for dimension {dim}: {idx.tolist()}")
        if idx.size != len(set(idx.tolist())):
            raise ValueError(f"duplicate indices: {sorted(indices)}")
        self.indices = idx
        self.dim = int(dim)

    def __len__(self):
        return int(self.indices.size)

    def __iter__(self):
        return iter(self.indices.tolist())

    def __eq__(self, other):
        return (
            isinstance(other, IndexSet)
            and self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.dim, tuple(self.indices.tolist())))

    def __repr__(self):
        return f"IndexSet({self.indices.tolist()}, dim={self.dim})"

    def complement(self) -> "IndexSet":
        mask = np.ones(self.dim, dtype=bool)
        mask[self.indices] = False
        return IndexSet(np.flatnonzero(mask), self.dim)


def _as_matrix(a, name: str) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


class PreferenceDataset:
    """n labeled comparisons over d-dimensional features.

    Stores the difference matrix X with rows x0 - x1 and labels y in {0, 1}
    (0 means item 0 won). The raw pairs are kept when supplied; file export
    needs them, fitting does not. The d x d Gram matrix X'X / n is computed
    at construction and shared by every error evaluation.
    """

    def __init__(self, diffs, labels, x0=None, x1=None):
        X = _as_matrix(diffs, "diffs")
        y = np.asarray(labels)
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError(
                f"labels shape {y.shape} does not match {X.shape[0]} comparisons"
            )
        if X.shape[0] == 0:
            raise ValueError("empty dataset: at least one comparison is required")
        if y.size and not np.isin(y, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        self.diffs = X
        self.labels = np.ascontiguousarray(y, dtype=np.int8)
        self.x0 = None if x0 is None else _as_matrix(x0, "x0")
        self.x1 = None if x1 is None else _as_matrix(x1, "x1")
        for name, a in (("x0", self.x0), ("x1", self.x1)):
            if a is not None and a.shape != X.shape:
                raise ValueError(f"{name} shape {a.shape} does not match diffs {X.shape}")
        self.gram = (X.T @ X) / X.shape[0]

    @classmethod
    def from_pairs(cls, x0, x1, labels) -> "PreferenceDataset":
        x0 = _as_matrix(x0, "x0")
        x1 = _as_matrix(x1, "x1")
        if x0.shape != x1.shape:
            raise ValueError(f"pair shapes differ: {x0.shape} vs {x1.shape}")
        return cls(x0 - x1, labels, x0=x0, x1=x1)

    @classmethod
    def from_differences(cls, diffs, labels) -> "PreferenceDataset":
        return cls(diffs, labels)

    @property
    def n(self) -> int:
        return self.diffs.shape[0]

    @property
    def d(self) -> int:
        return self.diffs.shape[1]

    @property
    def has_pairs(self) -> bool:
        return self.x0 is not None and self.x1 is not None

    def feature_radius(self) -> float:
        """max_i ||x0_i - x1_i||_2, the realized difference norm bound."""
        return float(np.sqrt(np.max(np.einsum("ij,ij->i", self.diffs, self.diffs))))


def gram(dataset: PreferenceDataset) -> np.ndarray:
    return dataset.gram


def seminorm_sq(Sigma, v) -> float:
    """v' Sigma v, the squared Gram seminorm (nonnegative up to roundoff)."""
    Sigma = np.asarray(Sigma, dtype=float)
    v = np.asarray(v, dtype=float)
    if Sigma.ndim != 2 or Sigma.shape[0] != Sigma.shape[1]:
        raise ValueError(f"Sigma must be square, got shape {Sigma.shape}")
    if v.ndim != 1 or v.shape[0] != Sigma.shape[0]:
        raise ValueError(f"vector shape {v.shape} does not match Sigma {Sigma.shape}")
    return float(v @ Sigma @ v)


def column_norm_bound(dataset: PreferenceDataset) -> float:
    """H = max_j ||X_j||_2 / sqrt(n) over difference-matrix columns."""
    return float(np.sqrt(np.max(np.diag(dataset.gram))))


def principal_submatrix(Sigma, subset: IndexSet) -> np.ndarray:
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.shape[0] != Sigma.shape[1]:
        raise ValueError(f"Sigma must be square, got shape {Sigma.shape}")
    if subset.dim != Sigma.shape[0]:
        raise IndexError(
            f"subset dimension {subset.dim} does not match Sigma {Sigma.shape}"
        )
    if len(subset) == 0:
        raise ValueError("empty subset has no principal submatrix")
    idx = subset.indices
    return Sigma[np.ix_(idx, idx)]


def _subset_count(d: int, lo: int, hi: int) -> int:
    return sum(math.comb(d, m) for m in range(lo, hi + 1))


@dataclasses.dataclass(frozen=True)
class SubmatrixReport:
    passed: bool
    worst_sigma_min: float
    worst_subset: tuple
    subsets_checked: int


def check_submatrix_nonsingularity(
    dataset_or_sigma, k: int, tol: float = 1e-10, cap: int = SUBSET_ENUM_CAP
) -> SubmatrixReport:
    """Smallest singular value over all Sigma_S with k <= |S| <= min(2k, d).

    Exhaustive enumeration; raises CapacityError before starting if the
    subset count exceeds the cap.
    """
    Sigma = (
        dataset_or_sigma.gram
        if isinstance(dataset_or_sigma, PreferenceDataset)
        else np.asarray(dataset_or_sigma, dtype=float)
    )
    d = Sigma.shape[0]
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}], got {k}")
    hi = min(2 * k, d)
    total = _subset_count(d, k, hi)
    if total > cap:
        raise CapacityError(
            f"{total} subsets of size {k}..{hi} exceed the enumeration cap {cap}"
        )
    worst = math.inf
    worst_subset = ()
    checked = 0
    for m in range(k, hi + 1):
        for S in itertools.combinations(range(d), m):
            sub = Sigma[np.ix_(S, S)]
            smin = float(np.min(np.abs(np.linalg.eigvalsh(sub))))
            checked += 1
            if smin < worst:
                worst = smin
                worst_subset = S
    return SubmatrixReport(
        passed=bool(worst > tol),
        worst_sigma_min=worst,
        worst_subset=worst_subset,
        subsets_checked=checked,
    )


@dataclasses.dataclass(frozen=True)
class IncoherenceReport:
    passed: bool
    max_abs_deviation: float
    threshold: float


def check_incoherence(Sigma, k: int) -> IncoherenceReport:
    """Entrywise closeness to identity: ||Sigma - I||_max <= 1/(32 k)."""
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.ndim != 2 or Sigma.shape[0] != Sigma.shape[1]:
        raise ValueError(f"Sigma must be square, got shape {Sigma.shape}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    dev = float(np.max(np.abs(Sigma - np.eye(Sigma.shape[0]))))
    thr = 1.0 / (INCOHERENCE_FACTOR * k)
    return IncoherenceReport(passed=bool(dev <= thr), max_abs_deviation=dev, threshold=thr)


@dataclasses.dataclass(frozen=True)
class RestrictedEigReport:
    refuted: bool
    min_ratio: float
    witness: Optional[np.ndarray]
    witness_support: tuple
    trials: int


def _cone_project(theta, off_mask, l1_cap):
    off_l1 = np.sum(np.abs(theta[off_mask]))
    if off_l1 > l1_cap and off_l1 > 0:
        theta = theta.copy()
        theta[off_mask] *= l1_cap / off_l1
    return theta


def refute_restricted_eigenvalue(
    Sigma,
    k: int,
    trials: int = 200,
    rng: Optional[np.random.Generator] = None,
    descent_steps: int = 50,
) -> RestrictedEigReport:
    """Search for a cone vector with ||theta||_Sigma^2 / ||theta||_2^2 < 1/2.

    The cone for support S is {theta != 0 : ||theta_{S^c}||_1 <= 3 ||theta_S||_1}.
    Candidates draw S (size uniform on 1..k), Gaussian entries on S, and
    off-support Gaussian noise rescaled to a uniform fraction of the cone
    budget; each candidate is sharpened by projected descent on the ratio.
    A returned refutation carries an explicit witness; failure to refute is
    NOT a certificate that the restricted eigenvalue condition holds.
    """
    Sigma = np.asarray(Sigma, dtype=float)
    d = Sigma.shape[0]
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}], got {k}")
    if rng is None:
        rng = np.random.default_rng(0)
    lam_max = float(np.max(np.abs(np.linalg.eigvalsh(Sigma))))
    step0 = 0.25 / max(lam_max, 1e-12)

    def ratio(theta):
        nn = float(theta @ theta)
        return float(theta @ Sigma @ theta) / nn if nn > 0 else math.inf

    best = math.inf
    best_theta = None
    best_support = ()
    for _ in range(trials):
        size = int(rng.integers(1, k + 1))
        S = np.sort(rng.choice(d, size=size, replace=False))
        off = np.ones(d, dtype=bool)
        off[S] = False
        theta = np.zeros(d)
        theta[S] = rng.standard_normal(size)
        if not np.any(theta[S]):
            theta[S] = 1.0
        cap = RE_CONE_FACTOR * np.sum(np.abs(theta[S]))
        noise = rng.standard_normal(d - size)
        noise_l1 = np.sum(np.abs(noise))
        if noise_l1 > 0:
            theta[off] = noise * (rng.random() * cap / noise_l1)
        r = ratio(theta)
        eta = step0
        for _ in range(descent_steps):
            nn = float(theta @ theta)
            g = 2.0 * (Sigma @ theta - r * theta) / nn
            cand = theta - eta * g
            cap = RE_CONE_FACTOR * np.sum(np.abs(cand[S]))
            cand = _cone_project(cand, off, cap)
            if not np.any(cand):
                break
            rc = ratio(cand)
            if rc < r:
                theta, r = cand, rc
                eta *= 1.2
            else:
                eta *= 0.5
        if r < best:
            best = r
            best_theta = theta.copy()
            best_support = tuple(int(i) for i in S)
        if best < RE_RATIO_FLOOR:
            break
    return RestrictedEigReport(
        refuted=bool(best < RE_RATIO_FLOOR),
        min_ratio=best,
        witness=best_theta if best < RE_RATIO_FLOOR else None,
        witness_support=best_support if best < RE_RATIO_FLOOR else (),
        trials=trials,
    )
