"""NumPy implementation of the hot loss kernels.

Contract shared with the compiled backend: X is a C-contiguous (n, d) float64
array of feature differences x0 - x1, y an int8 label array, kernel_id the
link dispatch code (0 logistic, 1 gaussian). Values agree with the compiled
backend to floating-point roundoff; bitwise equality is not promised because
summation order differs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit, log_expit, log_ndtr

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _signed_margins(X, y, theta, sigma):
    t = X @ theta
    t /= sigma
    sign = 1.0 - 2.0 * np.asarray(y, dtype=np.float64)  # 0 -> +1, 1 -> -1
    return sign * t, sign


def _neg_log_cdf(s, kernel_id):
    if kernel_id == 0:
        return -log_expit(s)
    return -log_ndtr(s)


def _score(s, kernel_id):
    if kernel_id == 0:
        return expit(-s)
    return np.exp(-0.5 * s * s - _LOG_SQRT_2PI - log_ndtr(s))


def nll_value(X, y, theta, sigma, kernel_id):
    s, _ = _signed_margins(X, y, theta, sigma)
    return float(np.mean(_neg_log_cdf(s, kernel_id)))


def nll_value_grad(X, y, theta, sigma, kernel_id, grad_out):
    s, sign = _signed_margins(X, y, theta, sigma)
    n = X.shape[0]
    w = _score(s, kernel_id)
    w *= sign
    w /= -(n * sigma)
    np.matmul(X.T, w, out=grad_out)
    return float(np.mean(_neg_log_cdf(s, kernel_id)))
