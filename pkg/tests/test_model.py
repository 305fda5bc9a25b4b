import math

import numpy as np
import pytest

from sparsepref.model import (
    BTL,
    TM,
    ModelConstants,
    RewardParam,
    compute_gamma,
    compute_omega,
    compute_zeta,
    get_link,
    sample_preference,
    support_indices,
    win_probability,
)

from _oracles import constants_brute, constants_closed_form


@pytest.mark.parametrize("link", [BTL, TM])
def test_link_symmetry(link):
    t = np.linspace(-8, 8, 201)
    np.testing.assert_allclose(link.cdf(t), 1.0 - link.cdf(-t), atol=1e-12)


@pytest.mark.parametrize("link", [BTL, TM])
def test_pdf_is_cdf_derivative(link):
    t = np.linspace(-4, 4, 81)
    h = 1e-6
    fd = (link.cdf(t + h) - link.cdf(t - h)) / (2 * h)
    np.testing.assert_allclose(link.pdf(t), fd, rtol=1e-7, atol=1e-9)


@pytest.mark.parametrize("link", [BTL, TM])
def test_neg_log_cdf_matches_cdf(link):
    t = np.linspace(-6, 6, 121)
    np.testing.assert_allclose(link.neg_log_cdf(t), -np.log(link.cdf(t)), rtol=1e-10)


@pytest.mark.parametrize("link", [BTL, TM])
def test_neg_log_cdf_stable_in_left_tail(link):
    v = np.asarray(link.neg_log_cdf(np.array([-50.0, -200.0, -700.0])))
    assert np.all(np.isfinite(v))
    assert np.all(np.diff(v) < 0)  # decreasing t means larger -log F


@pytest.mark.parametrize("link", [BTL, TM])
def test_score_is_pdf_over_cdf(link):
    t = np.linspace(-10, 10, 201)
    np.testing.assert_allclose(
        link.score(t), link.pdf(t) / link.cdf(t), rtol=1e-9, atol=1e-12
    )


@pytest.mark.parametrize("link", [BTL, TM])
def test_second_derivative_matches_finite_differences(link):
    t = np.linspace(-3, 3, 61)
    h = 1e-5
    fd = (
        link.neg_log_cdf(t + h) - 2 * link.neg_log_cdf(t) + link.neg_log_cdf(t - h)
    ) / h**2
    np.testing.assert_allclose(link.neg_log_cdf_dd(t), fd, rtol=1e-4, atol=1e-7)
    assert np.all(np.asarray(link.neg_log_cdf_dd(t)) > 0)


def test_get_link_accepts_kinds_and_instances():
    assert get_link("btl") is BTL
    assert get_link("TM") is TM
    assert get_link(BTL) is BTL
    with pytest.raises(ValueError, match="unknown link"):
        get_link("probit")


@pytest.mark.parametrize("kind", ["btl", "tm"])
def test_constants_match_closed_form_oracle(kind):
    zeta, gamma, omega = constants_closed_form(kind)
    assert compute_zeta(kind, 1, 1, 1) == pytest.approx(zeta, rel=1e-8)
    assert compute_gamma(kind, 1, 1, 1) == pytest.approx(gamma, rel=1e-10)
    assert compute_omega(kind, 1, 1, 1) == pytest.approx(omega, rel=1e-10)


@pytest.mark.parametrize("kind", ["btl", "tm"])
def test_closed_form_oracle_agrees_with_brute_scan(kind):
    # guards the endpoint/center location assumptions behind the closed forms
    zc, gc, oc = constants_closed_form(kind)
    zb, gb, ob = constants_brute(kind, pts=200_001)
    assert zb == pytest.approx(zc, rel=1e-8)
    assert gb == pytest.approx(gc, rel=1e-8)
    assert ob == pytest.approx(oc, rel=1e-8)


def test_constants_scale_with_sigma():
    # widening the margin range can only grow zeta/omega and shrink gamma
    small = ModelConstants.compute("btl", sigma=1.0)
    wide = ModelConstants.compute("btl", sigma=0.5)
    assert wide.t_max == pytest.approx(2.0)
    assert wide.zeta > small.zeta
    assert wide.omega > small.omega
    assert wide.gamma < small.gamma


def test_zeta_overflow_is_inf_not_error():
    # denominator underflows at extreme ranges; result saturates cleanly
    z = compute_zeta("btl", 1.0, 1.0, 1e-3)
    assert math.isinf(z) or z > 1e100


def test_compute_rejects_bad_scales():
    with pytest.raises(ValueError, match="sigma"):
        compute_gamma("btl", 1.0, 1.0, 0.0)
    with pytest.raises(ValueError, match="nonnegative"):
        compute_omega("btl", -1.0, 1.0, 1.0)


def test_support_indices_thresholds():
    v = np.array([1.0, 1e-5, 0.5, -1e-12, 0.0])
    # relative floor: 1e-5 is below 1e-3 * max(|v|)
    assert support_indices(v).tolist() == [0, 2]
    assert support_indices(np.zeros(4)).tolist() == []
    assert support_indices(np.array([])).tolist() == []


def test_reward_param_accounting():
    p = RewardParam(np.array([0.6, 0.0, -0.8, 0.0]))
    assert p.dim == 4
    assert p.support.tolist() == [0, 2]
    assert p.num_nonzero == 2
    assert p.sparsity_ratio == pytest.approx(0.5)
    assert p.l1 == pytest.approx(1.4)
    assert p.l2 == pytest.approx(1.0)


def test_reward_param_rejects_bad_input():
    with pytest.raises(ValueError, match="1-d"):
        RewardParam(np.zeros((2, 2)))
    with pytest.raises(ValueError, match="finite"):
        RewardParam(np.array([1.0, np.nan]))


def test_win_probability_formula():
    theta = np.array([1.0, -2.0])
    x0 = np.array([[1.0, 0.0]])
    x1 = np.array([[0.0, 1.0]])
    # margin = <theta, x0 - x1> = 3
    assert win_probability("btl", theta, x0, x1, 1.0)[0] == pytest.approx(
        1 / (1 + math.exp(-3.0))
    )
    assert win_probability("btl", theta, x0, x1, 3.0)[0] == pytest.approx(
        1 / (1 + math.exp(-1.0))
    )
    with pytest.raises(ValueError, match="sigma"):
        win_probability("btl", theta, x0, x1, 0.0)


def test_sample_preference_deterministic_and_calibrated():
    rng1 = np.random.default_rng(7)
    rng2 = np.random.default_rng(7)
    theta = np.array([2.0, 0.0])
    x0 = np.tile([1.0, 0.0], (4000, 1))
    x1 = np.zeros((4000, 2))
    y1 = sample_preference("btl", theta, x0, x1, 1.0, rng1)
    y2 = sample_preference("btl", theta, x0, x1, 1.0, rng2)
    assert np.array_equal(y1, y2)
    assert y1.dtype == np.int8
    p0 = 1 / (1 + math.exp(-2.0))
    assert np.mean(y1 == 0) == pytest.approx(p0, abs=0.03)
