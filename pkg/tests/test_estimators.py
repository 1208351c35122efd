import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from fdcv.estimators import (CandidateClass, ParzenLagWeights, RemlAr, fit_candidate, lag_weights_estimate,
                             max_truncation, parse_candidate, parzen_kernel)
from fdcv.spectral import sample_autocovariance


def test_parzen_values():
    np.testing.assert_allclose(parzen_kernel([0, 0.25, 0.5, 0.75, 1, 1.5]),
                               [1, 1 - 6 / 16 + 6 / 64, 0.25, 2 / 64, 0, 0])
    np.testing.assert_allclose(parzen_kernel([-0.3]), parzen_kernel([0.3]))


def test_parzen_continuous_at_half():
    assert parzen_kernel(0.5 - 1e-12) == pytest.approx(parzen_kernel(0.5 + 1e-12), abs=1e-10)


def test_parzen_window_fourier_transform_nonnegative():
    h = 7
    r = np.arange(-h, h + 1)
    w = parzen_kernel(r / h)
    omega = np.linspace(0, np.pi, 500)
    assert np.all(np.cos(np.multiply.outer(omega, r)) @ w >= -1e-12)


def test_max_truncation_values():
    assert [max_truncation(n) for n in (50, 100, 200, 1000)] == [3, 4, 4, 6]


def test_truncation_one_is_variance_over_two_pi(rng):
    x = rng.standard_normal(40)
    x -= x.mean()
    c0 = sample_autocovariance(x, 0)[0]
    assert lag_weights_estimate(x, 1, 0.3) == pytest.approx(c0 / (2 * np.pi))


def test_lag_weights_matches_direct_sum(rng):
    x = rng.standard_normal(60)
    x -= x.mean()
    h, w = 5, 0.7
    c = sample_autocovariance(x, h)
    direct = sum(parzen_kernel(abs(r) / h) * c[abs(r)] * np.cos(r * w) for r in range(-h, h + 1)) / (2 * np.pi)
    assert lag_weights_estimate(x, h, w) == pytest.approx(float(direct))


def test_lag_weights_truncation_range(rng):
    x = rng.standard_normal(10)
    for h in (0, 10):
        with pytest.raises(ValueError):
            lag_weights_estimate(x, h, 0.0)


@given(arrays(float, st.integers(8, 80), elements=st.floats(-100, 100)), st.integers(1, 6))
def test_parzen_estimate_nonnegative_at_zero(x, h):
    x = x - x.mean()
    if h >= len(x):
        return
    assert lag_weights_estimate(x, h, 0.0) >= -1e-9 * max(1.0, float(np.max(np.abs(x)))) ** 2


def test_class_layout():
    cls = CandidateClass.for_length(50)
    assert len(cls) == 9
    assert [s.label for s in cls] == ["AR(0)", "AR(1)", "AR(2)", "AR(3)", "AR(4)", "AR(5)",
                                      "Parzen(h=1)", "Parzen(h=2)", "Parzen(h=3)"]
    assert len(CandidateClass.for_length(200)) == 10
    assert len(CandidateClass.for_length(50, max_trunc=12)) == 18


def test_restrictions():
    cls = CandidateClass.for_length(50)
    assert all(s.family == "ar" for s in cls.restrict("ar-only"))
    assert len(cls.restrict("parzen-only")) == 3
    assert cls.restrict("all") is cls
    with pytest.raises(ValueError):
        cls.restrict("kernels")


@given(st.one_of(st.builds(RemlAr, st.integers(0, 20)), st.builds(ParzenLagWeights, st.integers(1, 99))))
def test_label_round_trip(spec):
    assert parse_candidate(spec.label) == spec


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_candidate("QS(3)")


def test_fit_candidate_ar_spectrum_at_zero(rng):
    x = rng.standard_normal(100)
    x -= x.mean()
    est = fit_candidate(RemlAr(1), x)
    phi, s2 = est.model.phi[0], est.model.sigma2
    assert est.at_zero() == pytest.approx(s2 / (2 * math.pi * (1 - phi) ** 2))


def test_fit_candidate_errors(rng):
    with pytest.raises(ValueError):
        fit_candidate(RemlAr(1), rng.standard_normal(7))
    with pytest.raises(ValueError):
        fit_candidate(ParzenLagWeights(20), rng.standard_normal(20))
    with pytest.raises(TypeError):
        fit_candidate("AR(1)", rng.standard_normal(20))
