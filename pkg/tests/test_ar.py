import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.integrate import quad
from scipy.signal import lfilter

from fdcv.ar import ArModel, StationarityError, ar_spectrum, ar_to_pacf, burg_fit, pacf_to_ar, theoretical_acvf

pacf_vectors = st.integers(1, 10).flatmap(
    lambda p: arrays(float, p, elements=st.floats(-0.99, 0.99)))


def reference_burg(x, p):
    # textbook Burg with explicit forward/backward error arrays
    f = np.array(x, dtype=float)
    b = f.copy()
    e = np.mean(f ** 2)
    ks = []
    for m in range(p):
        ff, bb = f[m + 1:], b[m:-1]
        k = 2 * ff @ bb / (ff @ ff + bb @ bb)
        f_new = ff - k * bb
        b_new = bb - k * ff
        f[m + 1:], b[m + 1:] = f_new, b_new
        e *= 1 - k * k
        ks.append(k)
    return np.array(ks), e


def test_pacf_to_ar_examples():
    np.testing.assert_allclose(pacf_to_ar([0.5]), [0.5])
    np.testing.assert_allclose(pacf_to_ar([0.5, 0.3]), [0.35, 0.3])
    assert pacf_to_ar([]).shape == (0,)


def test_ar_to_pacf_examples():
    np.testing.assert_allclose(ar_to_pacf([0.9]), [0.9])
    np.testing.assert_allclose(ar_to_pacf([0.35, 0.3]), [0.5, 0.3])


def test_nonstationary_rejected_with_level():
    with pytest.raises(StationarityError, match="level 1"):
        ar_to_pacf([1.2])
    with pytest.raises(StationarityError, match="level 2"):
        pacf_to_ar([0.2, 1.0])
    # phi = (0.5, 0.6): stationary fails at the top level
    with pytest.raises(StationarityError):
        ar_to_pacf([0.5, 0.6])


def _roundtrip_bound(v):
    # rounding phi to doubles already loses ~eps * prod 1/(1 - k^2) in the pacf
    return 1e-13 * np.prod(1 / ((1 - v) * (1 + v)))


def test_durbin_levinson_roundtrip_moderate(rng):
    for _ in range(500):
        v = rng.uniform(-0.8, 0.8, 5)
        np.testing.assert_allclose(ar_to_pacf(pacf_to_ar(v)), v, atol=1e-12, rtol=0)


@given(pacf_vectors)
def test_durbin_levinson_roundtrip(v):
    np.testing.assert_allclose(ar_to_pacf(pacf_to_ar(v)), v, atol=max(1e-12, _roundtrip_bound(v)), rtol=0)


def test_acvf_closed_forms():
    c = theoretical_acvf(ArModel([0.9], 1.0), 20)
    np.testing.assert_allclose(c, 0.9 ** np.arange(21) / 0.19, rtol=1e-12)
    c0 = theoretical_acvf(ArModel(np.zeros(0), 2.0), 5)
    np.testing.assert_allclose(c0, [2, 0, 0, 0, 0, 0])


def test_acvf_matches_long_simulation():
    phi = np.array([0.5, 0.3])
    e = np.random.default_rng(3).standard_normal(1_000_000 + 500)
    x = lfilter([1.0], np.r_[1.0, -phi], e)[500:]
    emp = np.array([x[k:] @ x[:len(x) - k] for k in range(4)]) / len(x)
    np.testing.assert_allclose(emp, theoretical_acvf(ArModel(phi, 1.0), 3), rtol=0.01)


@given(st.integers(1, 5).flatmap(lambda p: arrays(float, p, elements=st.floats(-0.95, 0.95))),
       st.integers(2, 64))
def test_acvf_positive_definite(pacf, n):
    c = theoretical_acvf(ArModel.from_pacf(pacf, 1.0), n - 1)
    T = c[np.abs(np.subtract.outer(np.arange(n), np.arange(n)))]
    assert np.linalg.eigvalsh(T).min() > 0


def test_spectrum_examples():
    w = np.linspace(-np.pi, np.pi, 7)
    np.testing.assert_allclose(ar_spectrum(ArModel(np.zeros(0), 1.0), w), 1 / (2 * np.pi))
    assert ar_spectrum(ArModel([0.9], 1.0), 0.0) == pytest.approx(1 / (2 * np.pi * 0.01))


@pytest.mark.parametrize("pacf", [[0.5], [0.7, -0.2], [0.3, 0.3, -0.4, 0.1, 0.2]])
def test_spectrum_integrates_to_variance(pacf):
    model = ArModel.from_pacf(pacf, 1.3)
    total, _ = quad(lambda w: ar_spectrum(model, w), -np.pi, np.pi, epsabs=1e-12, epsrel=1e-12, limit=200)
    assert total == pytest.approx(theoretical_acvf(model, 0)[0], rel=1e-6)


@given(st.integers(1, 5).flatmap(lambda p: arrays(float, p, elements=st.floats(-0.95, 0.95))),
       st.floats(-np.pi, np.pi))
def test_spectrum_positive_and_symmetric(pacf, w):
    model = ArModel.from_pacf(pacf, 1.0)
    f = ar_spectrum(model, w)
    assert f > 0
    assert f == pytest.approx(ar_spectrum(model, -w), rel=1e-12)


@pytest.mark.parametrize("pacf", [[0.9], [0.6, 0.3], [0.5, -0.3, 0.2]])
def test_long_run_variance_identity(pacf):
    model = ArModel.from_pacf(pacf, 1.0)
    c = theoretical_acvf(model, 3000)
    assert 2 * np.pi * ar_spectrum(model, 0.0) == pytest.approx(c[0] + 2 * c[1:].sum(), rel=1e-8)


def test_burg_matches_reference(rng):
    x = rng.standard_normal(60).cumsum()
    x -= x.mean()
    for p in range(6):
        model = burg_fit(x, p)
        k, e = reference_burg(x, p)
        np.testing.assert_allclose(model.pacf, k, atol=1e-12)
        assert model.sigma2 == pytest.approx(e, rel=1e-12)


def test_burg_order_zero_is_variance(rng):
    x = rng.standard_normal(30)
    x -= x.mean()
    m = burg_fit(x, 0)
    assert m.order == 0
    assert m.sigma2 == pytest.approx(np.mean(x ** 2))


def test_burg_consistency():
    e = np.random.default_rng(11).standard_normal(10_000)
    x = lfilter([1.0], [1.0, -0.9], e)
    assert abs(burg_fit(x - x.mean(), 1).phi[0] - 0.9) < 0.02


@given(arrays(float, st.integers(12, 40), elements=st.floats(-100, 100)), st.integers(0, 5))
def test_burg_reflection_inside_unit_interval(x, p):
    if np.ptp(x) == 0:
        with pytest.raises(ValueError):
            burg_fit(x, p)
        return
    assert np.all(np.abs(burg_fit(x - x.mean(), p).pacf) < 1)


def test_burg_errors():
    with pytest.raises(ValueError):
        burg_fit(np.ones(20), 1)
    with pytest.raises(ValueError):
        burg_fit(np.arange(10.0), 5)


def test_model_validates_sigma2():
    with pytest.raises(ValueError):
        ArModel([0.1], 0.0)
