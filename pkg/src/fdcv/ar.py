"""AR(p) models: PACF <-> coefficient maps, Burg fits, autocovariances, spectra."""

from dataclasses import dataclass, field

import numpy as np

from fdcv import _jit


class StationarityError(ValueError):
    """Raised when an AR parameter vector lies outside the stationary region."""


@dataclass(frozen=True)
class ArModel:
    """Stationary AR(p) model ``X_t = sum_k phi_k X_{t-k} + e_t`` with Var(e_t) = sigma2."""

    phi: np.ndarray
    sigma2: float
    pacf: np.ndarray = field(default=None)

    def __post_init__(self):
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        if not self.sigma2 > 0:
            raise ValueError(f"innovation variance must be positive, got {self.sigma2}")
        pacf = ar_to_pacf(phi) if self.pacf is None else np.atleast_1d(np.asarray(self.pacf, dtype=float))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "pacf", pacf)
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @classmethod
    def from_pacf(cls, pacf, sigma2):
        pacf = np.atleast_1d(np.asarray(pacf, dtype=float))
        return cls(pacf_to_ar(pacf), sigma2, pacf)

    @property
    def order(self):
        return self.phi.shape[0]

    def spectrum(self, omega):
        return ar_spectrum(self, omega)


def pacf_to_ar(pacf):
    """Durbin-Levinson map from partial autocorrelations to AR coefficients.

    >>> pacf_to_ar([0.5, 0.3])
    array([0.35, 0.3 ])
    """
    pacf = np.atleast_1d(np.asarray(pacf, dtype=float))
    bad = np.flatnonzero(~(np.abs(pacf) < 1.0))
    if bad.size:
        raise StationarityError(
            f"partial autocorrelation at level {bad[0] + 1} is {pacf[bad[0]]}, must lie in (-1, 1)")
    p = pacf.shape[0]
    if p == 0:
        return np.zeros(0)
    return _jit.levinson_levels(pacf)[p, :p].copy()


def ar_to_pacf(phi):
    """Inverse Durbin-Levinson (step-down) recursion.

    Raises StationarityError naming the first level whose reflection
    coefficient leaves (-1, 1).
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if phi.shape[0] == 0:
        return np.zeros(0)
    pacf, level = _jit.inverse_levinson(phi)
    if level:
        raise StationarityError(
            f"coefficients are not stationary: reflection coefficient at level {level} "
            f"is {pacf[level - 1]}")
    return pacf


def burg_fit(x, order):
    """Burg estimate of an AR(order) model for a (caller-demeaned) series."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if order < 0 or not order < n / 2:
        raise ValueError(f"Burg order must satisfy 0 <= p < n/2, got p={order}, n={n}")
    if np.ptp(x) == 0:
        raise ValueError("degenerate series: zero variance")
    pacf, e = _jit.burg(x, order)
    return ArModel.from_pacf(pacf, e)


def theoretical_acvf(model, max_lag):
    """Autocovariances c_0..c_max_lag of a stationary AR model.

    Solves the (p+1)-dimensional Yule-Walker system for the first p+1 lags,
    then runs the AR recursion for the rest.
    """
    phi = model.phi
    p = model.order
    a = np.zeros((p + 1, p + 1))
    rhs = np.zeros(p + 1)
    rhs[0] = model.sigma2
    # c_k - sum_j phi_j c_|k-j| = sigma2 * [k == 0], k = 0..p
    for k in range(p + 1):
        a[k, k] += 1.0
        for j in range(1, p + 1):
            a[k, abs(k - j)] -= phi[j - 1]
    head = np.linalg.solve(a, rhs)
    return _jit.ar_recursion_acvf(head, phi, max_lag + 1)


def ar_spectrum(model, omega):
    """sigma2 / (2 pi |1 - sum_k phi_k e^{i omega k}|^2), vectorised over omega."""
    omega = np.asarray(omega, dtype=float)
    k = np.arange(1, model.order + 1)
    transfer = 1.0 - np.exp(1j * np.multiply.outer(omega, k)) @ model.phi
    return model.sigma2 / (2 * np.pi * np.abs(transfer) ** 2)
