"""Fourier machinery: DFT, periodogram, autocovariances, leave-one-out series.

The DFT convention throughout is ``J_j = (1/n) sum_t x_t exp(-i w_j t)`` with
``w_j = 2 pi j / n``, so that ``x_t = sum_j J_j exp(i w_j t)``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

MIN_LENGTH = 8


def fourier_frequencies(n):
    return 2 * np.pi * np.arange(n) / n


def n_tilde(n):
    """Largest integer not exceeding (n - 1) / 2."""
    return (n - 1) // 2


def dft(x):
    x = np.asarray(x, dtype=float)
    return np.fft.fft(x) / x.shape[0]


def inverse_dft(J):
    J = np.asarray(J)
    return np.fft.ifft(J) * J.shape[0]


class TimeSeries:
    """Real observations with a lazily cached DFT.

    Instances are treated as immutable; the value array is copied and marked
    read-only on construction.
    """

    def __init__(self, values):
        values = np.array(values, dtype=float).ravel()
        if values.shape[0] < MIN_LENGTH:
            raise ValueError(f"series needs at least {MIN_LENGTH} observations, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            raise ValueError("series contains non-finite values")
        values.setflags(write=False)
        self.values = values

    def __len__(self):
        return self.values.shape[0]

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def n_tilde(self):
        return n_tilde(self.n)

    @cached_property
    def dft(self):
        # transform the centred values so a large mean does not pollute J_k, k >= 1
        m = self.values.mean()
        J = dft(self.values - m)
        J[0] = m
        J.setflags(write=False)
        return J

    @cached_property
    def periodogram(self):
        return periodogram(self)

    def mean(self):
        return float(self.values.mean())

    def shifted(self, a):
        return TimeSeries(self.values + a)


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I(w_1)..I(w_ntilde); index 0 of ``ordinates`` is frequency w_1."""

    ordinates: np.ndarray
    n: int

    @property
    def n_tilde(self):
        return n_tilde(self.n)

    @property
    def frequencies(self):
        return 2 * np.pi * np.arange(1, self.n_tilde + 1) / self.n

    def __getitem__(self, j):
        """Ordinate at Fourier index j (1-based, as in w_j)."""
        if not 1 <= j <= self.n_tilde:
            raise IndexError(f"Fourier index {j} outside 1..{self.n_tilde}")
        return self.ordinates[j - 1]


def _as_series(series):
    return series if isinstance(series, TimeSeries) else TimeSeries(series)


def periodogram(series):
    series = _as_series(series)
    n = series.n
    J = series.dft[1:n_tilde(n) + 1]
    return Periodogram(n / (2 * np.pi) * np.abs(J) ** 2, n)


def sample_autocovariance(x, max_lag):
    """c_r = (1/n) sum_{t=r}^{n-1} x_t x_{t-r} for r = 0..max_lag; no demeaning."""
    x = np.asarray(x.values if isinstance(x, TimeSeries) else x, dtype=float)
    n = x.shape[0]
    if not 0 <= max_lag <= n - 1:
        raise ValueError(f"max_lag must lie in 0..{n - 1}, got {max_lag}")
    return np.array([np.dot(x[r:], x[:n - r]) for r in range(max_lag + 1)]) / n


def _check_index(n, j):
    if not 1 <= j <= n_tilde(n):
        raise ValueError(f"leave-one-out index must lie in 1..{n_tilde(n)}, got {j}")


def leave_one_out_dft(series, j):
    """Leave-one-out DFT J_k^{-j} for k = 1..n-1 (returned array index k-1).

    Both mirror indices j and n-j are replaced, by the average of their
    neighbours, or by J_2 / J_{n-2} when j = 1 so that J_0 never enters.
    """
    series = _as_series(series)
    n = series.n
    _check_index(n, j)
    J = np.array(series.dft)
    out = J.copy()
    if j == 1:
        out[1] = J[2]
        out[n - 1] = J[n - 2]
    else:
        # j <= ntilde < n/2, so j and n-j are distinct
        out[j] = 0.5 * (J[j - 1] + J[j + 1])
        out[n - j] = 0.5 * (J[n - j - 1] + J[n - j + 1])
    return out[1:]


@dataclass(frozen=True)
class LeaveOneOutSeries:
    j: int
    values: np.ndarray


def leave_one_out_series(series, j, check=True):
    """Inverse transform of the leave-one-out DFT over k = 1..n-1.

    The zero frequency is dropped, so the output has mean zero and does not
    change when a constant is added to the input.
    """
    series = _as_series(series)
    n = series.n
    Jm = np.zeros(n, dtype=complex)
    Jm[1:] = leave_one_out_dft(series, j)
    z = inverse_dft(Jm)
    if check:
        scale = max(np.max(np.abs(series.values)), 1e-300)
        resid = np.max(np.abs(z.imag))
        if resid > 1e-9 * scale:
            raise ArithmeticError(f"imaginary residue {resid:.3g} in leave-one-out series j={j}")
    return LeaveOneOutSeries(j, z.real.copy())
