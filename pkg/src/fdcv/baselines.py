"""AR(1)-prewhitened kernel HAC estimators used as comparison baselines.

AM-PW: quadratic-spectral kernel with the Andrews (1991) AR(1) plug-in
bandwidth. NW-PW: Bartlett kernel with the Newey-West (1994) nonparametric
bandwidth. Both follow the usual regression-software recipe for the location
model: residuals from the mean, a no-intercept least-squares AR(1) filter,
kernel sum of the filtered series' autocovariances (divisor n), recolouring by
1/(1-rho)^2, and a degrees-of-freedom factor n/(n-1).
"""

import math
from dataclasses import dataclass

import numpy as np

RHO_CLAMP = 0.97
WEIGHT_TOL = 1e-7
QS_CONST = 1.3221
BARTLETT_CONST = 1.1447


class BaselineError(ValueError):
    pass


@dataclass(frozen=True)
class BaselineResult:
    method: str
    f0_hat: float
    se_hat: float
    bandwidth: float
    prewhiten_phi: float
    mean: float
    n: int

    @property
    def long_run_variance(self):
        return 2 * math.pi * self.f0_hat


def qs_kernel(x):
    """Quadratic-spectral kernel 25/(12 pi^2 x^2) [sin(6 pi x/5)/(6 pi x/5) - cos(6 pi x/5)]."""
    x = np.asarray(x, dtype=float)
    z = 6 * np.pi * x / 5
    with np.errstate(divide="ignore", invalid="ignore"):
        k = 25 / (12 * np.pi ** 2 * x ** 2) * (np.sin(z) / z - np.cos(z))
    # Taylor branch where the bracket cancels
    small = 1 - z ** 2 / 10 + z ** 4 / 280
    return np.where(np.abs(z) < 1e-2, small, k)


def bartlett_weights(lag):
    """1 - r/(lag + 1) for r = 0..lag."""
    r = np.arange(lag + 1)
    return 1 - r / (lag + 1)


def _ols_slope(y, x):
    den = float(x @ x)
    if den == 0:
        raise BaselineError("degenerate data: zero regressor variance")
    return float(x @ y) / den


def prewhiten(resid, clamp=RHO_CLAMP):
    """No-intercept least-squares AR(1) filter; returns (rho, filtered series of length n-1)."""
    rho = _ols_slope(resid[1:], resid[:-1])
    rho = min(max(rho, -clamp), clamp)
    return rho, resid[1:] - rho * resid[:-1]


def _raw_autocov(u, max_lag):
    """Unnormalised sums sum_t u_t u_{t+r}, r = 0..max_lag."""
    m = u.shape[0]
    return np.array([float(u[r:] @ u[:m - r]) for r in range(max_lag + 1)])


def _kernel_sum(u, weights):
    weights = weights[:u.shape[0]]
    g = _raw_autocov(u, weights.shape[0] - 1)
    return weights[0] * g[0] + 2 * float(weights[1:] @ g[1:])


def _prepare(data):
    x = np.asarray(data, dtype=float)
    n = x.shape[0]
    if n < 10:
        raise BaselineError(f"need at least 10 observations, got {n}")
    resid = x - x.mean()
    if not np.any(resid):
        raise BaselineError("degenerate data: zero variance")
    return x, n, resid


def _finish(method, x, n, total, rho, bandwidth, adjust):
    # total = kernel-weighted autocovariance sum of the filtered series, unnormalised
    lrv = total / n / (1 - rho) ** 2
    if adjust:
        lrv *= n / (n - 1)
    if not lrv > 0:
        raise BaselineError(f"{method} long-run variance is not positive ({lrv})")
    f0 = lrv / (2 * math.pi)
    se = math.sqrt(lrv / n)
    return BaselineResult(method, f0, se, bandwidth, rho, float(x.mean()), n)


def andrews_bandwidth(u):
    """AR(1) plug-in bandwidth for the QS kernel, univariate, unit weight.

    alpha(2) = 4 rho^2 / (1 - rho)^4 with rho from a least-squares AR(1)
    (with intercept) on the filtered series; bandwidth = 1.3221 (alpha n)^(1/5).
    """
    uc = u - u.mean()
    rho = _ols_slope(uc[1:], uc[:-1])
    rho = min(max(rho, -RHO_CLAMP), RHO_CLAMP)
    alpha2 = 4 * rho ** 2 / (1 - rho) ** 4
    return QS_CONST * (alpha2 * u.shape[0]) ** 0.2


def am_pw_estimate(data, adjust=True):
    x, n, resid = _prepare(data)
    rho, u = prewhiten(resid)
    bw = andrews_bandwidth(u)
    m = u.shape[0]
    if bw > 0:
        w = qs_kernel(np.arange(m) / bw)
        big = np.flatnonzero(np.abs(w) > WEIGHT_TOL)
        w = w[:big[-1] + 1]
    else:
        w = np.ones(1)
    return _finish("AM-PW", x, n, _kernel_sum(u, w), rho, bw, adjust)


def newey_west_bandwidth(u, lag_factor=3.0):
    """Newey-West (1994) Bartlett bandwidth from a preliminary lag floor(lag_factor (m/100)^(2/9))."""
    m = u.shape[0]
    n0 = int(math.floor(lag_factor * (m / 100) ** (2 / 9)))
    n0 = max(min(n0, m - 1), 1)
    sig = _raw_autocov(u, n0) / m
    j = np.arange(1, n0 + 1)
    s0 = sig[0] + 2 * sig[1:].sum()
    s1 = 2 * float(j @ sig[1:])
    if s0 == 0:
        raise BaselineError("Newey-West s0 is zero")
    return BARTLETT_CONST * ((s1 / s0) ** 2 * m) ** (1 / 3)


def nw_pw_estimate(data, adjust=True, lag_factor=3.0):
    x, n, resid = _prepare(data)
    rho, u = prewhiten(resid)
    bw = newey_west_bandwidth(u, lag_factor)
    lag = min(int(math.floor(bw)), u.shape[0] - 1)
    return _finish("NW-PW", x, n, _kernel_sum(u, bartlett_weights(lag)), rho, bw, adjust)
