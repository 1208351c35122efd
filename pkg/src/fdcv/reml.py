"""Restricted maximum likelihood for stationary AR(p) models.

The restricted log-likelihood (up to an additive constant) is

    L = -(n-1)/2 log s2 + 1/2 log(|S^-1| / (1'S^-1 1))
        - 1/(2 s2) [X'S^-1 X - (X'S^-1 1)^2 / (1'S^-1 1)]

with S the Toeplitz correlation-scale covariance of the AR model. It is
maximised over the partial autocorrelations in (-1, 1)^p through the
reparametrisation pacf = tanh(theta); the innovation variance is profiled out
analytically.

Two routes evaluate the quadratic forms:

* ``"toeplitz"``: two linear solves with S (PCG with the T. Chan
  preconditioner, or Levinson for short series).
* ``"innovations"``: the exact factorisation of S^-1 into one-step prediction
  errors, O(n p). This is what the simulation study uses.
"""

from dataclasses import dataclass

import numpy as np

from fdcv import _jit, toeplitz
from fdcv.ar import ArModel, StationarityError, theoretical_acvf

REL_TOL = 1e-8
MAX_EVALS_PER_ORDER = 500
BOUNDARY_PROXIMAL = 1 - 1e-4


class RemlError(RuntimeError):
    """Optimisation failed; ``fallback`` holds the Burg fit."""

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


def _check_pacf(pacf):
    pacf = np.atleast_1d(np.asarray(pacf, dtype=float))
    if np.any(~(np.abs(pacf) < 1)):
        raise StationarityError("partial autocorrelations must lie strictly inside (-1, 1)")
    return pacf


def log_det_inverse(pacf):
    """log|S^-1| = sum_i i log(1 - pacf_i^2)."""
    pacf = _check_pacf(pacf)
    i = np.arange(1, pacf.shape[0] + 1)
    return float(np.sum(i * np.log1p(-pacf ** 2)))


def correlation_toeplitz(pacf, n):
    """Toeplitz operator for the unit-innovation covariance of the AR model."""
    model = ArModel.from_pacf(pacf, 1.0)
    return toeplitz.ToeplitzOperator(theoretical_acvf(model, n - 1))


def quadratic_forms(data, pacf, solver="toeplitz", tol=toeplitz.DEFAULT_TOL,
                    direct_threshold=toeplitz.DIRECT_THRESHOLD):
    """(X'S^-1 X, X'S^-1 1, 1'S^-1 1) for the unit-innovation AR covariance."""
    x = np.asarray(data, dtype=float)
    pacf = _check_pacf(pacf)
    if solver == "innovations":
        xx, xw, ww, _ = _jit.quadratic_forms(x, pacf)
        return xx, xw, ww
    if solver not in ("toeplitz", "pcg", "levinson"):
        raise ValueError(f"unknown solver {solver!r}")
    n = x.shape[0]
    op = correlation_toeplitz(pacf, n)
    ones = np.ones(n)
    if solver == "levinson":
        sx, sw = toeplitz.levinson_solve(op, x), toeplitz.levinson_solve(op, ones)
    else:
        threshold = 0 if solver == "pcg" else direct_threshold
        sx = toeplitz.solve(op, x, tol=tol, direct_threshold=threshold).solution
        sw = toeplitz.solve(op, ones, tol=tol, direct_threshold=threshold).solution
    return float(x @ sx), float(x @ sw), float(ones @ sw)


def _profiled_quadratic(xx, xw, ww):
    return xx - xw * xw / ww


def restricted_loglik(data, pacf, sigma2, solver="toeplitz"):
    x = np.asarray(data, dtype=float)
    pacf = _check_pacf(pacf)
    n = x.shape[0]
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    if not n > pacf.shape[0] + 1:
        raise ValueError(f"need n > p + 1, got n={n}, p={pacf.shape[0]}")
    # the GLS-profiled form ignores constant shifts; centring avoids cancellation in xx - xw^2/ww
    xx, xw, ww = quadratic_forms(x - x.mean(), pacf, solver)
    return float(_jit.restricted_loglik_forms(xx, xw, ww, log_det_inverse(pacf), sigma2, n))


def concentrated_sigma2(data, pacf, solver="innovations"):
    """Maximiser of the restricted likelihood in sigma2 for fixed pacf: Q / (n - 1)."""
    x = np.asarray(data, dtype=float)
    q = _profiled_quadratic(*quadratic_forms(x - x.mean(), pacf, solver))
    if not q > 0:
        raise ArithmeticError(f"profiled quadratic form is not positive ({q})")
    return q / (x.shape[0] - 1)


def concentrated_loglik(data, pacf, solver="innovations"):
    x = np.asarray(data, dtype=float)
    s2 = concentrated_sigma2(x, pacf, solver)
    return restricted_loglik(x, pacf, s2, solver)


@dataclass(frozen=True)
class RemlFit:
    model: ArModel
    loglik: float
    status: str  # "converged" | "max-evals" | "boundary-proximal"
    burg_loglik: float = float("nan")
    evaluations: int = 0


def reml_fit(data, order, rel_tol=REL_TOL, max_evals_per_order=MAX_EVALS_PER_ORDER):
    """Maximise the restricted likelihood of an AR(order) model.

    Starts from the Burg PACF. Order 0 returns the sample variance with
    divisor n - 1.
    """
    x = np.asarray(data, dtype=float)
    n = x.shape[0]
    if order < 0:
        raise ValueError("order must be non-negative")
    if not n > 2 * (order + 1):
        raise ValueError(f"need n > 2(p + 1), got n={n}, p={order}")
    if np.ptp(x) == 0:
        raise RemlError("degenerate series: zero variance")
    xc = x - x.mean()
    if order == 0:
        s2 = float(xc @ xc) / (n - 1)
        ll = float(_jit.restricted_loglik_forms(float(xc @ xc), 0.0, float(n), 0.0, s2, n))
        return RemlFit(ArModel(np.zeros(0), s2, np.zeros(0)), ll, "converged", ll, 0)

    pacf, burg_pacf, fmin, fburg, nfev, converged = _jit.reml_search(
        xc, order, rel_tol, max_evals_per_order)
    if not np.isfinite(fmin):
        burg = ArModel.from_pacf(np.clip(burg_pacf, -_jit.PACF_BOUND, _jit.PACF_BOUND), 1.0)
        raise RemlError(f"restricted likelihood not finite for order {order}", fallback=burg)
    s2 = concentrated_sigma2(xc, pacf)
    if not converged:
        status = "max-evals"
    elif np.any(np.abs(pacf) > BOUNDARY_PROXIMAL):
        status = "boundary-proximal"
    else:
        status = "converged"
    return RemlFit(ArModel.from_pacf(pacf, s2), -float(fmin), status, -float(fburg), int(nfev))
