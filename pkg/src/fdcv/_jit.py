"""Compiled kernels for the autoregressive hot path.

Everything in here works on plain float64 arrays and is called from the
public wrappers in :mod:`fdcv.ar` and :mod:`fdcv.reml`. The Monte Carlo
study performs on the order of a million restricted-likelihood fits, so the
likelihood, Burg recursion and simplex search are compiled with numba.
"""

import math

import numpy as np
from numba import njit

# |pacf| is kept at or below this bound inside the likelihood
PACF_BOUND = 1.0 - 1e-6
THETA_BOUND = math.atanh(PACF_BOUND)


@njit(cache=True)
def levinson_levels(pacf):
    """Durbin-Levinson coefficients for every order 0..p.

    Row k holds the order-k predictor in its first k entries.
    """
    p = pacf.shape[0]
    levels = np.zeros((p + 1, max(p, 1)))
    for k in range(1, p + 1):
        kk = pacf[k - 1]
        for j in range(k - 1):
            levels[k, j] = levels[k - 1, j] - kk * levels[k - 1, k - 2 - j]
        levels[k, k - 1] = kk
    return levels


@njit(cache=True)
def inverse_levinson(phi):
    """Step-down recursion; returns (pacf, failing_level) with level 0 on success."""
    p = phi.shape[0]
    pacf = np.zeros(p)
    a = phi.copy()
    for k in range(p, 0, -1):
        kk = a[k - 1]
        pacf[k - 1] = kk
        if not abs(kk) < 1.0:
            return pacf, k
        denom = (1.0 - kk) * (1.0 + kk)  # no cancellation near |kk| = 1
        b = np.empty(k - 1)
        for j in range(k - 1):
            b[j] = (a[j] + kk * a[k - 2 - j]) / denom
        a = b
    return pacf, 0


@njit(cache=True)
def quadratic_forms(x, pacf):
    """X'S^-1 X, X'S^-1 1, 1'S^-1 1 and log|S^-1| for a unit-variance AR model.

    Uses the exact factorisation of the inverse covariance into one-step
    prediction errors: partial-order predictors for t < p and the full
    AR filter afterwards. Cost is O(n p).
    """
    n = x.shape[0]
    p = pacf.shape[0]
    levels = levinson_levels(pacf)
    logdet_inv = 0.0
    for i in range(p):
        logdet_inv += (i + 1) * math.log(1.0 - pacf[i] * pacf[i])

    xx = 0.0
    xw = 0.0
    ww = 0.0
    head = min(p, n)
    for t in range(head):
        # 1 / prediction-error variance for the order-t predictor
        w = 1.0
        for i in range(t, p):
            w *= 1.0 - pacf[i] * pacf[i]
        ex = x[t]
        ew = 1.0
        for k in range(t):
            ex -= levels[t, k] * x[t - 1 - k]
            ew -= levels[t, k]
        xx += w * ex * ex
        xw += w * ex * ew
        ww += w * ew * ew

    ew = 1.0
    for k in range(p):
        ew -= levels[p, k]
    for t in range(head, n):
        ex = x[t]
        for k in range(p):
            ex -= levels[p, k] * x[t - 1 - k]
        xx += ex * ex
        xw += ex * ew
    ww += (n - head) * ew * ew
    return xx, xw, ww, logdet_inv


@njit(cache=True)
def restricted_loglik_forms(xx, xw, ww, logdet_inv, sigma2, n):
    q = xx - xw * xw / ww
    return (-0.5 * (n - 1) * math.log(sigma2)
            + 0.5 * (logdet_inv - math.log(ww))
            - 0.5 * q / sigma2)


@njit(cache=True)
def neg_concentrated(theta, x):
    """Negative profiled restricted log-likelihood at pacf = tanh(theta)."""
    n = x.shape[0]
    p = theta.shape[0]
    pacf = np.empty(p)
    for i in range(p):
        th = min(max(theta[i], -THETA_BOUND), THETA_BOUND)
        pacf[i] = math.tanh(th)
    xx, xw, ww, logdet_inv = quadratic_forms(x, pacf)
    q = xx - xw * xw / ww
    if not q > 0.0:
        return np.inf
    s2 = q / (n - 1)
    return -(-0.5 * (n - 1) * math.log(s2) + 0.5 * (logdet_inv - math.log(ww))
             - 0.5 * (n - 1))


@njit(cache=True)
def burg(x, p):
    """Burg reflection coefficients (= pacf) and final prediction-error variance."""
    n = x.shape[0]
    f = x.copy()
    b = x.copy()
    e = 0.0
    for t in range(n):
        e += x[t] * x[t]
    e /= n
    pacf = np.zeros(p)
    for m in range(1, p + 1):
        num = 0.0
        den = 0.0
        for t in range(m, n):
            num += f[t] * b[t - 1]
            den += f[t] * f[t] + b[t - 1] * b[t - 1]
        k = 2.0 * num / den if den > 0.0 else 0.0
        pacf[m - 1] = k
        # update in place, walking backwards so b[t-1] is still the old value
        for t in range(n - 1, m - 1, -1):
            ft = f[t]
            f[t] = ft - k * b[t - 1]
            b[t] = b[t - 1] - k * ft
        e *= 1.0 - k * k
    return pacf, e


@njit(cache=True)
def nelder_mead(x, theta0, reltol, maxfev):
    """Simplex search minimising ``neg_concentrated`` over theta.

    Standard reflection/expansion/contraction/shrink coefficients
    (1, 2, 1/2, 1/2). Stops when the spread of simplex values falls below
    ``reltol * (|f_best| + reltol)`` or after ``maxfev`` evaluations.
    Returns (theta, fmin, nfev, converged).
    """
    d = theta0.shape[0]
    simplex = np.empty((d + 1, d))
    fvals = np.empty(d + 1)
    simplex[0] = theta0
    for i in range(d):
        step = 0.1 * np.max(np.abs(theta0))
        if step == 0.0:
            step = 0.1
        pt = theta0.copy()
        pt[i] += step
        simplex[i + 1] = pt
    for i in range(d + 1):
        fvals[i] = neg_concentrated(simplex[i], x)
    nfev = d + 1
    converged = False

    while nfev < maxfev:
        order = np.argsort(fvals)
        simplex = simplex[order]
        fvals = fvals[order]
        if fvals[d] - fvals[0] <= reltol * (abs(fvals[0]) + reltol):
            converged = True
            break

        centroid = np.zeros(d)
        for i in range(d):
            centroid += simplex[i]
        centroid /= d

        xr = centroid + (centroid - simplex[d])
        fr = neg_concentrated(xr, x)
        nfev += 1
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - simplex[d])
            fe = neg_concentrated(xe, x)
            nfev += 1
            if fe < fr:
                simplex[d] = xe
                fvals[d] = fe
            else:
                simplex[d] = xr
                fvals[d] = fr
            continue
        if fr < fvals[d - 1]:
            simplex[d] = xr
            fvals[d] = fr
            continue
        if fr < fvals[d]:
            xc = centroid + 0.5 * (xr - centroid)
        else:
            xc = centroid + 0.5 * (simplex[d] - centroid)
        fc = neg_concentrated(xc, x)
        nfev += 1
        if fc < min(fr, fvals[d]):
            simplex[d] = xc
            fvals[d] = fc
            continue
        for i in range(1, d + 1):
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            fvals[i] = neg_concentrated(simplex[i], x)
        nfev += d

    best = np.argmin(fvals)
    return simplex[best].copy(), fvals[best], nfev, converged


@njit(cache=True)
def reml_search(x, p, reltol, maxfev_per_order):
    """Burg start followed by simplex refinement. Returns (pacf, burg_pacf, fmin, fburg, nfev, converged)."""
    burg_pacf, _ = burg(x, p)
    theta0 = np.empty(p)
    for i in range(p):
        v = min(max(burg_pacf[i], -PACF_BOUND), PACF_BOUND)
        theta0[i] = math.atanh(v)
    fburg = neg_concentrated(theta0, x)
    theta, fmin, nfev, converged = nelder_mead(x, theta0, reltol, maxfev_per_order * p)
    if fburg < fmin:
        theta = theta0
        fmin = fburg
    pacf = np.empty(p)
    for i in range(p):
        th = min(max(theta[i], -THETA_BOUND), THETA_BOUND)
        pacf[i] = math.tanh(th)
    return pacf, burg_pacf, fmin, fburg, nfev, converged


@njit(cache=True)
def ar_recursion_acvf(head, phi, length):
    """Extend c_0..c_p to ``length`` lags with c_k = sum_j phi_j c_{k-j}."""
    p = phi.shape[0]
    out = np.zeros(length)
    m = min(head.shape[0], length)
    for k in range(m):
        out[k] = head[k]
    for k in range(m, length):
        s = 0.0
        for j in range(p):
            s += phi[j] * out[k - 1 - j]
        out[k] = s
    return out
