"""Symmetric positive-definite Toeplitz solves: FFT matvec, T. Chan PCG, Levinson."""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 200
DIRECT_THRESHOLD = 128
RESIDUAL_REFRESH = 10


class ConvergenceError(RuntimeError):
    """PCG hit its iteration cap. Carries the best iterate and its residual."""

    def __init__(self, message, best, residual, iterations):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations


class ToeplitzOperator:
    """Symmetric Toeplitz matrix given by its first column.

    Products use the size-2n circulant embedding of the matrix, so each
    matvec costs two real FFTs and one inverse.
    """

    def __init__(self, first_column):
        t = np.array(first_column, dtype=float).ravel()
        if t.shape[0] == 0 or not t[0] > 0:
            raise ValueError("first column must be non-empty with a positive diagonal")
        t.setflags(write=False)
        self.first_column = t

    @property
    def n(self):
        return self.first_column.shape[0]

    @cached_property
    def embedded_spectrum(self):
        t = self.first_column
        col = np.concatenate([t, [0.0], t[:0:-1]])
        return np.fft.rfft(col)

    def matvec(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got shape {v.shape}")
        m = 2 * self.n
        return np.fft.irfft(self.embedded_spectrum * np.fft.rfft(v, m), m)[:self.n]

    __matmul__ = matvec

    def dense(self):
        return scipy.linalg.toeplitz(self.first_column)


def toeplitz_matvec(op, v):
    return op.matvec(v)


@dataclass(frozen=True)
class CirculantPreconditioner:
    """Circulant matrix stored through its eigenvalues (DFT of its first column)."""

    first_column: np.ndarray
    eigenvalues: np.ndarray

    def solve(self, r):
        return np.fft.irfft(np.fft.rfft(r) / self.eigenvalues[:r.shape[0] // 2 + 1], r.shape[0])

    def dense(self):
        return scipy.linalg.circulant(self.first_column)


def tchan_preconditioner(op):
    """Frobenius-optimal circulant approximation of ``op`` (T. Chan 1988).

    c_k = ((n - k) t_k + k t_{n-k}) / n.
    """
    t = op.first_column
    n = op.n
    k = np.arange(n)
    c = ((n - k) * t + k * np.concatenate([[0.0], t[:0:-1]])) / n
    eig = np.fft.fft(c)
    if np.max(np.abs(eig.imag)) > 1e-10 * np.max(np.abs(eig.real)):
        raise ArithmeticError("circulant eigenvalues are not real")
    eig = eig.real
    if not np.all(eig > 0):
        raise ArithmeticError(f"T. Chan preconditioner is not positive definite (min eigenvalue {eig.min():.3g})")
    return CirculantPreconditioner(c, eig)


@dataclass
class PcgReport:
    solution: np.ndarray
    iterations: int
    final_relative_residual: float
    method: str = "pcg"
    fell_back: bool = False


def pcg_solve(op, b, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, precondition=True):
    """Preconditioned conjugate gradients for ``op x = b``.

    The recursive residual is replaced by the true residual every
    ``RESIDUAL_REFRESH`` iterations and convergence is always confirmed on the
    true residual. Raises ConvergenceError after ``max_iter`` iterations.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    b = np.asarray(b, dtype=float)
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return PcgReport(np.zeros_like(b), 0, 0.0)
    pre = tchan_preconditioner(op) if precondition else None
    apply_pre = pre.solve if pre is not None else (lambda r: r)

    x = np.zeros_like(b)
    r = b.copy()
    z = apply_pre(r)
    d = z.copy()
    rz = r @ z
    best, best_res = x.copy(), 1.0
    for it in range(1, max_iter + 1):
        q = op.matvec(d)
        alpha = rz / (d @ q)
        x += alpha * d
        r -= alpha * q
        res = np.linalg.norm(r) / bnorm
        if it % RESIDUAL_REFRESH == 0 or res <= tol:
            r = b - op.matvec(x)
            res = np.linalg.norm(r) / bnorm
            if res < best_res:
                best, best_res = x.copy(), res
            if res <= tol:
                return PcgReport(x, it, res, "pcg" if pre is not None else "cg")
        z = apply_pre(r)
        rz_new = r @ z
        d = z + (rz_new / rz) * d
        rz = rz_new
    res = np.linalg.norm(b - op.matvec(x)) / bnorm
    if res < best_res:
        best, best_res = x.copy(), res
    raise ConvergenceError(f"PCG did not reach tol={tol:g} in {max_iter} iterations "
                           f"(residual {best_res:.3g})", best, best_res, max_iter)


def levinson_solve(op, b):
    """O(n^2) direct solve by the Levinson-Trench recursion."""
    b = np.asarray(b, dtype=float)
    if b.shape != (op.n,):
        raise ValueError(f"expected a vector of length {op.n}, got shape {b.shape}")
    try:
        return scipy.linalg.solve_toeplitz(op.first_column, b)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"Toeplitz matrix has a singular leading minor: {exc}") from exc


def solve(op, b, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, direct_threshold=DIRECT_THRESHOLD):
    """Solve ``op x = b`` choosing the route by size, falling back to Levinson if PCG stalls."""
    if op.n < direct_threshold:
        x = levinson_solve(op, b)
        res = np.linalg.norm(b - op.matvec(x)) / max(np.linalg.norm(b), 1e-300)
        return PcgReport(x, 0, res, "levinson")
    try:
        return pcg_solve(op, b, tol, max_iter)
    except ConvergenceError as exc:
        log.warning("%s; falling back to Levinson", exc)
        x = levinson_solve(op, b)
        res = np.linalg.norm(b - op.matvec(x)) / np.linalg.norm(b)
        return PcgReport(x, exc.iterations, res, "levinson", fell_back=True)
