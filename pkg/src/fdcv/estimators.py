"""Candidate spectral estimators: Parzen lag-weights and REML autoregressions.

All estimators return densities normalised so that the long-run variance is
``2 pi f(0)``; in particular the lag-weights sum carries the 1/(2 pi) factor.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from fdcv.ar import ArModel, ar_spectrum
from fdcv.reml import reml_fit
from fdcv.spectral import sample_autocovariance

MAX_AR_ORDER = 5


def parzen_kernel(x):
    """Parzen lag window: 1 - 6x^2 + 6|x|^3 on |x| <= 1/2, 2(1-|x|)^3 up to 1, else 0."""
    a = np.abs(np.asarray(x, dtype=float))
    return np.where(a <= 0.5, 1 - 6 * a ** 2 + 6 * a ** 3,
                    np.where(a <= 1, 2 * (1 - a) ** 3, 0.0))


def max_truncation(n):
    """floor(4 (n/100)^(2/9)), the largest Parzen truncation point in the class."""
    return int(math.floor(4 * (n / 100) ** (2 / 9)))


def lag_weights_estimate(data, h, omega, kernel=parzen_kernel):
    """(1/2pi) sum_{|r|<=h} w(r/h) c_r exp(i r omega) for caller-demeaned data."""
    x = np.asarray(data, dtype=float)
    n = x.shape[0]
    if not 1 <= h <= n - 1:
        raise ValueError(f"truncation must lie in 1..{n - 1}, got {h}")
    c = sample_autocovariance(x, h)
    return _lag_weights_from_acvf(c, h, omega, kernel)


def _lag_weights_from_acvf(c, h, omega, kernel=parzen_kernel):
    r = np.arange(1, h + 1)
    w = kernel(r / h) * c[1:h + 1]
    omega = np.asarray(omega, dtype=float)
    return (c[0] + 2 * np.cos(np.multiply.outer(omega, r)) @ w) / (2 * np.pi)


@dataclass(frozen=True)
class RemlAr:
    order: int

    @property
    def family(self):
        return "ar"

    @property
    def label(self):
        return f"AR({self.order})"


@dataclass(frozen=True)
class ParzenLagWeights:
    truncation: int

    @property
    def family(self):
        return "parzen"

    @property
    def label(self):
        return f"Parzen(h={self.truncation})"


CandidateSpec = Union[RemlAr, ParzenLagWeights]


def parse_candidate(label):
    """Inverse of ``spec.label``."""
    label = label.strip()
    if label.startswith("AR(") and label.endswith(")"):
        return RemlAr(int(label[3:-1]))
    if label.startswith("Parzen(h=") and label.endswith(")"):
        return ParzenLagWeights(int(label[9:-1]))
    raise ValueError(f"unrecognised candidate label {label!r}")


@dataclass(frozen=True)
class SpectralEstimator:
    """A fitted candidate, evaluable at any frequency."""

    spec: CandidateSpec
    model: ArModel = None
    acvf: np.ndarray = None
    status: str = "converged"

    def __call__(self, omega):
        if isinstance(self.spec, RemlAr):
            return ar_spectrum(self.model, omega)
        return _lag_weights_from_acvf(self.acvf, self.spec.truncation, omega)

    def at_zero(self):
        return float(self(0.0))


def fit_candidate(spec, data):
    """Fit ``spec`` to ``data`` as given (no demeaning here)."""
    x = np.asarray(data, dtype=float)
    if x.shape[0] < 8:
        raise ValueError("need at least 8 observations")
    if isinstance(spec, RemlAr):
        fit = reml_fit(x, spec.order)
        return SpectralEstimator(spec, model=fit.model, status=fit.status)
    if isinstance(spec, ParzenLagWeights):
        if not 1 <= spec.truncation <= x.shape[0] - 1:
            raise ValueError(f"truncation out of range: {spec.truncation}")
        return SpectralEstimator(spec, acvf=sample_autocovariance(x, spec.truncation))
    raise TypeError(f"not a candidate specification: {spec!r}")


RESTRICTIONS = ("all", "ar-only", "parzen-only")


@dataclass(frozen=True)
class CandidateClass:
    """AR orders 0..max_order followed by Parzen truncations 1..m(n)."""

    candidates: tuple
    max_truncation: int

    @classmethod
    def for_length(cls, n, max_order=MAX_AR_ORDER, max_trunc=None):
        m = max_truncation(n) if max_trunc is None else max_trunc
        specs = tuple(RemlAr(p) for p in range(max_order + 1)) + tuple(
            ParzenLagWeights(h) for h in range(1, m + 1))
        if not specs:
            raise ValueError("empty candidate class")
        return cls(specs, m)

    def restrict(self, restriction):
        if restriction not in RESTRICTIONS:
            raise ValueError(f"restriction must be one of {RESTRICTIONS}, got {restriction!r}")
        if restriction == "all":
            return self
        family = "ar" if restriction == "ar-only" else "parzen"
        kept = tuple(s for s in self.candidates if s.family == family)
        if not kept:
            raise ValueError(f"no candidates left after restriction {restriction!r}")
        return CandidateClass(kept, self.max_truncation)

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self):
        return len(self.candidates)
