"""Frequency-domain cross-validation over a candidate class and the resulting HAC standard error."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from fdcv.estimators import CandidateClass, fit_candidate
from fdcv.spectral import TimeSeries, leave_one_out_series

EULER_GAMMA = 0.5772156649015329
DEFAULT_C = 0.8
LEVELS = (0.90, 0.95, 0.99)


class SelectionError(RuntimeError):
    pass


def band_size(n, c):
    """floor(ntilde^c), the number of low Fourier frequencies entering CV(f, c)."""
    if not 0 < c <= 1:
        raise ValueError(f"c must lie in (0, 1], got {c}")
    nt = (n - 1) // 2
    if nt < 1:
        raise ValueError("series too short for any Fourier frequency")
    # guard against 16**0.5 == 3.9999...
    return max(int(math.floor(nt ** c + 1e-9)), 1)


@dataclass(frozen=True)
class CvScore:
    candidate: object
    score: float
    band_size: int
    disqualified: bool = False

    @property
    def label(self):
        return self.candidate.label


@dataclass(frozen=True)
class CvTerms:
    """Per-frequency CV terms, rows = candidates, columns = j = 1..max_band.

    Skipped frequencies (zero periodogram ordinate) are NaN in every row;
    a candidate whose leave-one-out fit fails or is non-positive at w_j
    gets +inf in that column.
    """

    candidates: tuple
    terms: np.ndarray
    skipped: np.ndarray

    def scores(self, band):
        if band > self.terms.shape[1]:
            raise ValueError(f"band {band} exceeds computed band {self.terms.shape[1]}")
        keep = ~self.skipped[:band]
        if not keep.any():
            raise SelectionError("every periodogram ordinate in the band is zero")
        return self.terms[:, :band][:, keep].mean(axis=1)

    def score_list(self, band, restriction_family=None):
        vals = self.scores(band)
        return [CvScore(c, float(s), band, not np.isfinite(s))
                for c, s in zip(self.candidates, vals)
                if restriction_family is None or c.family == restriction_family]


def cv_terms(series, candidates, max_band):
    """Evaluate [log f^{-j}(w_j) - log I(w_j) - gamma]^2 - pi^2/6 for j = 1..max_band."""
    series = series if isinstance(series, TimeSeries) else TimeSeries(series)
    candidates = tuple(candidates)
    n = series.n
    if not 1 <= max_band <= series.n_tilde:
        raise ValueError(f"band must lie in 1..{series.n_tilde}")
    ordinates = series.periodogram.ordinates
    terms = np.full((len(candidates), max_band), np.nan)
    skipped = np.zeros(max_band, dtype=bool)
    for j in range(1, max_band + 1):
        I = ordinates[j - 1]
        if not I > 0:
            skipped[j - 1] = True
            continue
        target = math.log(I) + EULER_GAMMA
        omega = 2 * math.pi * j / n
        loo = leave_one_out_series(series, j).values
        for i, spec in enumerate(candidates):
            try:
                f = float(fit_candidate(spec, loo)(omega))
            except (ValueError, ArithmeticError, RuntimeError):
                f = float("nan")
            if f > 0 and math.isfinite(f):
                terms[i, j - 1] = (math.log(f) - target) ** 2 - math.pi ** 2 / 6
            else:
                terms[i, j - 1] = np.inf
    return CvTerms(candidates, terms, skipped)


def cv_score(candidate, series, c=DEFAULT_C):
    series = series if isinstance(series, TimeSeries) else TimeSeries(series)
    band = band_size(series.n, c)
    return cv_terms(series, [candidate], band).score_list(band)[0]


def hac_standard_error(f0_hat, n):
    """sqrt(2 pi f(0) / (n - 1))."""
    if not f0_hat > 0:
        raise ValueError(f"spectral estimate at zero must be positive, got {f0_hat}")
    if n < 2:
        raise ValueError("need n >= 2")
    return math.sqrt(2 * math.pi * f0_hat / (n - 1))


def confidence_intervals(center, se, levels=LEVELS):
    out = {}
    for level in levels:
        z = norm.ppf(0.5 + level / 2)
        out[level] = (center - z * se, center + z * se)
    return out


@dataclass(frozen=True)
class FdcvResult:
    selected: object  # SpectralEstimator refitted on the demeaned data
    all_scores: list
    f0_hat: float
    se_hat: float
    mean: float
    n: int
    c: float
    restriction: str
    intervals: dict = field(default_factory=dict)

    @property
    def long_run_variance(self):
        return 2 * math.pi * self.f0_hat

    def to_dict(self):
        return {
            "n": self.n,
            "c": self.c,
            "restriction": self.restriction,
            "mean": self.mean,
            "selected": self.selected.spec.label,
            "band_size": self.all_scores[0].band_size,
            "scores": {s.label: (None if s.disqualified else s.score) for s in self.all_scores},
            "f0_hat": self.f0_hat,
            "long_run_variance": self.long_run_variance,
            "se_hat": self.se_hat,
            "intervals": {f"{lvl:.2f}": list(iv) for lvl, iv in self.intervals.items()},
        }


_FAMILY = {"all": None, "ar-only": "ar", "parzen-only": "parzen"}


def select(series, candidate_class=None, c=DEFAULT_C, restriction="all", terms=None, levels=LEVELS):
    """Pick the CV-minimising candidate and turn it into a HAC standard error.

    Ties go to the earlier candidate in class order. The winner is refitted
    on the mean-corrected original data; a winner whose refit is not
    positive at frequency zero is passed over for the next best score.
    ``terms`` may carry precomputed per-frequency terms covering the band.
    """
    series = series if isinstance(series, TimeSeries) else TimeSeries(series)
    n = series.n
    if candidate_class is None:
        candidate_class = CandidateClass.for_length(n)
    if restriction not in _FAMILY:
        raise ValueError(f"restriction must be one of {tuple(_FAMILY)}")
    pool = candidate_class.restrict(restriction)
    band = band_size(n, c)
    if terms is None:
        terms = cv_terms(series, pool.candidates, band)
    family = _FAMILY[restriction]
    scores = [s for s in terms.score_list(band) if s.candidate in pool.candidates
              and (family is None or s.candidate.family == family)]
    if not scores:
        raise SelectionError("no candidate scores available")
    order = sorted(range(len(scores)), key=lambda i: (scores[i].score, i))
    demeaned = series.values - series.mean()
    for i in order:
        if scores[i].disqualified:
            break
        est = fit_candidate(scores[i].candidate, demeaned)
        f0 = est.at_zero()
        if f0 > 0 and math.isfinite(f0):
            se = hac_standard_error(f0, n)
            return FdcvResult(est, scores, f0, se, series.mean(), n, c, restriction,
                              confidence_intervals(series.mean(), se, levels))
    raise SelectionError("all candidates disqualified")
