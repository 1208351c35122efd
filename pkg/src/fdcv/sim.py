"""Monte Carlo coverage experiments for HAC confidence intervals of a mean."""

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter, lfiltic

from fdcv.ar import ArModel, theoretical_acvf
from fdcv.baselines import am_pw_estimate, nw_pw_estimate
from fdcv.estimators import CandidateClass
from fdcv.selector import DEFAULT_C, LEVELS, band_size, cv_terms, select
from fdcv.spectral import TimeSeries

SCHEMA_VERSION = 1
RNG_NAME = "numpy PCG64 seeded by SeedSequence(seed, spawn_key=(replication,))"
CV_METHODS = {"CV_C": "all", "CV_AR": "ar-only", "CV_PZ": "parzen-only"}
BASELINES = {"AM-PW": am_pw_estimate, "NW-PW": nw_pw_estimate}
DEFAULT_METHODS = ("CV_C", "CV_AR", "CV_PZ", "AM-PW", "NW-PW")
FAMILIES = ("white-noise", "ar1", "ma1", "maq", "ar2-half")


@dataclass(frozen=True)
class DgpSpec:
    """Gaussian data-generating process with unit innovation variance and zero mean.

    family: "white-noise", "ar1" (phi), "ma1" (psi), "maq" (alpha, beta, q)
    or "ar2-half" (phi, giving coefficients phi/2, phi/2).
    """

    family: str
    n: int
    phi: float = 0.0
    psi: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    q: int = 2

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown DGP family {self.family!r}; choose from {FAMILIES}")
        if self.n < 8:
            raise ValueError("n must be at least 8")
        if self.family == "ar1" and not abs(self.phi) < 1:
            raise ValueError("AR(1) coefficient must lie in (-1, 1)")
        if self.family == "ar2-half" and not -2 < self.phi < 1:
            raise ValueError("AR(2) with coefficients (phi/2, phi/2) is stationary only for -2 < phi < 1")
        if self.family == "maq" and self.q not in (2, 3):
            raise ValueError("q must be 2 or 3")

    @property
    def ar_coefficients(self):
        if self.family == "ar1":
            return np.array([self.phi])
        if self.family == "ar2-half":
            return np.array([self.phi / 2, self.phi / 2])
        return np.zeros(0)

    @property
    def ma_coefficients(self):
        """theta_1..theta_q of X_t = e_t + sum_k theta_k e_{t-k}."""
        if self.family == "ma1":
            return np.array([self.psi])
        if self.family == "maq":
            out = np.zeros(self.q)
            out[0] += self.alpha
            out[self.q - 1] += self.beta
            return out
        return np.zeros(0)

    @property
    def true_ar_order(self):
        return {"ar1": 1, "ar2-half": 2, "white-noise": 0}.get(self.family)

    def label(self):
        if self.family == "white-noise":
            return f"WN n={self.n}"
        if self.family == "ar1":
            return f"AR1(phi={self.phi:g}) n={self.n}"
        if self.family == "ma1":
            return f"MA1(psi={self.psi:g}) n={self.n}"
        if self.family == "maq":
            return f"MA{self.q}(alpha={self.alpha:g}, beta={self.beta:g}) n={self.n}"
        return f"AR2(phi/2, phi/2; phi={self.phi:g}) n={self.n}"

    def to_dict(self):
        return {"family": self.family, "n": self.n, "phi": self.phi, "psi": self.psi,
                "alpha": self.alpha, "beta": self.beta, "q": self.q}


def replication_rng(seed, index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def simulate(spec, seed=None, rng=None):
    """One stationary Gaussian path of length spec.n.

    AR paths start from the exact stationary distribution of the first p
    values; MA paths draw their q presample innovations.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    n = spec.n
    ar = spec.ar_coefficients
    ma = spec.ma_coefficients
    if ar.size:
        p = ar.size
        acvf = theoretical_acvf(ArModel(ar, 1.0), p - 1)
        gamma = np.array([[acvf[abs(i - j)] for j in range(p)] for i in range(p)])
        head = np.linalg.cholesky(gamma) @ rng.standard_normal(p)
        e = rng.standard_normal(n - p)
        a = np.concatenate([[1.0], -ar])
        zi = lfiltic([1.0], a, head[::-1])
        tail, _ = lfilter([1.0], a, e, zi=zi)
        return np.concatenate([head, tail])
    q = ma.size
    e = rng.standard_normal(n + q)
    if q == 0:
        return e
    return lfilter(np.concatenate([[1.0], ma]), [1.0], e)[q:]


def true_long_run_variance(spec):
    """2 pi f(0) of the process."""
    if spec.family == "white-noise":
        s2 = 1.0
    elif spec.family in ("ar1", "ar2-half"):
        s2 = 1.0 / (1.0 - spec.ar_coefficients.sum()) ** 2
    else:
        s2 = (1.0 + spec.ma_coefficients.sum()) ** 2
    if not s2 > 0:
        raise ValueError(f"{spec.label()} has zero spectral density at frequency zero")
    return s2


def _logit(p):
    return math.log(p / (1 - p))


def badness(p, nominal=0.95):
    """Twice the logit distance to nominal when under-covering, once when over-covering."""
    if p <= 0 or p >= 1:
        return math.inf
    d = abs(_logit(p) - _logit(nominal))
    return 2 * d if p <= nominal else d


def relative_efficiency(coverages, nominal=0.95):
    """min_k B(p_k) / B(p_i); a coverage of exactly 1 scores 0."""
    b = [badness(p, nominal) for p in coverages]
    best = min(b)
    out = []
    for p, bi in zip(coverages, b):
        if p >= 1 or math.isinf(bi):
            out.append(0.0)
        elif bi == 0:
            out.append(1.0)
        else:
            out.append(best / bi)
    return out


def _parse_method(name, default_c):
    base, _, c = name.partition("@")
    if base in CV_METHODS:
        return base, float(c) if c else default_c
    if base in BASELINES and not c:
        return base, None
    raise ValueError(f"unknown method {name!r}")


def _one_replication(dgp, methods, seed, index, default_c, levels, max_trunc=None):
    """Simulate one path and run every method. Returns a plain dict."""
    x = simulate(dgp, rng=replication_rng(seed, index))
    series = TimeSeries(x)
    z = {lvl: _z(lvl) for lvl in levels}
    out = {}
    parsed = {m: _parse_method(m, default_c) for m in methods}
    cv_cs = [c for base, c in parsed.values() if base in CV_METHODS]
    terms = None
    if cv_cs:
        cls = CandidateClass.for_length(dgp.n, max_trunc=max_trunc)
        try:
            terms = cv_terms(series, cls.candidates, max(band_size(dgp.n, c) for c in cv_cs))
        except Exception as exc:  # noqa: BLE001 - recorded as a failed replication
            terms = exc
    for name, (base, c) in parsed.items():
        try:
            if base in CV_METHODS:
                if isinstance(terms, Exception):
                    raise terms
                res = select(series, cls, c, CV_METHODS[base], terms=terms)
                chosen = res.selected.spec
                rec = {"se": res.se_hat, "f0": res.f0_hat, "family": chosen.family,
                       "label": chosen.label, "order": getattr(chosen, "order", None)}
            else:
                res = BASELINES[base](x)
                rec = {"se": res.se_hat, "f0": res.f0_hat, "bandwidth": res.bandwidth}
            rec["covered"] = {lvl: bool(abs(x.mean()) <= z[lvl] * rec["se"]) for lvl in levels}
        except Exception as exc:  # noqa: BLE001
            rec = {"error": f"{type(exc).__name__}: {exc}"}
        out[name] = rec
    return out


def _z(level):
    from scipy.stats import norm
    return float(norm.ppf(0.5 + level / 2))


def _run_chunk(args):
    dgp, methods, seed, indices, default_c, levels, max_trunc = args
    return [_one_replication(dgp, methods, seed, i, default_c, levels, max_trunc) for i in indices]


@dataclass
class CoverageReport:
    dgp: DgpSpec
    methods: tuple
    levels: tuple
    replications: int
    seed: int
    c: float
    coverage: dict
    failures: dict
    mean_se: dict
    selection: dict = field(default_factory=dict)
    efficiency: dict = field(default_factory=dict)
    badness: dict = field(default_factory=dict)
    rng: str = RNG_NAME
    max_truncation: int = None

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "dgp": self.dgp.to_dict(),
            "label": self.dgp.label(),
            "true_long_run_variance": _safe_lrv(self.dgp),
            "methods": list(self.methods),
            "levels": [float(lvl) for lvl in self.levels],
            "replications": self.replications,
            "seed": self.seed,
            "c": self.c,
            "rng": self.rng,
            "max_truncation": self.max_truncation,
            "coverage": {m: {f"{lvl:.2f}": v for lvl, v in cov.items()} for m, cov in self.coverage.items()},
            "failures": self.failures,
            "mean_se": self.mean_se,
            "selection": self.selection,
            "badness_95": {m: _finite(b) for m, b in self.badness.items()},
            "efficiency_95": {m: _finite(e) for m, e in self.efficiency.items()},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self):
        head = f"{'Method':<12}" + "".join(f"{f'{100 * lvl:g}%':>8}" for lvl in self.levels)
        lines = [f"{self.dgp.label()}  ({self.replications} replications, seed {self.seed})", head,
                 "-" * len(head)]
        for m in self.methods:
            cov = self.coverage[m]
            lines.append(f"{m:<12}" + "".join(
                f"{100 * cov[lvl]:8.1f}" if cov[lvl] is not None else f"{'-':>8}" for lvl in self.levels))
        if self.efficiency:
            lines.append("")
            lines.append("relative efficiency at 95%: " + ", ".join(
                f"{m} {e:.2f}" for m, e in self.efficiency.items()))
        if any(self.failures.values()):
            lines.append("failed replications: " + ", ".join(
                f"{m} {k}" for m, k in self.failures.items() if k))
        return "\n".join(lines)


def _finite(v):
    return v if v is not None and math.isfinite(v) else None


def _safe_lrv(dgp):
    try:
        return true_long_run_variance(dgp)
    except ValueError:
        return 0.0


def run_experiment(dgp, methods=DEFAULT_METHODS, replications=3000, levels=LEVELS, seed=0,
                   c=DEFAULT_C, threads=1, chunk_size=50, max_truncation=None):
    """Coverage of the nominal intervals for mu = 0 over ``replications`` paths.

    Methods are "CV_C", "CV_AR", "CV_PZ", "AM-PW", "NW-PW"; a CV method may
    carry its own exponent as "CV_C@0.5". Replication i always uses the same
    random stream, so the report does not depend on ``threads``.
    ``max_truncation`` overrides the Parzen cap m(n) of the candidate class.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    methods = tuple(methods)
    levels = tuple(levels)
    for m in methods:
        _parse_method(m, c)
    chunks = [(dgp, methods, seed, range(i, min(i + chunk_size, replications)), c, levels,
               max_truncation)
              for i in range(0, replications, chunk_size)]
    threads = max(1, int(threads or os.cpu_count() or 1))
    if threads == 1:
        results = [r for ch in chunks for r in _run_chunk(ch)]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [r for rs in pool.map(_run_chunk, chunks) for r in rs]
    report = summarize(dgp, methods, levels, seed, c, results)
    report.max_truncation = max_truncation
    return report


def summarize(dgp, methods, levels, seed, c, results):
    coverage, failures, mean_se, selection = {}, {}, {}, {}
    for m in methods:
        ok = [r[m] for r in results if "error" not in r[m]]
        failures[m] = len(results) - len(ok)
        coverage[m] = {lvl: (sum(r["covered"][lvl] for r in ok) / len(ok) if ok else None)
                       for lvl in levels}
        mean_se[m] = float(np.mean([r["se"] for r in ok])) if ok else None
        if m.partition("@")[0] in CV_METHODS and ok:
            stats = {"ar_win_rate": sum(r["family"] == "ar" for r in ok) / len(ok)}
            true_p = dgp.true_ar_order
            if true_p is not None:
                stats["true_order_rate"] = sum(r["order"] == true_p for r in ok) / len(ok)
            counts = {}
            for r in ok:
                counts[r["label"]] = counts.get(r["label"], 0) + 1
            stats["counts"] = dict(sorted(counts.items()))
            selection[m] = stats
    report = CoverageReport(dgp, methods, levels, len(results), seed, c, coverage, failures,
                            mean_se, selection)
    triple = ("CV_C", "AM-PW", "NW-PW")
    if 0.95 in levels and all(t in methods and coverage[t] is not None for t in triple):
        ps = [coverage[t][0.95] for t in triple]
        report.efficiency = dict(zip(triple, relative_efficiency(ps)))
        report.badness = {t: badness(p) for t, p in zip(triple, ps)}
    return report
