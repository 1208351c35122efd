"""Frequency-domain cross-validation for HAC standard errors of a mean."""

from fdcv.ar import ArModel, StationarityError, ar_spectrum, ar_to_pacf, burg_fit, pacf_to_ar, theoretical_acvf
from fdcv.baselines import BaselineError, BaselineResult, am_pw_estimate, nw_pw_estimate
from fdcv.estimators import (CandidateClass, ParzenLagWeights, RemlAr, SpectralEstimator, fit_candidate,
                             lag_weights_estimate, max_truncation, parzen_kernel)
from fdcv.reml import RemlError, RemlFit, reml_fit, restricted_loglik
from fdcv.selector import FdcvResult, SelectionError, band_size, cv_score, cv_terms, select
from fdcv.sim import CoverageReport, DgpSpec, badness, relative_efficiency, run_experiment, simulate
from fdcv.spectral import Periodogram, TimeSeries, leave_one_out_dft, leave_one_out_series, sample_autocovariance
from fdcv.toeplitz import ConvergenceError, ToeplitzOperator, pcg_solve, tchan_preconditioner

__version__ = "0.1.0"
