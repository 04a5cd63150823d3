"""primerace: a numerical laboratory for the joint statistics of primes in
multiple short intervals -- sieve ground truth, zero-sum explicit formulas,
covariance asymptotics with the Coulomb-law repulsion, the random phase model
over zeta zeros, Gaussian race-density predictions, and weighted-moment
experiments.
"""

__version__ = "0.1.0"

from .config import RaceConfig
from .covariance import (CorrelationMatrix, CovarianceReport,
                         almost_identity_stats, correlation_matrix,
                         covariance_asymptotic, covariance_numeric,
                         covariance_report, leading_correlation, mellin_check)
from .events import compile_event
from .explicit import deviation_explicit, residual_survey
from .gaussian import (GaussianPrediction, box_probability,
                       density_comparison, gaussian_event_estimate,
                       large_deviation_prediction, model_correlation,
                       negcorr_expansion, ordering_prediction)
from .logdensity import (EmpiricalDistribution, collect,
                         empirical_event_density, ks_statistic,
                         neighbor_config)
from .model import (DensityEstimate, SampleBatch, char_fn, estimate_event,
                    estimate_ordering, estimate_top_s_ordering, sample,
                    tail_bound_check)
from .moments import (qli_resonance_count, smooth_weight, truncation_gap,
                      weighted_moment)
from .sieve import PsiSieve
from .weights import GAMMA_E, delta_repulsion, weight, weights_at_zeros
from .zeros import ZeroTable, bundled_table, count_below, load_zeros, rvm_residuals

__all__ = [
    "GAMMA_E",
    "CorrelationMatrix",
    "CovarianceReport",
    "DensityEstimate",
    "EmpiricalDistribution",
    "GaussianPrediction",
    "PsiSieve",
    "RaceConfig",
    "SampleBatch",
    "ZeroTable",
    "almost_identity_stats",
    "box_probability",
    "bundled_table",
    "char_fn",
    "collect",
    "compile_event",
    "correlation_matrix",
    "count_below",
    "covariance_asymptotic",
    "covariance_numeric",
    "covariance_report",
    "delta_repulsion",
    "density_comparison",
    "deviation_explicit",
    "empirical_event_density",
    "estimate_event",
    "estimate_ordering",
    "estimate_top_s_ordering",
    "gaussian_event_estimate",
    "ks_statistic",
    "large_deviation_prediction",
    "leading_correlation",
    "load_zeros",
    "mellin_check",
    "model_correlation",
    "neighbor_config",
    "negcorr_expansion",
    "ordering_prediction",
    "qli_resonance_count",
    "residual_survey",
    "rvm_residuals",
    "sample",
    "smooth_weight",
    "tail_bound_check",
    "truncation_gap",
    "weight",
    "weighted_moment",
    "weights_at_zeros",
]
