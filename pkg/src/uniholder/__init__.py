"""Global Hölder indices of sampled signals from wavelet coefficients.

The lower index is read from the decay of per-scale coefficient maxima and the
upper index from a gap-filling irregularity criterion.  Brute-force moduli of
smoothness give independent estimates of both.
"""

__version__ = "0.1.0"

from .errors import AccuracyError, DomainError, EstimationError, HolderError, TruncationError
from .estimators import (CriterionTrace, irregularity_criterion, lower_index_wavelet,
                         naive_upper_slope, upper_index_wavelet)
from .smoothness import (IndexEstimate, ModulusProfile, SampledSignal, finite_difference,
                         modulus_of_smoothness, modulus_profile, oracle_lower_index,
                         oracle_upper_index)
from .report import AnalysisReport, analyze_pyramid, analyze_signal
from .theta import ScaleSequence, ThetaProfile, theta_build, theta_properties_check
from .wavelets import (CoeffPyramid, TrigSeries, WaveletSpec, dwt_pyramid, meyer_psi_hat,
                       quadrature_coeffs, trig_series_coeffs_meyer)
from .witness import criterion_equivalence_check, weak_holder_witness

__all__ = [
    "AccuracyError",
    "AnalysisReport",
    "CoeffPyramid",
    "CriterionTrace",
    "DomainError",
    "EstimationError",
    "HolderError",
    "IndexEstimate",
    "ModulusProfile",
    "SampledSignal",
    "ScaleSequence",
    "ThetaProfile",
    "TrigSeries",
    "TruncationError",
    "WaveletSpec",
    "analyze_pyramid",
    "analyze_signal",
    "criterion_equivalence_check",
    "dwt_pyramid",
    "finite_difference",
    "irregularity_criterion",
    "lower_index_wavelet",
    "meyer_psi_hat",
    "modulus_of_smoothness",
    "modulus_profile",
    "naive_upper_slope",
    "oracle_lower_index",
    "oracle_upper_index",
    "quadrature_coeffs",
    "theta_build",
    "theta_properties_check",
    "trig_series_coeffs_meyer",
    "upper_index_wavelet",
    "weak_holder_witness",
]
