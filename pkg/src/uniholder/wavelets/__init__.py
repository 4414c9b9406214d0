"""Wavelet engine: filter bank, quadrature oracle and Meyer closed forms."""

from .daubechies import cascade, daubechies_taps, phi_first_moment
from .meyer import TrigSeries, meyer_psi, meyer_psi_hat, meyer_series_pyramid, trig_series_coeffs_meyer
from .pyramid import CoeffPyramid
from .quadrature import quadrature_coeffs
from .transform import WaveletSpec, dwt_pyramid, sample_offset, wavedec, waverec

__all__ = [
    "CoeffPyramid",
    "TrigSeries",
    "WaveletSpec",
    "cascade",
    "daubechies_taps",
    "dwt_pyramid",
    "meyer_psi",
    "meyer_psi_hat",
    "meyer_series_pyramid",
    "phi_first_moment",
    "quadrature_coeffs",
    "sample_offset",
    "trig_series_coeffs_meyer",
    "wavedec",
    "waverec",
]
