"""Slow oracle: wavelet coefficients by direct quadrature of ``2^j ∫ f ψ(2^j x - k)``."""

import numpy as np

from ..errors import AccuracyError, DomainError
from . import daubechies
from .meyer import render_meyer
from .pyramid import CoeffPyramid

MIN_POINTS_PER_OSCILLATION = 16


def _rendered_psi(spec, resolution):
    if spec.family == "daubechies":
        t, _, psi = daubechies.cascade(spec.taps, resolution)
        return t, psi
    return render_meyer(resolution)


def _oscillations(psi):
    crossings = np.count_nonzero(np.diff(np.signbit(psi[np.abs(psi) > 1e-12 * np.abs(psi).max()])))
    return max(1.0, crossings / 2.0)


def quadrature_coeffs(f, spec, scales, positions, resolution=12, max_frequency=None, x0=0.0,
                      shift=0.0, chunk=1 << 22):
    """Coefficients ``c_{j,k} = 2^j ∫ f(x) ψ(2^j (x - x0) - k) dx`` by the trapezoid rule.

    Parameters
    ----------
    f : callable
        Vectorized function of ``x``.
    spec : WaveletSpec
        ψ is rendered by the cascade (Daubechies) or by Fourier synthesis (Meyer).
    scales : iterable of int
        Consecutive scales.
    positions : iterable of int, or mapping ``j -> iterable``
        Translations to evaluate.
    resolution : int or callable
        ``2^resolution`` quadrature points per unit of the wavelet variable, or
        a function of ``j`` returning it.
    max_frequency : float, optional
        Highest frequency of ``f`` in cycles per unit ``x``, used for the
        resolution check.
    shift : float
        Evaluate ``f(x + shift)`` instead of ``f(x)``.

    Raises
    ------
    AccuracyError
        If fewer than 16 points fall on one oscillation of ψ or of ``f``.
    """
    scales = [int(j) for j in scales]
    if not scales or np.any(np.diff(scales) != 1):
        raise DomainError("scales must be consecutive integers")
    coeffs, pos_out = [], []
    for j in scales:
        res = int(resolution(j) if callable(resolution) else resolution)
        t, psi = _rendered_psi(spec, res)
        dt = 2.0**-res
        support = t[-1] - t[0]
        per_psi = support / dt / _oscillations(psi)
        if per_psi < MIN_POINTS_PER_OSCILLATION:
            raise AccuracyError(f"{per_psi:.1f} points per wavelet oscillation at j={j}")
        if max_frequency:
            per_f = 2.0 ** (res + j) / max_frequency
            if per_f < MIN_POINTS_PER_OSCILLATION:
                raise AccuracyError(f"{per_f:.1f} points per signal oscillation at j={j}")
        w = psi * dt
        w = w.copy()
        w[0] *= 0.5
        w[-1] *= 0.5
        ks = np.asarray(positions[j] if isinstance(positions, dict) else positions, dtype=np.int64)
        out = np.empty(ks.size)
        step = max(1, chunk // t.size)
        for start in range(0, ks.size, step):
            kb = ks[start : start + step]
            x = x0 + shift + np.ldexp(t[None, :] + kb[:, None], -j)
            out[start : start + step] = f(x) @ w
        coeffs.append(out)
        pos_out.append(ks)
    return CoeffPyramid(scales[0], scales[-1], coeffs, pos_out,
                        meta={"wavelet": spec.name, "source": "quadrature"})
