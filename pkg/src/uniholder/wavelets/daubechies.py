"""Daubechies extremal-phase filters and cascade rendering of φ and ψ.

Filters are obtained by spectral factorization in extended precision
(``mpmath``), so any order ``N >= 2`` is available without tabulated taps.
Conventions: ``h`` sums to ``sqrt(2)``, ``g[n] = (-1)^n h[L-1-n]``,
``φ(t) = sqrt(2) Σ h[n] φ(2t - n)`` and ``ψ(t) = sqrt(2) Σ g[n] φ(2t - n)``,
both supported on ``[0, L-1]`` with ``L = 2N``.
"""

from functools import lru_cache

import mpmath
import numpy as np

from ..errors import DomainError

# Hölder exponents of the Daubechies wavelets (Daubechies 1992, Table 7.2
# rounded); used only to fill WaveletSpec.regularity_gamma.
_REGULARITY = {2: 0.550, 3: 1.088, 4: 1.618, 5: 1.969, 6: 2.189, 7: 2.460, 8: 2.761, 9: 3.074, 10: 3.361}


def regularity(N):
    """Hölder regularity of the order-``N`` Daubechies wavelet.

    Orders beyond the table use the asymptotic rate ``0.2075 N``.
    """
    if N in _REGULARITY:
        return _REGULARITY[N]
    return 0.2075 * N


@lru_cache(maxsize=None)
def _taps_tuple(N):
    with mpmath.workdps(60):
        # P(y) = Σ_k C(N-1+k, k) y^k; its roots give the half-band factor
        coeffs = [mpmath.binomial(N - 1 + k, k) for k in range(N)]
        roots = mpmath.polyroots(coeffs[::-1], maxsteps=400, extraprec=400) if N > 1 else []
        poly = [mpmath.mpf(1)]
        for _ in range(N):
            poly = [a + b for a, b in zip(poly + [0], [0] + poly)]
        for y in roots:
            c = 2 - 4 * y
            z = (c + mpmath.sqrt(c * c - 4)) / 2
            if abs(z) > 1:
                z = 1 / z
            poly = [a - z * b for a, b in zip(poly + [0], [0] + poly)]
        h = [mpmath.re(c) for c in poly]
        total = sum(h)
        h = [c * mpmath.sqrt(2) / total for c in h]
        return tuple(float(c) for c in h)


def daubechies_taps(N: int) -> np.ndarray:
    """Low-pass filter of the Daubechies wavelet with ``N`` vanishing moments.

    Parameters
    ----------
    N : int
        Number of vanishing moments, at least 2 (``N = 1`` is the discontinuous
        Haar wavelet, which has no positive Hölder regularity in the sense used
        here).

    Returns
    -------
    ndarray, shape (2N,)
    """
    N = int(N)
    if N < 2:
        raise DomainError(f"Daubechies order must be >= 2, got {N}")
    return np.array(_taps_tuple(N))


def highpass(h):
    """Quadrature mirror filter ``g[n] = (-1)^n h[L-1-n]``."""
    h = np.asarray(h, dtype=float)
    L = h.size
    return np.array([(-1) ** n * h[L - 1 - n] for n in range(L)])


def _phi_at_integers(h):
    L = h.size
    A = np.zeros((L, L))
    for i in range(L):
        for k in range(L):
            n = 2 * i - k
            if 0 <= n < L:
                A[i, k] = np.sqrt(2.0) * h[n]
    w, v = np.linalg.eig(A)
    idx = int(np.argmin(np.abs(w - 1.0)))
    phi = np.real(v[:, idx])
    return phi / phi.sum()


def _refine(h, coarse, level):
    # values on step 2^-(level-1) -> values on step 2^-level
    L = h.size
    half = 2 ** (level - 1)
    n_out = (L - 1) * 2 ** level + 1
    out = np.zeros(n_out)
    idx = np.arange(n_out)
    for n in range(L):
        src = idx - n * half
        ok = (src >= 0) & (src < coarse.size)
        out[ok] += np.sqrt(2.0) * h[n] * coarse[src[ok]]
    return out


@lru_cache(maxsize=32)
def _cascade_cached(taps, resolution):
    h = np.array(taps)
    g = highpass(h)
    phi = _phi_at_integers(h)
    levels = [phi]
    for r in range(1, resolution + 1):
        levels.append(_refine(h, levels[-1], r))
    if resolution >= 1:
        psi = _refine(g, levels[resolution - 1], resolution)
    else:
        # ψ on the half-integer grid from φ at integers, then keep the integers
        psi = _refine(g, phi, 1)[::2]
    phi_r = levels[resolution]
    phi_r.setflags(write=False)
    psi.setflags(write=False)
    return phi_r, psi


def cascade(h, resolution=12):
    """Render ``φ`` and ``ψ`` on the dyadic grid ``t = i 2^{-resolution}``.

    Parameters
    ----------
    h : array_like
        Orthonormal low-pass filter.
    resolution : int
        ``2^resolution`` points per unit of ``t``.

    Returns
    -------
    t, phi, psi : ndarray
        Grid on ``[0, L-1]`` and the exact values of the refinable functions
        there (exact up to round-off: the cascade is evaluated on dyadic points,
        not iterated to a fixed point).
    """
    taps = tuple(float(c) for c in np.asarray(h, dtype=float))
    resolution = int(resolution)
    if resolution < 0:
        raise DomainError("resolution must be nonnegative")
    phi, psi = _cascade_cached(taps, resolution)
    t = np.arange(phi.size) / 2.0**resolution
    return t, phi, psi


def phi_first_moment(h) -> float:
    """``∫ t φ(t) dt``, exact from the filter: ``Σ n h[n] / sqrt(2)``.

    Follows from the refinement equation: the first moment ``μ`` satisfies
    ``μ = (μ + Σ n h[n]/sqrt(2)) / 2``.
    """
    h = np.asarray(h, dtype=float)
    return float(np.sum(np.arange(h.size) * h) / np.sqrt(2.0))
