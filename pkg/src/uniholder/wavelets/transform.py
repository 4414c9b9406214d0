"""Periodic orthogonal filter bank and the sampled-signal pyramid.

Samples are taken as scaling coefficients at the finest level,
``a_k = f(x_k) sqrt(dx)``.  After ``m`` analysis steps the detail ``d_k``
approximates the orthonormal coefficient of scale ``j = -log2(dx) - m``;
the L∞ coefficient is ``c_{j,k} = d_k / sqrt(2^m dx) = 2^{j/2} d_k``.

Because ``∫ φ_{J,k} f ≈ f(x_k + μ dx) sqrt(dx)`` with ``μ = ∫ t φ``, the pyramid
is that of ``x ↦ f(x - μ dx)``; :func:`sample_offset` returns ``μ dx`` for
oracles that want to compare against exact integrals.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from ..errors import DomainError
from . import daubechies
from .pyramid import CoeffPyramid

FAMILIES = ("daubechies", "meyer")


@dataclass(frozen=True)
class WaveletSpec:
    """Wavelet choice: ``daubechies`` with ``N`` vanishing moments, or ``meyer``.

    ``regularity_gamma`` is the Hölder regularity of ψ (infinite for Meyer,
    whose Fourier transform has compact support).
    """

    family: str
    N: int = 0
    regularity_gamma: float = 0.0
    taps: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown wavelet family {self.family!r}")
        if not self.regularity_gamma > 0:
            raise DomainError("regularity_gamma must be positive")

    @classmethod
    def daubechies(cls, N: int = 4):
        taps = daubechies.daubechies_taps(N)
        taps.setflags(write=False)
        return cls("daubechies", int(N), daubechies.regularity(int(N)), taps)

    @classmethod
    def meyer(cls):
        return cls("meyer", 0, math.inf, None)

    @classmethod
    def parse(cls, text: str):
        """Parse ``"daubechies:N"``, ``"dbN"`` or ``"meyer"``."""
        text = text.strip().lower()
        if text == "meyer":
            return cls.meyer()
        if text.startswith("daubechies"):
            _, _, order = text.partition(":")
            return cls.daubechies(int(order) if order else 4)
        if text.startswith("db") and text[2:].isdigit():
            return cls.daubechies(int(text[2:]))
        raise DomainError(f"cannot parse wavelet {text!r}; use daubechies:N or meyer")

    @property
    def name(self) -> str:
        return "meyer" if self.family == "meyer" else f"daubechies:{self.N}"

    @property
    def filter_length(self) -> int:
        return 0 if self.taps is None else int(self.taps.size)

    def to_dict(self):
        gamma = self.regularity_gamma
        return {"name": self.name, "family": self.family, "N": self.N,
                "regularity_gamma": gamma if math.isfinite(gamma) else "inf"}


def _filters(spec):
    if spec.family != "daubechies":
        raise DomainError("the filter bank needs a Daubechies wavelet")
    h = np.asarray(spec.taps, dtype=float)
    return h, daubechies.highpass(h)


def analysis_step(a, h, g):
    """One periodic analysis step: ``(Σ h[n] a[2k+n], Σ g[n] a[2k+n])``."""
    a = np.asarray(a, dtype=float)
    n = a.size
    if n % 2:
        raise DomainError("analysis needs an even number of coefficients")
    L = h.size
    reps = (L - 1) // n + 1
    ext = np.concatenate([a] * (reps + 1))
    lo = np.zeros(n // 2)
    hi = np.zeros(n // 2)
    for i in range(L):
        seg = ext[i : i + n : 2]
        lo += h[i] * seg
        hi += g[i] * seg
    return lo, hi


def synthesis_step(lo, hi, h, g):
    """Inverse of :func:`analysis_step`."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = 2 * lo.size
    out = np.zeros(n)
    base = 2 * np.arange(lo.size)
    for i in range(h.size):
        out[(base + i) % n] += h[i] * lo + g[i] * hi
    return out


def wavedec(values, spec: WaveletSpec, levels: int):
    """Orthonormal periodic decomposition.

    Returns
    -------
    approx : ndarray
    details : list of ndarray
        ``details[m - 1]`` is the level-``m`` detail (finest first).
    """
    h, g = _filters(spec)
    a = np.asarray(values, dtype=float)
    if levels < 0 or a.size % (2**levels):
        raise DomainError(f"{a.size} samples do not support {levels} levels")
    details = []
    for _ in range(levels):
        a, d = analysis_step(a, h, g)
        details.append(d)
    return a, details


def waverec(approx, details, spec: WaveletSpec):
    """Inverse of :func:`wavedec`."""
    h, g = _filters(spec)
    a = np.asarray(approx, dtype=float)
    for d in reversed(details):
        a = synthesis_step(a, d, h, g)
    return a


def sample_offset(spec: WaveletSpec, dx: float) -> float:
    """Offset ``μ dx`` between the sampled signal and the function the pyramid describes."""
    h, _ = _filters(spec)
    return daubechies.phi_first_moment(h) * dx


def seam_count(level: int, filter_length: int) -> int:
    """Trailing coefficients at ``level`` whose filter support wraps around."""
    return int(math.ceil((filter_length - 1) * (1.0 - 2.0 ** (-level)) - 1e-12))


def scale_label_offset(dx: float):
    """``J = -log2(dx)`` rounded, and whether ``dx`` is an exact power of two."""
    J = -math.log2(dx)
    Jr = int(round(J))
    return Jr, abs(J - Jr) < 1e-9


def available_scales(n: int, dx: float, filter_length: int):
    """Scales of an ``n``-sample signal that keep at least one seam-free coefficient."""
    Jr, _ = scale_label_offset(dx)
    m = 1
    while n % (2 ** (m + 1)) == 0 and n // 2 ** (m + 1) > seam_count(m + 1, filter_length):
        m += 1
    return Jr - m, Jr - 1


def dwt_pyramid(signal, spec: WaveletSpec, j_range=None, exclude_seam=True) -> CoeffPyramid:
    """L∞-normalized detail coefficients of a sampled signal.

    Parameters
    ----------
    signal : SampledSignal
        Length must be a power of two.  The transform wraps periodically
        regardless of ``signal.extension``.
    spec : WaveletSpec
        A Daubechies wavelet.
    j_range : (int, int), optional
        Scales to keep; defaults to every scale with a seam-free coefficient.
    exclude_seam : bool
        Drop coefficients whose filter support wraps around the end of the
        window.  Their translation indices are kept in ``positions``.

    Returns
    -------
    CoeffPyramid
        ``positions`` are translation indices relative to ``signal.x0``:
        coefficient ``(j, k)`` is attached to ``ψ(2^j (x - x0) - k)``.
    """
    n = signal.n
    if n & (n - 1):
        raise DomainError(f"the filter bank needs a power-of-two length, got {n}")
    L = spec.filter_length if spec.family == "daubechies" else 0
    _filters(spec)
    Jr, dyadic = scale_label_offset(signal.dx)
    lo_avail, hi_avail = available_scales(n, signal.dx, L)
    if j_range is None:
        j_range = (lo_avail, hi_avail)
    j_lo, j_hi = int(j_range[0]), int(j_range[1])
    if j_lo > j_hi:
        raise DomainError(f"empty scale range {j_range}")
    if j_hi > hi_avail or j_lo < lo_avail:
        raise DomainError(f"scales {j_range} exceed the available octaves [{lo_avail}, {hi_avail}]")
    levels = Jr - j_lo
    _, details = wavedec(signal.values * math.sqrt(signal.dx), spec, levels)
    coeffs, positions = [], []
    for j in range(j_lo, j_hi + 1):
        m = Jr - j
        c = details[m - 1] / math.sqrt(2.0**m * signal.dx)
        k = np.arange(c.size)
        if exclude_seam:
            keep = c.size - seam_count(m, L)
            c, k = c[:keep], k[:keep]
        coeffs.append(c)
        positions.append(k)
    meta = {
        "wavelet": spec.name,
        "source": "filter_bank",
        "x0": signal.x0,
        "dx": signal.dx,
        "exclude_seam": bool(exclude_seam),
        "sample_offset": sample_offset(spec, signal.dx),
    }
    if not dyadic:
        meta["warning"] = "grid step is not a power of two; scale labels are rounded"
    return CoeffPyramid(j_lo, j_hi, coeffs, positions, meta=meta)
