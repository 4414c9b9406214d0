"""Meyer wavelet: Fourier-domain definition and closed-form series coefficients.

Fourier convention ``f̂(ξ) = ∫ f(x) e^{-iξx} dx``.  The wavelet is
``ψ̂(ξ) = e^{-iξ/2} A(|ξ|)`` with the amplitude ``A`` built from the ramp
``ν(x) = x^4 (35 - 84x + 70x^2 - 20x^3)``; ``ψ`` is real and symmetric about
``t = 1/2``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import DomainError

TWO_PI_3 = 2.0 * np.pi / 3.0
FOUR_PI_3 = 4.0 * np.pi / 3.0
EIGHT_PI_3 = 8.0 * np.pi / 3.0
PHASES = ("sin", "cos")
ROUNDOFF_FLOOR = 1e-13


def meyer_nu(x):
    """Ramp ``ν``: 0 below 0, 1 above 1, ``ν(x) + ν(1 - x) = 1``."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3)


def meyer_amplitude(xi):
    """``|ψ̂(ξ)|``, supported on ``2π/3 <= |ξ| <= 8π/3``."""
    a = np.abs(np.asarray(xi, dtype=float))
    out = np.zeros_like(a)
    rise = (a >= TWO_PI_3) & (a <= FOUR_PI_3)
    fall = (a > FOUR_PI_3) & (a <= EIGHT_PI_3)
    out[rise] = np.sin(0.5 * np.pi * meyer_nu(3.0 * a[rise] / (2.0 * np.pi) - 1.0))
    out[fall] = np.cos(0.5 * np.pi * meyer_nu(3.0 * a[fall] / (4.0 * np.pi) - 1.0))
    return out


def meyer_psi_hat(xi):
    """Fourier transform ``ψ̂(ξ)`` of the Meyer wavelet (complex)."""
    xi_arr = np.asarray(xi, dtype=float)
    out = np.exp(-0.5j * xi_arr) * meyer_amplitude(xi_arr)
    return out if out.ndim else complex(out)


def partition_of_unity(xi, j_span=40):
    """``Σ_j |ψ̂(2^{-j} ξ)|^2`` over ``|j| <= j_span``; equals 1 for ``ξ != 0``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    js = np.arange(-j_span, j_span + 1)
    return np.sum(meyer_amplitude(np.ldexp(xi[:, None], -js[None, :])) ** 2, axis=1)


@lru_cache(maxsize=4)
def _gauss_nodes(n):
    x, w = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for a, b in ((TWO_PI_3, FOUR_PI_3), (FOUR_PI_3, EIGHT_PI_3)):
        nodes.append(0.5 * (b - a) * x + 0.5 * (b + a))
        weights.append(0.5 * (b - a) * w)
    xi = np.concatenate(nodes)
    return xi, np.concatenate(weights) * meyer_amplitude(xi) / np.pi


def meyer_psi(t, n_nodes=192, chunk=4096):
    """``ψ(t)`` by Fourier synthesis ``(1/π) ∫ A(ξ) cos(ξ (t - 1/2)) dξ``.

    Gauss-Legendre on each of the two smooth pieces of ``A``.
    """
    t = np.asarray(t, dtype=float)
    flat = t.ravel() - 0.5
    xi, w = _gauss_nodes(int(n_nodes))
    out = np.empty(flat.size)
    for start in range(0, flat.size, chunk):
        block = flat[start : start + chunk]
        out[start : start + chunk] = np.cos(np.outer(block, xi)) @ w
    return out.reshape(t.shape)


@lru_cache(maxsize=8)
def _rendered(resolution, half_width):
    t = 0.5 + np.arange(-half_width * 2**resolution, half_width * 2**resolution + 1) / 2.0**resolution
    psi = meyer_psi(t)
    t.setflags(write=False)
    psi.setflags(write=False)
    return t, psi


def render_meyer(resolution=10, half_width=32):
    """``ψ`` on ``1/2 + i 2^{-resolution}``, ``|t - 1/2| <= half_width``."""
    return _rendered(int(resolution), int(half_width))


@dataclass(frozen=True)
class TrigSeries:
    """Finite lacunary series ``Σ amp_i · phase_i(2^{j_i} π x)``.

    Attributes
    ----------
    freq_exps : ndarray of int
        Strictly increasing frequency exponents ``j_i``.
    amplitudes : ndarray of float
    phases : tuple of str
        ``"sin"`` or ``"cos"`` per term.
    """

    freq_exps: np.ndarray
    amplitudes: np.ndarray
    phases: tuple

    def __post_init__(self):
        j = np.asarray(self.freq_exps, dtype=np.int64).ravel()
        a = np.asarray(self.amplitudes, dtype=float).ravel()
        ph = tuple(self.phases)
        if not (j.size == a.size == len(ph)):
            raise DomainError("terms must have matching exponent, amplitude and phase")
        if np.any(np.diff(j) <= 0):
            raise DomainError("frequency exponents must be strictly increasing")
        if not np.all(np.isfinite(a)):
            raise DomainError("amplitudes must be finite")
        if any(p not in PHASES for p in ph):
            raise DomainError(f"phase must be one of {PHASES}")
        j.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "freq_exps", j)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "phases", ph)

    @classmethod
    def sines(cls, freq_exps, amplitudes):
        freq_exps = list(freq_exps)
        return cls(freq_exps, amplitudes, ("sin",) * len(freq_exps))

    def __len__(self):
        return int(self.freq_exps.size)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for j, a, ph in zip(self.freq_exps, self.amplitudes, self.phases):
            arg = np.ldexp(np.pi, int(j)) * x
            out += a * (np.sin(arg) if ph == "sin" else np.cos(arg))
        return out

    @property
    def max_frequency(self):
        """Largest frequency in cycles per unit ``x``."""
        return 0.0 if not len(self) else 2.0 ** (int(self.freq_exps[-1]) - 1)

    def to_dict(self):
        return {
            "freq_exps": [int(j) for j in self.freq_exps],
            "amplitudes": [float(a) for a in self.amplitudes],
            "phases": list(self.phases),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["freq_exps"], d["amplitudes"], tuple(d["phases"]))


def contributing_terms(series: TrigSeries, ell: int) -> np.ndarray:
    """Indices of the terms whose frequency meets the support of ``ψ̂(2^{-ℓ}·)``.

    ``2^{j-ℓ} π`` must fall in ``[2π/3, 8π/3]``, which leaves ``j - ℓ`` in
    ``{0, 1}``.
    """
    d = series.freq_exps - int(ell)
    return np.nonzero((d >= 0) & (d <= 1))[0]


def trig_series_coeffs_meyer(series: TrigSeries, ell: int, k: int) -> complex:
    """Meyer coefficient ``c_{ℓ,k} = 2^ℓ ∫ f(x) ψ(2^ℓ x - k) dx`` of a series.

    For ``sin(ωx)`` the integral is ``(e^{iθk} ψ̂(-θ) - e^{-iθk} ψ̂(θ)) / (2i)``
    with ``θ = 2^{-ℓ} ω``; for ``cos`` the same with ``/2`` and a plus sign.
    Only terms from :func:`contributing_terms` enter.  The value is real up to
    round-off; it is returned as a complex number.
    """
    total = 0.0 + 0.0j
    for i in contributing_terms(series, ell):
        theta = np.ldexp(np.pi, int(series.freq_exps[i]) - int(ell))
        plus = np.exp(1j * theta * k) * meyer_psi_hat(-theta)
        minus = np.exp(-1j * theta * k) * meyer_psi_hat(theta)
        if series.phases[i] == "sin":
            total += series.amplitudes[i] * (plus - minus) / 2j
        else:
            total += series.amplitudes[i] * (plus + minus) / 2
    return complex(total)


def meyer_series_pyramid(series: TrigSeries, j_min: int, j_max: int, positions=(0, 1)):
    """Closed-form Meyer pyramid of a series.

    Contributing phases ``2^{j-ℓ} π k`` are multiples of ``π``, so every
    coefficient is 2-periodic in ``k`` and ``k ∈ {0, 1}`` realises the sup.
    Values below ``ROUNDOFF_FLOOR`` times the total amplitude are set to 0.
    """
    from .pyramid import CoeffPyramid

    pos = np.asarray(positions, dtype=np.int64)
    # cancellations that are exact in closed form leave round-off behind
    floor = ROUNDOFF_FLOOR * float(np.sum(np.abs(series.amplitudes)))
    coeffs = []
    for ell in range(int(j_min), int(j_max) + 1):
        c = np.array([trig_series_coeffs_meyer(series, ell, int(k)).real for k in pos])
        c[np.abs(c) <= floor] = 0.0
        coeffs.append(c)
    return CoeffPyramid(int(j_min), int(j_max), coeffs, [pos] * len(coeffs), meta={"wavelet": "meyer"})
