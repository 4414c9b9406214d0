"""Finite differences, the M-modulus of smoothness and the oracle indices.

Everything here works directly on samples: the modulus is the brute-force
maximum of ``|Δ_h^M f(x)|`` over every grid shift ``1 <= h <= r/dx`` and every
grid point ``x``.  The two oracle estimators turn a dyadic profile of the
modulus into lower and upper global Hölder indices.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .errors import DomainError, EstimationError
from .scaling import exponent_fit, window_slice

EXTENSIONS = ("periodic", "clamp")
METHODS = ("oracle_lower", "oracle_upper", "wavelet_lower", "wavelet_upper")
M_CAP = 5


@dataclass(frozen=True)
class SampledSignal:
    """Uniform samples ``values[i] = f(x0 + i dx)``.

    The array is copied and frozen so that a signal can be shared across
    threads without defensive copies.
    """

    values: np.ndarray
    x0: float = 0.0
    dx: float = 1.0
    extension: str = "periodic"

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64).ravel()
        if vals.size < 2:
            raise DomainError("a signal needs at least two samples")
        if not np.all(np.isfinite(vals)):
            raise DomainError("signal values must be finite")
        if not (np.isfinite(self.dx) and self.dx > 0):
            raise DomainError(f"dx must be positive, got {self.dx}")
        if self.extension not in EXTENSIONS:
            raise DomainError(f"extension must be one of {EXTENSIONS}, got {self.extension!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def length(self) -> float:
        """Extent ``n * dx`` of the sampled window."""
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @classmethod
    def from_function(cls, func, n, x0=0.0, length=1.0, extension="periodic"):
        """Sample ``func`` on ``n`` points of ``[x0, x0 + length)``."""
        dx = length / n
        return cls(func(x0 + dx * np.arange(n)), x0=x0, dx=dx, extension=extension)


@dataclass(frozen=True)
class ModulusProfile:
    """``omega[i] = ω^M(2^{-js[i]})`` with ``js`` increasing (radii decreasing)."""

    order_M: int
    js: np.ndarray
    omega: np.ndarray

    @property
    def radii(self) -> np.ndarray:
        return 2.0 ** (-self.js.astype(float))

    def to_dict(self):
        return {
            "order_M": int(self.order_M),
            "js": [int(j) for j in self.js],
            "omega": [float(w) for w in self.omega],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["order_M"]), np.asarray(d["js"], dtype=int), np.asarray(d["omega"], dtype=float))


@dataclass
class IndexEstimate:
    """An exponent estimate with the data it was read from.

    Attributes
    ----------
    value : float
    method : str
        One of ``oracle_lower``, ``oracle_upper``, ``wavelet_lower``,
        ``wavelet_upper``.
    fit_window : tuple of int
        Inclusive scale window ``(j_min, j_max)``.
    logdata : ndarray, shape (n, 2)
        Columns ``j`` and ``log2`` magnitude; zero magnitudes appear as ``-inf``.
    diagnostics : dict
        Fit residual and the alternative slopes, see :func:`scaling.exponent_fit`.
    """

    value: float
    method: str
    fit_window: tuple
    logdata: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    order_M: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not np.isfinite(self.value):
            raise EstimationError(f"{self.method}: non-finite estimate")
        self.fit_window = (int(self.fit_window[0]), int(self.fit_window[1]))
        self.logdata = np.asarray(self.logdata, dtype=float).reshape(-1, 2)

    def to_dict(self):
        return {
            "value": float(self.value),
            "method": self.method,
            "fit_window": list(self.fit_window),
            "logdata": [[float(j), _json_float(v)] for j, v in self.logdata],
            "diagnostics": _json_clean(self.diagnostics),
            "order_M": self.order_M,
        }

    @classmethod
    def from_dict(cls, d):
        logdata = np.array([[j, _from_json_float(v)] for j, v in d["logdata"]], dtype=float)
        return cls(
            value=float(d["value"]),
            method=d["method"],
            fit_window=tuple(d["fit_window"]),
            logdata=logdata.reshape(-1, 2),
            diagnostics=dict(d.get("diagnostics", {})),
            order_M=d.get("order_M"),
        )


def _json_float(v):
    v = float(v)
    if np.isfinite(v):
        return v
    return "-inf" if v < 0 else ("inf" if v > 0 else "nan")


def _from_json_float(v):
    return float(v)


def _json_clean(obj):
    if isinstance(obj, dict):
        return {str(k): _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _json_float(obj)
    if isinstance(obj, np.ndarray):
        return _json_clean(obj.tolist())
    return obj


def difference_weights(M):
    """Binomial weights ``(-1)^{M-m} C(M, m)`` for ``m = 0..M``."""
    if M < 1:
        raise DomainError(f"difference order must be >= 1, got {M}")
    return np.array([(-1) ** (M - m) * comb(M, m) for m in range(M + 1)], dtype=float)


def _check_steps(signal, h_steps, M):
    if h_steps < 1:
        raise DomainError(f"shift must be at least one grid step, got {h_steps}")
    if h_steps * M >= signal.n:
        raise DomainError(
            f"shift {h_steps} x order {M} reaches past the {signal.n}-sample window"
        )


def finite_difference(signal: SampledSignal, h_steps: int, M: int) -> np.ndarray:
    """``Δ_h^M f`` at every grid point, with ``h = h_steps * dx``.

    Parameters
    ----------
    signal : SampledSignal
    h_steps : int
        Shift in grid steps.
    M : int
        Difference order.

    Returns
    -------
    ndarray
        Same length as the signal.  Indices past the end wrap (periodic) or
        stick to the last sample (clamp).
    """
    weights = difference_weights(M)
    _check_steps(signal, int(h_steps), M)
    n = signal.n
    base = np.arange(n)
    out = np.zeros(n)
    for m, w in enumerate(weights):
        idx = base + m * int(h_steps)
        idx = idx % n if signal.extension == "periodic" else np.minimum(idx, n - 1)
        out += w * signal.values[idx]
    return out


def _max_steps(signal, r):
    return int(np.floor(r / signal.dx + 1e-9))


def shift_sups(signal: SampledSignal, M: int, h_max: int, backend=None) -> np.ndarray:
    """``sup_x |Δ_h^M f(x)|`` for every shift ``h = 1..h_max`` (grid steps)."""
    _check_steps(signal, h_max, M)
    return kernels.sup_abs_differences(
        signal.values, difference_weights(M), h_max,
        periodic=(signal.extension == "periodic"), backend=backend,
    )


def modulus_of_smoothness(signal: SampledSignal, r: float, M: int) -> float:
    """``ω^M(r)``: max over grid shifts ``0 < h <= r`` and all ``x`` of ``|Δ_h^M f(x)|``.

    Raises
    ------
    DomainError
        If ``r < dx`` (no admissible shift) or ``M r`` exceeds the window.
    """
    h_max = _max_steps(signal, r)
    if h_max < 1:
        raise DomainError(f"radius {r} is below the grid step {signal.dx}")
    return float(np.max(shift_sups(signal, M, h_max)))


def modulus_profile(signal: SampledSignal, M: int, j_range, backend=None) -> ModulusProfile:
    """Sample ``ω^M`` at the dyadic radii ``2^{-j}``, ``j = j_min..j_max``.

    All shifts up to the largest radius are scanned once; the profile is the
    running maximum, so monotonicity in ``r`` holds exactly.
    """
    j_min, j_max = int(j_range[0]), int(j_range[1])
    if j_min > j_max:
        raise DomainError(f"empty scale range {j_range}")
    js = np.arange(j_min, j_max + 1)
    steps = np.array([_max_steps(signal, 2.0 ** (-j)) for j in js])
    if steps[-1] < 1:
        raise DomainError(f"2^-{j_max} is below the grid step {signal.dx}")
    per_shift = shift_sups(signal, M, int(steps[0]), backend=backend)
    running = np.maximum.accumulate(per_shift)
    return ModulusProfile(int(M), js, running[steps - 1].copy())


def _oracle(profile, kind, window, convention):
    js, omega = window_slice(profile.js, profile.omega, window)
    if js.size == 0:
        raise EstimationError(f"fit window {window} holds no profile scales")
    value, diag = exponent_fit(js, omega, kind, convention)
    with np.errstate(divide="ignore"):
        logdata = np.column_stack([js, np.log2(omega)])
    return IndexEstimate(
        value, f"oracle_{kind}", (js[0], js[-1]), logdata, diag, order_M=profile.order_M
    )


def oracle_lower_index(profile: ModulusProfile, window=None, convention="envelope") -> IndexEstimate:
    """Lower global index from a modulus profile (finite-scale liminf surrogate)."""
    return _oracle(profile, "lower", window, convention)


def oracle_upper_index(profile: ModulusProfile, window=None, convention="envelope") -> IndexEstimate:
    """Upper global index from a modulus profile (finite-scale limsup surrogate)."""
    return _oracle(profile, "upper", window, convention)


def select_order(estimate, start=1, cap=M_CAP, margin=0.1):
    """Raise the difference order until the estimates sit below ``M - margin``.

    Parameters
    ----------
    estimate : callable
        ``estimate(M)`` returns an iterable of exponent values computed with
        order ``M``.
    start, cap : int
        First and largest order tried.

    Returns
    -------
    M : int
    results : object
        Whatever ``estimate`` returned for the chosen ``M``.
    saturated : bool
        True if the cap was reached with estimates still near ``M``.
    """
    M = start
    while True:
        results = estimate(M)
        values = [v for v in _values_of(results) if v is not None and np.isfinite(v)]
        if not values or max(values) < M - margin:
            return M, results, False
        if M >= cap:
            return M, results, True
        M += 1


def _values_of(results):
    if isinstance(results, dict):
        return list(results.values())
    return list(results)
