"""Wavelet-side index estimators and the irregularity criterion.

The lower index is read from the decay of ``s_j = max_k |c_{j,k}|``.  The
upper index is read from the criterion

    crit(j) = max( sup_{ℓ >= j} s_ℓ , 2^{-jM} sup_{ℓ <= j} 2^{ℓM} s_ℓ ),

which borrows coefficients from neighbouring scales and is therefore immune to
vanishing scales.  Both suprema are taken over the stored scales only.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .scaling import exponent_fit, log2_data, window_slice
from .smoothness import IndexEstimate


@dataclass(frozen=True)
class CriterionTrace:
    """Per-scale pieces of the irregularity criterion.

    Attributes
    ----------
    js : ndarray of int
    tail_sup : ndarray
        ``sup_{ℓ >= j} s_ℓ`` (truncated at the finest stored scale).
    head_sup : ndarray
        ``2^{-jM} sup_{ℓ <= j} 2^{ℓM} s_ℓ``.
    value : ndarray
        Elementwise maximum of the two.
    M : int
    """

    js: np.ndarray
    tail_sup: np.ndarray
    head_sup: np.ndarray
    value: np.ndarray
    M: int

    def to_dict(self):
        return {
            "M": int(self.M),
            "js": [int(j) for j in self.js],
            "tail_sup": [float(v) for v in self.tail_sup],
            "head_sup": [float(v) for v in self.head_sup],
            "value": [float(v) for v in self.value],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            np.asarray(d["js"], dtype=int),
            np.asarray(d["tail_sup"], dtype=float),
            np.asarray(d["head_sup"], dtype=float),
            np.asarray(d["value"], dtype=float),
            int(d["M"]),
        )

    def rows(self):
        """``(j, tail_sup, head_sup, value)`` tuples, for CSV output."""
        return list(zip(self.js.tolist(), self.tail_sup.tolist(), self.head_sup.tolist(), self.value.tolist()))


def irregularity_criterion(pyramid, M: int) -> CriterionTrace:
    """Evaluate the criterion at every stored scale.

    The head supremum is accumulated as ``h_j = max(2^{-M} h_{j-1}, s_j)``,
    which equals ``2^{-jM} max_{ℓ<=j} 2^{ℓM} s_ℓ`` without forming ``2^{ℓM}``.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    s = np.asarray(pyramid.sup_per_scale, dtype=float)
    tail = np.maximum.accumulate(s[::-1])[::-1]
    head = np.empty_like(s)
    decay = 2.0 ** (-int(M))
    run = 0.0
    for i, v in enumerate(s):
        run = max(run * decay, v)
        head[i] = run
    return CriterionTrace(pyramid.js.copy(), tail, head, np.maximum(tail, head), int(M))


def default_criterion_window(pyramid, M: int):
    """Stored range minus the ``M + 2`` finest scales (truncated tail sup)."""
    hi = pyramid.j_max - (int(M) + 2)
    if hi < pyramid.j_min + 1:
        hi = pyramid.j_max
    return pyramid.j_min, hi


def _estimate(js, mags, window, kind, method, convention, M=None):
    js_w, mags_w = window_slice(js, mags, window)
    if js_w.size == 0:
        raise EstimationError(f"fit window {window} holds no stored scales")
    if not np.any(mags_w > 0):
        raise EstimationError(f"{method}: every magnitude in the window is zero")
    value, diag = exponent_fit(js_w, mags_w, kind, convention)
    with np.errstate(divide="ignore"):
        logdata = np.column_stack([js_w, np.log2(mags_w)])
    return IndexEstimate(value, method, (js_w[0], js_w[-1]), logdata, diag, order_M=M)


def lower_index_wavelet(pyramid, window=None, convention="envelope") -> IndexEstimate:
    """Lower global index from the decay of ``s_j`` (zero scales are skipped)."""
    return _estimate(pyramid.js, pyramid.sup_per_scale, window, "lower", "wavelet_lower", convention)


def upper_index_wavelet(pyramid, M: int, window=None, convention="envelope") -> IndexEstimate:
    """Upper global index from the decay of the irregularity criterion.

    The default window drops the ``M + 2`` finest stored scales, where the
    truncated tail supremum is least reliable.
    """
    trace = irregularity_criterion(pyramid, M)
    if window is None:
        window = default_criterion_window(pyramid, M)
    est = _estimate(trace.js, trace.value, window, "upper", "wavelet_upper", convention, M=int(M))
    return est


def naive_upper_slope(pyramid, window=None):
    """Upper exponent read from ``s_j`` alone, ignoring the gap-filling criterion.

    Returns
    -------
    dict
        ``value`` (max chord ``log2 s_j / (-j)`` over the nonzero scales, or
        None), ``divergent`` (True if some scale in the window vanishes, where
        the chord is ``+inf``), ``dead_scales`` and ``representative``.
    """
    js, s = window_slice(pyramid.js, pyramid.sup_per_scale, window)
    jk, y, dead = log2_data(js, s)
    ok = jk > 0
    value = float(np.max(y[ok] / -jk[ok])) if np.any(ok) else None
    return {
        "value": value,
        "divergent": bool(dead),
        "dead_scales": dead,
        "representative": not dead,
    }
