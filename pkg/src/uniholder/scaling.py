"""Finite-scale surrogates for liminf/limsup of log-log quotients.

Every routine here takes scale indices ``j`` and magnitudes ``v_j`` that are
meant to behave like ``2^{-j H}`` and returns an exponent ``H``.  Three
conventions are offered:

``"envelope"`` (default)
    Slope of the supporting line of the upper (lower index) or lower (upper
    index) concave/convex hull of ``(j, log2 v_j)`` at the window's mean scale,
    combined with the least-squares slope so that the lower value never
    exceeds the upper one.  Multiplicative constants in front of the power law
    do not bias it.
``"chord"``
    Extremes of the per-scale ratios ``log2 v_j / (-j)``.  Exact for pure
    power laws ``v_j = 2^{-jH}``, biased by ``log2(C)/j`` otherwise.
``"regression"``
    Ordinary least-squares slope, used for both indices.
"""

import numpy as np

from .errors import EstimationError

CONVENTIONS = ("envelope", "chord", "regression")


def log2_data(js, values):
    """Drop zero or non-finite magnitudes and take ``log2`` of the rest.

    Returns
    -------
    js_kept : ndarray of int
    y : ndarray of float
    skipped : list of int
        Scales whose magnitude was zero.
    """
    js = np.asarray(js, dtype=int)
    values = np.asarray(values, dtype=float)
    keep = np.isfinite(values) & (values > 0)
    skipped = [int(j) for j in js[~keep]]
    return js[keep], np.log2(values[keep]), skipped


def regression_exponent(js, y):
    """Negated least-squares slope of ``y`` against ``j`` and its RMS residual."""
    js = np.asarray(js, dtype=float)
    y = np.asarray(y, dtype=float)
    if js.size < 2:
        raise EstimationError("regression needs at least two nonzero scales")
    slope, intercept = np.polyfit(js, y, 1)
    resid = y - (slope * js + intercept)
    return float(-slope), float(np.sqrt(np.mean(resid**2)))


def _hull(js, y, upper):
    """Monotone-chain hull of points sorted by ``j``; upper or lower chain."""
    sign = 1.0 if upper else -1.0
    chain = []
    for p in zip(js.astype(float), sign * y):
        while len(chain) >= 2:
            (x1, y1), (x2, y2) = chain[-2], chain[-1]
            # drop the middle point if it lies on or below the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                chain.pop()
            else:
                break
        chain.append(p)
    return [(x, sign * v) for x, v in chain]


def envelope_exponent(js, y, upper):
    """Exponent read off the hull of ``(j, y)`` at the mean scale.

    Parameters
    ----------
    js, y : array_like
        Scales (strictly increasing) and ``log2`` magnitudes.
    upper : bool
        Upper hull (slowest decay, lower index) if True, lower hull otherwise.
    """
    js = np.asarray(js, dtype=float)
    y = np.asarray(y, dtype=float)
    if js.size < 2:
        raise EstimationError("envelope needs at least two nonzero scales")
    chain = _hull(js, y, upper)
    xs = np.array([p[0] for p in chain])
    ys = np.array([p[1] for p in chain])
    slopes = np.diff(ys) / np.diff(xs)
    centre = js.mean()
    hit = np.nonzero(np.isclose(xs, centre))[0]
    if hit.size and 0 < hit[0] < xs.size - 1:
        slope = 0.5 * (slopes[hit[0] - 1] + slopes[hit[0]])
    else:
        edge = int(np.clip(np.searchsorted(xs, centre) - 1, 0, slopes.size - 1))
        slope = slopes[edge]
    return float(-slope)


def chord_exponents(js, y):
    """Per-scale ratios ``y / (-j)``; scales ``j <= 0`` are not usable."""
    js = np.asarray(js, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = js > 0
    return js[ok].astype(int), y[ok] / -js[ok]


def window_slice(js, values, window):
    """Restrict ``(js, values)`` to the inclusive window ``(j_min, j_max)``."""
    js = np.asarray(js, dtype=int)
    values = np.asarray(values, dtype=float)
    if window is None:
        return js, values
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise EstimationError(f"empty fit window {window}")
    sel = (js >= lo) & (js <= hi)
    return js[sel], values[sel]


def exponent_fit(js, values, kind, convention="envelope"):
    """Lower or upper exponent of ``values ~ 2^{-jH}`` on the given scales.

    Parameters
    ----------
    js, values : array_like
        Scales and magnitudes, already restricted to the fit window.
    kind : {"lower", "upper"}
    convention : {"envelope", "chord", "regression"}

    Returns
    -------
    value : float
    diagnostics : dict
        Always carries the regression slope and residual, both chord extremes
        (when defined), the envelope value (when defined), the skipped zero
        scales, and the convention used.

    Raises
    ------
    EstimationError
        If fewer than the points the convention needs survive zero-skipping.
    """
    if kind not in ("lower", "upper"):
        raise ValueError(f"kind must be 'lower' or 'upper', got {kind!r}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    jk, y, skipped = log2_data(js, values)
    if jk.size == 0:
        raise EstimationError("no nonzero magnitudes in the fit window")
    diag = {"convention": convention, "skipped": skipped, "n_points": int(jk.size)}
    cj, chords = chord_exponents(jk, y)
    if chords.size:
        diag["chord_min"] = float(chords.min())
        diag["chord_max"] = float(chords.max())
    if jk.size >= 2:
        reg, resid = regression_exponent(jk, y)
        diag["regression"] = reg
        diag["residual"] = resid
        diag["envelope"] = envelope_exponent(jk, y, upper=(kind == "lower"))
    else:
        diag["residual"] = 0.0

    if convention == "chord":
        if not chords.size:
            raise EstimationError("chord convention needs scales j > 0")
        value = diag["chord_min"] if kind == "lower" else diag["chord_max"]
    elif jk.size < 2:
        raise EstimationError(f"{convention} convention needs two nonzero scales")
    elif convention == "regression":
        value = diag["regression"]
    elif kind == "lower":
        value = min(diag["envelope"], diag["regression"])
    else:
        value = max(diag["envelope"], diag["regression"])
    return float(value), diag
