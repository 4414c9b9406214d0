"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``UNIHOLDER_BACKEND=python`` to force the fallback.  ``HOLDER_THREADS``
caps the worker threads used by the compiled kernel.
"""

import os

import numpy as np

from . import _fallback

try:
    if os.environ.get("UNIHOLDER_BACKEND", "").lower() == "python":
        raise ImportError("fallback requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def thread_count():
    """Worker cap from ``HOLDER_THREADS`` (default 1)."""
    raw = os.environ.get("HOLDER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sup_abs_differences(f, coef, h_max, periodic=True, backend=None, num_threads=None):
    """Per-shift sup of the weighted difference ``sum_m coef[m] f(x + m h)``.

    Parameters
    ----------
    f : array_like
        Samples.
    coef : array_like
        Difference weights, ``coef[m]`` multiplies ``f(x + m h)``.
    h_max : int
        Largest shift in grid steps.
    periodic : bool
        Wrap indices if True, clamp to the last sample otherwise.
    backend : {"cython", "python"}, optional
        Override the import-time choice.

    Returns
    -------
    ndarray
        Length ``h_max``; entry ``h - 1`` is the sup for shift ``h``.
    """
    f = np.ascontiguousarray(f, dtype=np.float64)
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    h_max = int(h_max)
    if h_max < 1:
        return np.zeros(0)
    nt = thread_count() if num_threads is None else int(num_threads)
    use = backend or BACKEND
    if use == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return np.asarray(_compiled.sup_abs_differences(f, coef, h_max, bool(periodic), nt))
    return _fallback.sup_abs_differences(f, coef, h_max, bool(periodic))
