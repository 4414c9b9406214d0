"""Pure numpy versions of the compiled kernels."""

import numpy as np


def sup_abs_differences(f, coef, h_max, periodic, num_threads=1):
    """Return ``D[h-1] = max_x |sum_m coef[m] f(x + m h)|`` for ``h = 1..h_max``.

    ``num_threads`` is accepted for signature parity and ignored.
    """
    f = np.ascontiguousarray(f, dtype=np.float64)
    coef = np.asarray(coef, dtype=np.float64)
    n = f.shape[0]
    order = coef.shape[0] - 1
    pad = order * h_max
    if periodic:
        reps = pad // n + 1
        ext = np.concatenate([f] + [f] * reps)[: n + pad]
    else:
        ext = np.concatenate([f, np.full(pad, f[-1])])
    out = np.zeros(h_max)
    acc = np.empty(n)
    for h in range(1, h_max + 1):
        np.multiply(ext[:n], coef[0], out=acc)
        for m in range(1, order + 1):
            acc += coef[m] * ext[m * h : m * h + n]
        out[h - 1] = np.max(np.abs(acc))
    return out
