import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from uniholder import _fallback, kernels
from uniholder.smoothness import difference_weights

compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")


def brute(f, coef, h_max, periodic):
    n = f.size
    out = []
    for h in range(1, h_max + 1):
        idx = np.arange(n)[:, None] + h * np.arange(coef.size)[None, :]
        idx = idx % n if periodic else np.minimum(idx, n - 1)
        out.append(np.max(np.abs(f[idx] @ coef)))
    return np.array(out)


@pytest.mark.parametrize("periodic", [True, False])
def test_fallback_matches_brute_force(rng, periodic):
    f = rng.standard_normal(37)
    for M in (1, 2, 3):
        coef = difference_weights(M)
        np.testing.assert_allclose(_fallback.sup_abs_differences(f, coef, 9, periodic),
                                   brute(f, coef, 9, periodic), rtol=1e-13)


@compiled
@given(f=arrays(np.float64, st.integers(2, 5000), elements=st.floats(-1e6, 1e6)),
       M=st.integers(1, 5), periodic=st.booleans(), data=st.data())
def test_compiled_is_bit_identical(f, M, periodic, data):
    h_max = data.draw(st.integers(1, max(1, (f.size - 1) // M)))
    coef = difference_weights(M)
    a = kernels.sup_abs_differences(f, coef, h_max, periodic, backend="python")
    b = kernels.sup_abs_differences(f, coef, h_max, periodic, backend="cython")
    np.testing.assert_array_equal(a, b)


@compiled
def test_thread_count_does_not_change_result(rng):
    f = rng.standard_normal(4096)
    coef = difference_weights(2)
    one = kernels.sup_abs_differences(f, coef, 300, True, num_threads=1)
    many = kernels.sup_abs_differences(f, coef, 300, True, num_threads=4)
    np.testing.assert_array_equal(one, many)


def test_empty_shift_range():
    assert kernels.sup_abs_differences(np.ones(4), [-1.0, 1.0], 0).size == 0


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("HOLDER_THREADS", "3")
    assert kernels.thread_count() == 3
    monkeypatch.setenv("HOLDER_THREADS", "junk")
    assert kernels.thread_count() == 1


def test_backend_override_at_import():
    import os
    import subprocess
    import sys

    env = dict(os.environ, UNIHOLDER_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "from uniholder import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
