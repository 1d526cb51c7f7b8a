import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicechroma import kernels
from slicechroma._accel import ENV_FLAG, NUMBA_IMPORTABLE

needs_numba = pytest.mark.skipif(not NUMBA_IMPORTABLE, reason="numba not installed")


@needs_numba
@given(st.integers(0, 10_000), st.integers(0, 60), st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_pairs_parity(seed, m, d):
    pts = np.random.default_rng(seed).uniform(-1.5, 1.5, (m, d))
    a = kernels.pairs_in_shell_numpy(pts, 0.8, 1.2)
    b = kernels.pairs_in_shell_numba(pts, 0.8, 1.2)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    brute = [(i, j) for i in range(m) for j in range(i + 1, m) if 0.8 <= np.sum((pts[i] - pts[j]) ** 2) <= 1.2]
    assert list(zip(a[0].tolist(), a[1].tolist())) == brute


@needs_numba
def test_max_distance_parity():
    pts = np.random.default_rng(3).standard_normal((700, 3))
    assert kernels.max_pairwise_distance_numba(pts) == pytest.approx(kernels.max_pairwise_distance_numpy(pts), abs=1e-12)


@needs_numba
def test_isbell_parity():
    rng = np.random.default_rng(5)
    x, y = rng.uniform(-30, 30, (2, 50_000))
    assert np.array_equal(kernels.isbell_colors_numpy(x, y, 0.45), kernels.isbell_colors_numba(x, y, 0.45))


def test_env_flag_selects_numpy():
    code = "from slicechroma._accel import backend_name; print(backend_name())"
    env = dict(os.environ, **{ENV_FLAG: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
