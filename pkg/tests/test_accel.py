from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from uptest import _accel
from uptest.linalg import haar_unitaries

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not available")


@needs_numba
@pytest.mark.parametrize("perm,d", [((0,), 3), ((1, 0), 2), ((2, 0, 1), 3), ((3, 1, 0, 2), 2)])
def test_gather_parity(perm, d):
    p = np.array(perm, dtype=np.int64)
    np.testing.assert_array_equal(_accel.permutation_gather_nb(p, d), _accel.permutation_gather_np(p, d))


@needs_numba
def test_gather_mean_parity():
    rng = np.random.default_rng(0)
    vec = rng.standard_normal(27) + 1j * rng.standard_normal(27)
    maps = np.stack([rng.permutation(27) for _ in range(6)])
    np.testing.assert_allclose(_accel.gather_mean_nb(vec, maps), _accel.gather_mean_np(vec, maps), atol=1e-14)


@needs_numba
def test_h_k_parity():
    lam = np.random.default_rng(1).dirichlet(np.ones(7))
    for k in range(6):
        assert _accel.h_k_nb(lam, k) == pytest.approx(_accel.h_k_np(lam, k), abs=1e-15)


@needs_numba
def test_twirl_parity():
    gs = np.ascontiguousarray(haar_unitaries(2, 50, 3))
    rng = np.random.default_rng(4)
    B = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    t_nb, s_nb = _accel.twirl_accumulate_nb(gs, B, 4)
    t_np, s_np = _accel.twirl_accumulate_np(gs, B, 4)
    np.testing.assert_allclose(t_nb, t_np, atol=1e-10)
    np.testing.assert_allclose(s_nb, s_np, atol=1e-9)


def test_env_flag_selects_numpy():
    env = dict(os.environ, UPTEST_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from uptest import _accel; print(_accel.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
