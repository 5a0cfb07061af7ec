"""Hot inner loops, compiled with numba when available.

Every kernel exists twice: a ``_nb`` version under ``@njit`` and a ``_np``
version written against plain numpy. The public names bind to one of them at
import time. Set ``UPTEST_DISABLE_NUMBA=1`` to force the numpy path (useful for
debugging and for the benchmark in ``benchmarks/``).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("UPTEST_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by UPTEST_DISABLE_NUMBA")
    import numba
    from numba import njit

    _threads = os.environ.get("UPTEST_NUM_THREADS")
    if _threads:
        numba.set_num_threads(int(_threads))
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA


# -- permutation gather indices -------------------------------------------


def permutation_gather_np(perm: np.ndarray, d: int) -> np.ndarray:
    """Flat indices ``f`` with ``(P_perm v)[x] = v[f[x]]`` on ``(C^d)^n``."""
    n = perm.shape[0]
    idx = np.indices((d,) * n).reshape(n, -1)
    # input slot j is read from output slot perm[j]
    src = idx[perm]
    return np.ravel_multi_index(tuple(src), (d,) * n).astype(np.int64)


@njit(cache=True)
def permutation_gather_nb(perm, d):
    n = perm.shape[0]
    total = d**n
    out = np.empty(total, dtype=np.int64)
    digits = np.zeros(n, dtype=np.int64)
    strides = np.empty(n, dtype=np.int64)
    s = 1
    for j in range(n - 1, -1, -1):
        strides[j] = s
        s *= d
    for x in range(total):
        rem = x
        for j in range(n - 1, -1, -1):
            digits[j] = rem % d
            rem //= d
        f = 0
        for j in range(n):
            f += digits[perm[j]] * strides[j]
        out[x] = f
    return out


# -- averaging a vector over a set of gathers ------------------------------


def gather_mean_np(vec: np.ndarray, maps: np.ndarray) -> np.ndarray:
    return vec[maps].mean(axis=0)


@njit(cache=True)
def gather_mean_nb(vec, maps):
    m, n = maps.shape
    out = np.zeros(n, dtype=vec.dtype)
    for r in range(m):
        for x in range(n):
            out[x] += vec[maps[r, x]]
    return out / m


# -- complete homogeneous symmetric polynomial -----------------------------


def h_k_np(lam: np.ndarray, k: int) -> float:
    # h[j] holds h_j of the prefix processed so far
    h = np.zeros(k + 1)
    h[0] = 1.0
    for x in lam:
        for j in range(1, k + 1):
            h[j] = h[j] + x * h[j - 1]
    return float(h[k])


@njit(cache=True)
def h_k_nb(lam, k):
    h = np.zeros(k + 1)
    h[0] = 1.0
    for i in range(lam.shape[0]):
        x = lam[i]
        for j in range(1, k + 1):
            h[j] = h[j] + x * h[j - 1]
    return h[k]


# -- Haar twirl accumulation -----------------------------------------------


def twirl_accumulate_np(gs: np.ndarray, B: np.ndarray, n: int):
    """Sum and entrywise squared-modulus sum of ``(g^dag)^{(x)n} B g^{(x)n}``."""
    m, d, _ = gs.shape
    G = gs
    for _ in range(n - 1):
        G = np.einsum("sij,skl->sikjl", G, gs).reshape(m, G.shape[1] * d, G.shape[2] * d)
    X = np.conj(np.swapaxes(G, 1, 2)) @ B @ G
    return X.sum(axis=0), (np.abs(X) ** 2).sum(axis=0)


@njit(cache=True)
def _kron_power(g, n):
    G = g.copy()
    for _ in range(n - 1):
        a, b = G.shape
        d = g.shape[0]
        K = np.empty((a * d, b * d), dtype=g.dtype)
        for i in range(a):
            for j in range(b):
                gij = G[i, j]
                for k in range(d):
                    for l in range(d):
                        K[i * d + k, j * d + l] = gij * g[k, l]
        G = K
    return G


@njit(cache=True)
def twirl_accumulate_nb(gs, B, n):
    m = gs.shape[0]
    D = B.shape[0]
    total = np.zeros((D, D), dtype=np.complex128)
    sq = np.zeros((D, D), dtype=np.float64)
    for s in range(m):
        G = _kron_power(gs[s], n)
        X = np.conj(G.T) @ B @ G
        for i in range(D):
            for j in range(D):
                total[i, j] += X[i, j]
                sq[i, j] += X[i, j].real ** 2 + X[i, j].imag ** 2
    return total, sq


if USE_NUMBA:
    permutation_gather = permutation_gather_nb
    gather_mean = gather_mean_nb
    _h_k = h_k_nb
    twirl_accumulate = twirl_accumulate_nb
else:
    permutation_gather = permutation_gather_np
    gather_mean = gather_mean_np
    _h_k = h_k_np
    twirl_accumulate = twirl_accumulate_np


def h_k_kernel(lam, k: int) -> float:
    return float(_h_k(np.ascontiguousarray(lam, dtype=np.float64), int(k)))


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
