"""Entanglement functionals of bipartite pure states and subspaces."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .linalg import (
    StateVector,
    Subspace,
    haar_state,
    haar_subspace,
    haar_unitary,
    make_rng,
    schmidt_spectrum,
    split_rngs,
    split_seeds,
)


@dataclass(frozen=True)
class EntanglementProfile:
    spectrum: np.ndarray
    renyi2: float
    omega: float
    purity: float

    @classmethod
    def of(cls, state: StateVector, d1: int, d2: int) -> "EntanglementProfile":
        lam = schmidt_spectrum(state, d1, d2)
        purity = float(np.sum(lam**2))
        return cls(lam, -math.log2(purity), float(lam[0]), purity)

    def check(self, atol: float = 1e-10) -> bool:
        return self.omega**2 <= self.purity + atol and self.purity <= self.omega + atol


def renyi2_entropy(state: StateVector, d1: int, d2: int) -> float:
    """Base-2 Renyi-2 entropy ``-log2 Tr(rho_A^2)``."""
    lam = schmidt_spectrum(state, d1, d2)
    return max(0.0, -math.log2(float(np.sum(lam**2))))


def closest_product_overlap(state: StateVector, d1: int, d2: int) -> float:
    """Largest squared overlap with a product state, i.e. the top Schmidt coefficient."""
    return float(schmidt_spectrum(state, d1, d2)[0])


def h_k(spectrum, k: int) -> float:
    """Complete homogeneous symmetric polynomial of degree ``k``."""
    lam = np.asarray(spectrum, dtype=float).reshape(-1)
    if np.any(lam < 0):
        raise ValueError("spectrum entries must be nonnegative")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _accel.h_k_kernel(lam, k)


def h_k_bruteforce(spectrum, k: int) -> float:
    """Sum over all multisets of size ``k``; exponential, for testing only."""
    lam = list(spectrum)
    total = 0.0
    for combo in itertools.combinations_with_replacement(range(len(lam)), k):
        total += math.prod(lam[i] for i in combo)
    return total


# -- subspace overlap heuristic --------------------------------------------


@dataclass
class OverlapResult:
    value: float
    phi: np.ndarray
    xi: np.ndarray
    theta: np.ndarray
    history: list[float]


def _haar_vec(d: int, rng) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _alternate(B: np.ndarray, d1: int, d2: int, phi, xi, iters: int, tol: float):
    val = 0.0
    for _ in range(iters):
        c = B.conj().T @ np.kron(phi, xi)
        nrm = np.linalg.norm(c)
        if nrm < 1e-15:
            break
        theta = B @ (c / nrm)
        U, s, Vh = np.linalg.svd(theta.reshape(d1, d2))
        phi, xi = U[:, 0], Vh[0]
        # |<theta|phi xi>|^2 for the updated pair equals s[0]^2
        new = float(s[0] ** 2)
        if new - val < tol:
            val = max(val, new)
            break
        val = new
    c = B.conj().T @ np.kron(phi, xi)
    return float(np.vdot(c, c).real), phi, xi


def subspace_max_product_overlap(s: Subspace, d1: int, d2: int | None = None, restarts: int = 20, iters: int = 200, seed=None, tol: float = 1e-13) -> OverlapResult:
    """Lower bound on ``max |<theta|phi xi>|^2`` over unit ``theta`` in ``s``.

    Each restart starts from a Haar product state and alternates between the
    best in-subspace state and the best product state for it. The returned
    value is attained by the certificate ``(theta, phi, xi)``.
    """
    d2 = d1 if d2 is None else d2
    if s.ambient_dim != d1 * d2:
        raise ValueError(f"subspace ambient dim {s.ambient_dim} != {d1}*{d2}")
    best = OverlapResult(0.0, None, None, None, [])
    if s.dim == 0:
        return best
    B = s.basis
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(2**63))
    for rng in split_rngs(seed, restarts):
        val, phi, xi = _alternate(B, d1, d2, _haar_vec(d1, rng), _haar_vec(d2, rng), iters, tol)
        if best.phi is None or val > best.value:
            c = B.conj().T @ np.kron(phi, xi)
            best = OverlapResult(val, phi, xi, B @ (c / np.linalg.norm(c)), best.history)
        best.history.append(best.value)
    return best


# -- samplers ----------------------------------------------------------------


def planted_subspace(d: int, s: int, seed=None) -> tuple[Subspace, np.ndarray]:
    """Haar subspace of ``C^d (x) C^d`` with a Haar product state planted in it."""
    rng = make_rng(seed)
    prod = np.kron(_haar_vec(d, rng), _haar_vec(d, rng))
    rest = haar_subspace(d * d, s, rng).basis
    # replace one direction with the product vector, then re-orthonormalize
    M = np.column_stack([prod, rest[:, : s - 1]])
    Q, _ = np.linalg.qr(M)
    Q[:, 0] = prod
    return Subspace(d * d, Q), prod


def restricted_subspace(d: int, s: int, seed=None) -> Subspace:
    return haar_subspace(d * d, s, seed)


def haar_concentration_trend(d: int = 8, dims=(32, 16, 8, 4, 2), subspaces: int = 200, restarts: int = 3, seed=None) -> dict:
    """Mean over Haar subspaces of the best found in-subspace purity, per dimension.

    The in-subspace state is the alternating-overlap certificate, so the value
    is the purity of a near-least-entangled state of each subspace. Reports a
    trend only; no asymptotic constant is asserted.
    """
    stats = {}
    for s, sub_seed in zip(dims, split_seeds(seed, len(dims))):
        vals = []
        for child in sub_seed.spawn(subspaces):
            rng = np.random.default_rng(child)
            S = haar_subspace(d * d, s, rng)
            res = subspace_max_product_overlap(S, d, d, restarts=restarts, iters=100, seed=int(rng.integers(2**63)))
            lam = np.linalg.svd(res.theta.reshape(d, d), compute_uv=False) ** 2
            vals.append(float(np.sum(lam**2)))
        stats[int(s)] = {"mean": float(np.mean(vals)), "stderr": float(np.std(vals, ddof=1) / math.sqrt(len(vals)))}
    means = [stats[int(s)]["mean"] for s in dims]
    return {
        "dims": [int(s) for s in dims],
        "stats": stats,
        "means": means,
        # dims run from large to small, so the purity should fall along the list
        "monotone": bool(all(b <= a + 1e-12 for a, b in zip(means, means[1:]))),
    }


def random_bipartite_states(d1: int, d2: int, count: int, seed=None) -> list[StateVector]:
    return [haar_state(d1 * d2, rng, (d1, d2)) for rng in split_rngs(seed, count)]


def local_rotation(state: StateVector, d1: int, d2: int, seed=None) -> StateVector:
    rng = make_rng(seed)
    g, h = haar_unitary(d1, rng), haar_unitary(d2, rng)
    return StateVector(np.kron(g, h) @ state.amplitudes, state.shape)
