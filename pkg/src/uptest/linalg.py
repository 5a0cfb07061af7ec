"""Dense state vectors, registers, permutations and Haar sampling."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _accel

ATOL = 1e-10
SPECTRUM_FLOOR = -1e-12


# -- random numbers ---------------------------------------------------------


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def split_seeds(seed: int | None, n: int) -> list[np.random.SeedSequence]:
    """Deterministic child seeds; trial ``i`` always gets child ``i``."""
    return np.random.SeedSequence(seed).spawn(n)


def split_rngs(seed: int | None, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in split_seeds(seed, n)]


# -- states -----------------------------------------------------------------


@dataclass(frozen=True)
class StateVector:
    """Unit vector over an explicit tuple of register dimensions."""

    amplitudes: np.ndarray
    shape: tuple[int, ...]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        shape = tuple(int(s) for s in self.shape)
        if any(s < 1 for s in shape):
            raise ValueError(f"register dimensions must be positive, got {shape}")
        if math.prod(shape) != amps.size:
            raise ValueError(f"shape {shape} does not match {amps.size} amplitudes")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "shape", shape)

    @classmethod
    def normalized(cls, amplitudes, shape: Sequence[int] | None = None) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm, tuple(shape) if shape is not None else (amps.size,))

    @classmethod
    def basis(cls, index: int | Sequence[int], shape: Sequence[int]) -> "StateVector":
        shape = tuple(shape)
        flat = index if isinstance(index, (int, np.integer)) else np.ravel_multi_index(tuple(index), shape)
        amps = np.zeros(math.prod(shape), dtype=np.complex128)
        amps[int(flat)] = 1.0
        return cls(amps, shape)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_registers(self) -> int:
        return len(self.shape)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape)

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def reshaped(self, shape: Sequence[int]) -> "StateVector":
        return StateVector(self.amplitudes, tuple(shape))

    def power(self, k: int) -> "StateVector":
        """``|psi>^{(x)k}`` with the register lists concatenated."""
        out = self
        for _ in range(k - 1):
            out = tensor_product(out, self)
        return out


def bell_state(d: int = 2) -> StateVector:
    return max_entangled(d)


def max_entangled(d: int, rank: int | None = None) -> StateVector:
    """``sum_{i<rank} |ii> / sqrt(rank)`` in ``C^d (x) C^d``."""
    r = d if rank is None else rank
    if not 1 <= r <= d:
        raise ValueError(f"rank must be in [1, {d}]")
    amps = np.zeros((d, d), dtype=np.complex128)
    amps[np.arange(r), np.arange(r)] = 1 / math.sqrt(r)
    return StateVector(amps, (d, d))


def schmidt_state(coeffs: Sequence[float], d1: int, d2: int, left=None, right=None) -> StateVector:
    """``sum_i sqrt(coeffs_i) |a_i>|b_i>`` with optional bases as matrix columns."""
    lam = np.asarray(coeffs, dtype=float)
    r = lam.size
    A = np.eye(d1, dtype=np.complex128)[:, :r] if left is None else np.asarray(left)[:, :r]
    Bm = np.eye(d2, dtype=np.complex128)[:, :r] if right is None else np.asarray(right)[:, :r]
    psi = (A * np.sqrt(lam)) @ Bm.T
    return StateVector.normalized(psi, (d1, d2))


def tensor_product(a, b):
    """Kronecker product of two states (shapes concatenate) or two matrices."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes), a.shape + b.shape)
    if isinstance(a, StateVector) or isinstance(b, StateVector):
        raise TypeError("tensor_product needs two states or two matrices")
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, m)
    return out


def _check_registers(state: StateVector, regs: Iterable[int]) -> list[int]:
    regs = [int(r) for r in regs]
    if not regs:
        raise ValueError("register set must be nonempty")
    for r in regs:
        if not 0 <= r < state.n_registers:
            raise ValueError(f"register index {r} out of range for shape {state.shape}")
    if len(set(regs)) != len(regs):
        raise ValueError(f"repeated register index in {regs}")
    return regs


def reduced_density(state: StateVector, keep: Iterable[int]) -> np.ndarray:
    """Partial trace over every register not in ``keep`` (kept in given order)."""
    keep = _check_registers(state, keep)
    rest = [r for r in range(state.n_registers) if r not in keep]
    t = np.transpose(state.tensor(), keep + rest)
    dk = math.prod(state.shape[r] for r in keep)
    M = t.reshape(dk, -1)
    rho = M @ M.conj().T
    return (rho + rho.conj().T) / 2


def clamp_spectrum(ev: np.ndarray) -> np.ndarray:
    ev = np.where(ev < SPECTRUM_FLOOR, ev, np.maximum(ev, 0.0))
    if np.any(ev < 0):
        raise ValueError(f"spectrum has entries below {SPECTRUM_FLOOR}: {ev.min()!r}")
    return ev / ev.sum()


def schmidt_spectrum(state: StateVector, d1: int, d2: int) -> np.ndarray:
    if state.dim != d1 * d2:
        raise ValueError(f"state of length {state.dim} is not {d1}x{d2}")
    M = state.amplitudes.reshape(d1, d2)
    sv = np.linalg.svd(M, compute_uv=False)
    lam = np.zeros(d1)
    lam[: sv.size] = sv**2
    return np.sort(clamp_spectrum(lam))[::-1]


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma))
    return 0.5 * float(np.abs(ev).sum())


def pure_trace_distance(fidelity: float) -> float:
    """Trace distance of two pure states with squared overlap ``fidelity``."""
    return math.sqrt(max(0.0, 1.0 - fidelity))


# -- Haar sampling ----------------------------------------------------------


def haar_unitary(d: int, seed=None) -> np.ndarray:
    """QR of a complex Ginibre matrix with the R-diagonal phases divided out."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = make_rng(seed)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * ph


def haar_unitaries(d: int, count: int, seed=None) -> np.ndarray:
    """A stack of ``count`` independent Haar unitaries, shape ``(count, d, d)``."""
    rng = make_rng(seed)
    Z = (rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R, axis1=1, axis2=2)
    return Q * (diag / np.abs(diag))[:, None, :]


def haar_state(d: int, seed=None, shape: Sequence[int] | None = None) -> StateVector:
    rng = make_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector.normalized(v, shape if shape is not None else (d,))


# -- subspaces --------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """Column-orthonormal basis of a subspace of ``C^ambient_dim``."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        B = np.array(self.basis, dtype=np.complex128)
        if B.ndim == 1:
            B = B.reshape(-1, 1)
        if B.size == 0:
            B = np.zeros((self.ambient_dim, 0), dtype=np.complex128)
        if B.shape[0] != self.ambient_dim:
            raise ValueError(f"basis rows {B.shape[0]} != ambient dim {self.ambient_dim}")
        gram = B.conj().T @ B
        err = np.abs(gram - np.eye(B.shape[1])).max() if B.shape[1] else 0.0
        if err > ATOL:
            raise ValueError(f"basis is not orthonormal (max Gram error {err:.2e})")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: float = 1e-10) -> "Subspace":
        """Orthonormalize arbitrary spanning vectors (columns or a list)."""
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            V = vectors.astype(np.complex128)
        else:
            cols = [v.amplitudes if isinstance(v, StateVector) else np.asarray(v).reshape(-1) for v in vectors]
            if not cols:
                return cls(int(ambient_dim), np.zeros((int(ambient_dim), 0)))
            V = np.stack(cols, axis=1).astype(np.complex128)
        U, s, _ = np.linalg.svd(V, full_matrices=False)
        rank = int(np.sum(s > tol * max(1.0, s.max(initial=0.0))))
        return cls(V.shape[0], U[:, :rank])

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def project(self, v: np.ndarray) -> np.ndarray:
        """Matrix-free projection of the leading axis of ``v``."""
        v = np.asarray(v)
        flat = v.reshape(self.ambient_dim, -1)
        out = self.basis @ (self.basis.conj().T @ flat)
        return out.reshape(v.shape)

    def transform(self, V: np.ndarray) -> "Subspace":
        """Image under a unitary ``V``."""
        return Subspace(self.ambient_dim, np.asarray(V) @ self.basis)

    def contains(self, v, atol: float = 1e-10) -> bool:
        v = v.amplitudes if isinstance(v, StateVector) else np.asarray(v)
        return bool(np.linalg.norm(v - self.project(v)) <= atol * max(1.0, np.linalg.norm(v)))


def haar_subspace(d: int, s: int, seed=None) -> Subspace:
    if not 1 <= s <= d:
        raise ValueError(f"subspace dimension {s} out of range [1, {d}]")
    return Subspace(d, haar_unitary(d, seed)[:, :s])


def coordinate_subspace(d: int, k: int) -> Subspace:
    """Span of the first ``k`` standard basis vectors."""
    return Subspace(d, np.eye(d, dtype=np.complex128)[:, :k])


# -- symmetric group --------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Element of S_n stored 0-based: ``images[j]`` is the image of ``j``.

    Composition follows functions: ``(s * t)(j) = s(t(j))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"{imgs} is not a permutation of 0..{len(imgs) - 1}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 1-based cycle notation, e.g. ``from_cycles(3, [(1, 2)])``."""
        imgs = list(range(n))
        for cyc in cycles:
            cyc = [c - 1 for c in cyc]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                imgs[a] = b
        return cls(tuple(imgs))

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        return cls(tuple(i - 1 for i in images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise ValueError("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, i in enumerate(self.images):
            inv[i] = j
        return Permutation(tuple(inv))

    def __call__(self, j: int) -> int:
        return self.images[j]

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (0-based), each starting at its smallest element."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    @property
    def n_cycles(self) -> int:
        return len(self.cycles())

    @property
    def sign(self) -> int:
        return -1 if (self.n - self.n_cycles) % 2 else 1

    def is_identity(self) -> bool:
        return all(i == j for j, i in enumerate(self.images))


SymmetricGroupElement = Permutation


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(n))]


@lru_cache(maxsize=256)
def _gather(images: tuple[int, ...], d: int) -> np.ndarray:
    out = _accel.permutation_gather(np.asarray(images, dtype=np.int64), int(d))
    out.setflags(write=False)
    return out


def permutation_gather(sigma: Permutation, d: int) -> np.ndarray:
    """Flat index map ``f`` with ``(P_sigma v)[x] = v[f[x]]``."""
    return _gather(sigma.images, d)


def permutation_operator(sigma: Permutation, d: int) -> np.ndarray:
    """``P_sigma |i_1..i_n> = |i_{sigma^-1(1)} .. i_{sigma^-1(n)}>`` as a dense matrix."""
    f = permutation_gather(sigma, d)
    D = f.size
    P = np.zeros((D, D), dtype=np.complex128)
    P[np.arange(D), f] = 1.0
    return P


def apply_permutation(tensor: np.ndarray, sigma: Permutation, axes: Sequence[int] | None = None) -> np.ndarray:
    """Apply ``P_sigma`` to the listed tensor axes (all axes by default).

    The content of the ``j``-th listed axis moves to the slot ``sigma(j)``.
    """
    t = np.asarray(tensor)
    axes = list(range(t.ndim)) if axes is None else list(axes)
    if len(axes) != sigma.n:
        raise ValueError(f"permutation of degree {sigma.n} on {len(axes)} axes")
    order = list(range(t.ndim))
    inv = sigma.inverse().images
    for slot, ax in enumerate(axes):
        order[ax] = axes[inv[slot]]
    return np.transpose(t, order)


@lru_cache(maxsize=64)
def _symmetric_maps(d: int, k: int) -> np.ndarray:
    return np.stack([permutation_gather(p, d) for p in all_permutations(k)])


def symmetric_projector(d: int, k: int) -> np.ndarray:
    """Projector onto Sym^k(C^d): the average of all ``P_sigma`` over S_k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    maps = _symmetric_maps(d, k)
    D = d**k
    P = np.zeros((D, D), dtype=np.complex128)
    rows = np.broadcast_to(np.arange(D), maps.shape)
    np.add.at(P, (rows.ravel(), maps.ravel()), 1.0)
    return P / maps.shape[0]


def symmetrize(tensor: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply the symmetric-subspace projector over the listed axes of ``tensor``."""
    t = np.asarray(tensor, dtype=np.complex128)
    axes = list(axes)
    k = len(axes)
    if k <= 1:
        return t.copy()
    dims = {t.shape[a] for a in axes}
    if len(dims) != 1:
        raise ValueError("symmetrized registers must share a dimension")
    d = dims.pop()
    rest = [a for a in range(t.ndim) if a not in axes]
    moved = np.transpose(t, axes + rest)
    flat = np.ascontiguousarray(moved.reshape(d**k, -1))
    maps = _symmetric_maps(d, k)
    if flat.shape[1] == 1:
        out = _accel.gather_mean(flat[:, 0], maps)[:, None]
    else:
        out = flat[maps].mean(axis=0)
    out = out.reshape(moved.shape)
    back = np.argsort(axes + rest)
    return np.transpose(out, back)


def fix_shape(state: StateVector | np.ndarray, shape: Sequence[int]) -> StateVector:
    if isinstance(state, StateVector):
        if state.shape != tuple(shape):
            if state.dim != math.prod(shape):
                raise ValueError(f"state shape {state.shape} incompatible with {tuple(shape)}")
            return state.reshaped(shape)
        return state
    return StateVector(np.asarray(state), tuple(shape))
