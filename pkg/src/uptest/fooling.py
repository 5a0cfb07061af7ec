"""Young symmetrizers on four tensor factors and swap-fixed witness states.

Witness states are built as exact integer vectors and normalized once at the
end, so invariance under register swaps holds exactly rather than to a
tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .invariants import Partition
from .linalg import Permutation, StateVector, Subspace, permutation_operator, symmetrize

N_FACTORS = 4
# registers 1<->3 and 2<->4, 0-based
SWAP_13 = Permutation.from_cycles(4, [(1, 3)])
SWAP_24 = Permutation.from_cycles(4, [(2, 4)])


@dataclass(frozen=True)
class YoungTableau:
    """Filled Young diagram; ``rows[i][j]`` is the entry in row ``i``, column ``j``."""

    rows: tuple[tuple[int, ...], ...]
    standard: bool = True

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        Partition(tuple(len(r) for r in rows))  # shape must be a partition
        for r in rows:
            ok = all(a < b for a, b in zip(r, r[1:])) if self.standard else all(a <= b for a, b in zip(r, r[1:]))
            if not ok:
                raise ValueError(f"row {r} violates the tableau ordering")
        for col in self.columns():
            if not all(a < b for a, b in zip(col, col[1:])):
                raise ValueError(f"column {col} is not strictly increasing")
        if self.standard and sorted(x for r in rows for x in r) != list(range(1, self.n + 1)):
            raise ValueError("standard tableau entries must be 1..n exactly once")

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        width = len(self.rows[0]) if self.rows else 0
        return [tuple(r[j] for r in self.rows if len(r) > j) for j in range(width)]

    def row_group(self) -> list[Permutation]:
        return _block_group(self.rows, self.n)

    def column_group(self) -> list[Permutation]:
        return _block_group(self.columns(), self.n)


def _block_group(blocks, n: int) -> list[Permutation]:
    """All permutations of ``1..n`` preserving each block (entries are 1-based)."""
    per_block = [[dict(zip(b, p)) for p in itertools.permutations(b)] for b in blocks]
    out = []
    for combo in itertools.product(*per_block):
        imgs = list(range(n))
        for m in combo:
            for src, dst in m.items():
                imgs[src - 1] = dst - 1
        out.append(Permutation(tuple(imgs)))
    return out


def young_symmetrizer(t: YoungTableau, d: int) -> np.ndarray:
    """``c_T = b_T a_T`` on ``(C^d)^{(x)n}``: row symmetrizer first, then signed columns."""
    if not t.standard:
        raise ValueError("young_symmetrizer needs a standard tableau")
    if t.n > N_FACTORS or d < 2:
        raise ValueError(f"need n <= {N_FACTORS} and d >= 2")
    a = sum(permutation_operator(p, d) for p in t.row_group())
    b = sum(q.sign * permutation_operator(q, d) for q in t.column_group())
    return b @ a


# -- exact integer states ---------------------------------------------------


def _ket(word: Sequence[int], d: int) -> np.ndarray:
    v = np.zeros(d ** len(word), dtype=np.int64)
    v[np.ravel_multi_index(tuple(word), (d,) * len(word))] = 1
    return v


def permute_int(v: np.ndarray, sigma: Permutation, d: int) -> np.ndarray:
    """``P_sigma v`` on an integer vector, without leaving integer arithmetic."""
    t = v.reshape((d,) * sigma.n)
    return np.transpose(t, np.argsort(sigma.images)).reshape(-1)


def symmetrizer_int(t: YoungTableau, v: np.ndarray, d: int) -> np.ndarray:
    av = sum(permute_int(v, p, d) for p in t.row_group())
    return sum(q.sign * permute_int(av, q, d) for q in t.column_group())


def _fill(t: YoungTableau, values: Sequence[int]) -> tuple[int, ...]:
    """Place ``values`` (read row by row) at the tensor positions listed by ``t``."""
    word = [0] * t.n
    it = iter(values)
    for r in t.rows:
        for pos in r:
            word[pos - 1] = next(it)
    return tuple(word)


SYT_31 = (YoungTableau(((1, 2, 3), (4,))), YoungTableau(((1, 2, 4), (3,))), YoungTableau(((1, 3, 4), (2,))))
SYT_22 = (YoungTableau(((1, 2), (3, 4))), YoungTableau(((1, 3), (2, 4))))


def specht_vectors(shape: str, indices: Sequence[int], d: int) -> list[np.ndarray]:
    """``c_P |filling>`` for each standard tableau ``P`` of shape (3,1) or (2,2)."""
    tabs = {"31": SYT_31, "22": SYT_22}[shape]
    return [symmetrizer_int(t, _ket(_fill(t, indices), d), d) for t in tabs]


def _check_indices(indices: Sequence[int], dim: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in indices)
    if len(idx) != 4:
        raise ValueError("need exactly four indices")
    if len(set(idx)) != 4:
        raise ValueError(f"indices must be distinct, got {idx}")
    if any(not 0 <= i < dim for i in idx):
        raise ValueError(f"indices must lie in [0, {dim})")
    return idx


def g_invariant_integer_vector(kind: str, indices: Sequence[int], dim: int) -> np.ndarray:
    """Unnormalized integer amplitudes of the requested swap-fixed family."""
    idx = _check_indices(indices, dim)
    if kind == "sym4":
        return sum(_ket(w, dim) for w in itertools.permutations(idx))
    if kind == "shape31":
        v1, v2, v3 = specht_vectors("31", idx, dim)
        return v1 - v2 + v3
    if kind in ("shape22", "shape22prime"):
        v1, v2 = specht_vectors("22", idx, dim)
        psi22 = v1 - 2 * v2
        if kind == "shape22":
            return psi22
        three = g_invariant_integer_vector("sym4", idx, dim) + 2 * psi22
        if np.any(three % 3):
            raise ArithmeticError("combination is not integral")
        return three // 3
    raise ValueError(f"unknown kind {kind!r}")


def g_invariant_basis_state(kind: str, indices: Sequence[int], dim: int) -> StateVector:
    v = g_invariant_integer_vector(kind, indices, dim)
    return StateVector(v / math.sqrt(int(v @ v)), (dim,) * 4)


def is_swap_fixed(v: np.ndarray, d: int) -> bool:
    """Exact check of ``Pi_13 v = v`` and ``Pi_24 v = v`` on an integer vector."""
    return bool(np.array_equal(permute_int(v, SWAP_13, d), v) and np.array_equal(permute_int(v, SWAP_24, d), v))


def representation_matrix(vectors: Sequence[np.ndarray], sigma: Permutation, d: int) -> np.ndarray:
    """Integer ``M`` with ``P_sigma v_j = sum_i M[i, j] v_i``, verified exactly."""
    B = np.stack(vectors, axis=1)
    images = np.stack([permute_int(v, sigma, d) for v in vectors], axis=1)
    M = np.linalg.lstsq(B.astype(float), images.astype(float), rcond=None)[0]
    Mi = np.rint(M).astype(np.int64)
    if not np.array_equal(B @ Mi, images):
        raise ArithmeticError("image is not an integer combination of the basis")
    return Mi


def pair_decomposition(v: np.ndarray, d: int, tol: float = 1e-12) -> int:
    """Operator Schmidt rank of ``v`` across registers ``(12):(34)``."""
    s = np.linalg.svd(v.reshape(d * d, d * d).astype(float), compute_uv=False)
    return int(np.sum(s > tol * s.max()))


# -- counterexample --------------------------------------------------------


def _pair_state(i: int, j: int, d: int) -> np.ndarray:
    v = np.zeros(d * d)
    v[i * d + j] += 1
    v[j * d + i] += 1
    return v / np.linalg.norm(v)


def counterexample_subspace(u: int, v: int, w: int, x: int, d: int) -> Subspace:
    """Span of ``(|ij> + |ji>)/sqrt2`` over the six pairs from ``{u, v, w, x}``."""
    if d < 4:
        raise ValueError("d must be >= 4")
    idx = _check_indices((u, v, w, x), d)
    cols = [_pair_state(i, j, d) for i, j in itertools.combinations(idx, 2)]
    return Subspace(d * d, np.stack(cols, axis=1))


def counterexample_state(u: int, v: int, w: int, x: int, d: int) -> StateVector:
    """The 24-term fully symmetric witness on ``A1 B1 A2 B2``."""
    if d < 4:
        raise ValueError("d must be >= 4")
    return g_invariant_basis_state("sym4", (u, v, w, x), d)


# -- search harness ---------------------------------------------------------


def _pool(d: int) -> list[tuple[str, np.ndarray]]:
    out = []
    for i, j in itertools.combinations(range(d), 2):
        out.append((f"S{i}{j}", _pair_state(i, j, d)))
        a = np.zeros(d * d)
        a[i * d + j], a[j * d + i] = 1, -1
        out.append((f"A{i}{j}", a / math.sqrt(2)))
    return out


def best_witness_acceptance(B: np.ndarray, d: int) -> float:
    """Max product-test acceptance over proofs in ``S (x) S``: top eigenvalue of the compression."""
    s = B.shape[1]
    W = np.einsum("ai,bj->abij", B, B).reshape(d**4, s * s)
    cols = W.reshape((d, d, d, d, s * s))
    Q = symmetrize(symmetrize(cols, [0, 2]), [1, 3]).reshape(d**4, s * s)
    M = W.conj().T @ Q
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2).max())


def fooling_search(d: int = 4, dims: Sequence[int] = (2, 3, 4, 5), overlap_threshold: float = 1 - 1e-6, seed: int = 0, limit: int | None = None) -> dict:
    """Scan spans of symmetric and antisymmetric pair states for fooling subspaces.

    A subspace fools the 2-copy verifier if some proof in ``S (x) S`` passes the
    product test with probability one while every state of ``S`` is entangled.
    Candidates whose best witness reaches one are checked with the overlap
    heuristic. Results are reported, not asserted.
    """
    from .entanglement import subspace_max_product_overlap

    pool = _pool(d)
    out = {}
    for s in dims:
        tried = certified = found = 0
        examples = []
        for combo in itertools.combinations(range(len(pool)), s):
            if limit is not None and tried >= limit:
                break
            tried += 1
            B = np.stack([pool[i][1] for i in combo], axis=1)
            if best_witness_acceptance(B, d) < 1 - 1e-9:
                continue
            certified += 1
            ov = subspace_max_product_overlap(Subspace(d * d, B), d, d, restarts=10, seed=seed).value
            if ov < overlap_threshold:
                found += 1
                if len(examples) < 5:
                    examples.append({"span": [pool[i][0] for i in combo], "overlap": ov})
        out[int(s)] = {"candidates": tried, "perfect_witness": certified, "entangled_and_fooled": found, "examples": examples}
    return out
