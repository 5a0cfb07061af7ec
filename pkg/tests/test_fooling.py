from __future__ import annotations

import numpy as np
import pytest

from uptest.fooling import (
    SWAP_13,
    SWAP_24,
    SYT_22,
    SYT_31,
    YoungTableau,
    best_witness_acceptance,
    counterexample_state,
    counterexample_subspace,
    fooling_search,
    g_invariant_basis_state,
    g_invariant_integer_vector,
    is_swap_fixed,
    pair_decomposition,
    permute_int,
    representation_matrix,
    specht_vectors,
    young_symmetrizer,
)
from uptest.linalg import Permutation, all_permutations, apply_permutation, permutation_operator, symmetric_projector
from uptest.testers import product_test

KINDS = ("sym4", "shape31", "shape22", "shape22prime")


def test_tableau_validation():
    with pytest.raises(ValueError):
        YoungTableau(((2, 1),))
    with pytest.raises(ValueError):
        YoungTableau(((1, 2), (1,)))
    with pytest.raises(ValueError):
        YoungTableau(((1, 3),))
    assert YoungTableau(((1, 1), (2,)), standard=False).n == 3


def test_symmetrizer_single_row():
    c = young_symmetrizer(YoungTableau(((1, 2),)), 2)
    swap = permutation_operator(Permutation.from_cycles(2, [(1, 2)]), 2)
    np.testing.assert_allclose(c, np.eye(4) + swap)
    np.testing.assert_allclose(c @ np.eye(4)[1], [0, 1, 1, 0])


def test_symmetrizer_single_column():
    c = young_symmetrizer(YoungTableau(((1,), (2,))), 2)
    swap = permutation_operator(Permutation.from_cycles(2, [(1, 2)]), 2)
    np.testing.assert_allclose(c, np.eye(4) - swap)


def test_symmetrizer_rejects_semistandard():
    with pytest.raises(ValueError):
        young_symmetrizer(YoungTableau(((1, 1),), standard=False), 2)


def test_shape22_first_vector():
    a, b, c, d = 0, 1, 2, 3
    v1 = specht_vectors("22", (a, b, c, d), 4)[0]
    assert np.count_nonzero(v1) == 16
    assert set(np.unique(np.abs(v1))) <= {0, 1}
    assert v1[np.ravel_multi_index((a, b, c, d), (4,) * 4)] == 1
    assert v1[np.ravel_multi_index((c, b, a, d), (4,) * 4)] == -1
    # matches the dense symmetrizer
    dense = young_symmetrizer(SYT_22[0], 4) @ np.eye(256)[np.ravel_multi_index((a, b, c, d), (4,) * 4)]
    np.testing.assert_array_equal(dense.real.astype(np.int64), v1)


@pytest.mark.parametrize("kind", KINDS)
def test_basis_states_are_swap_fixed(kind):
    v = g_invariant_integer_vector(kind, (0, 1, 2, 3), 4)
    assert is_swap_fixed(v, 4)
    s = g_invariant_basis_state(kind, (0, 1, 2, 3), 4)
    assert product_test(s, 2, 4).accept_probability == pytest.approx(1, abs=1e-12)


def test_sym4_fixed_by_all_permutations():
    v = g_invariant_integer_vector("sym4", (3, 0, 2, 1), 5)
    for p in all_permutations(4):
        assert np.array_equal(permute_int(v, p, 5), v)


def test_shape31_swaps_exact():
    s = g_invariant_basis_state("shape31", (0, 1, 2, 3), 4)
    t = s.tensor()
    np.testing.assert_allclose(apply_permutation(t, SWAP_13), t, atol=1e-12)
    np.testing.assert_allclose(apply_permutation(t, SWAP_24), t, atol=1e-12)


def test_shape22prime_pair_decomposition():
    v = g_invariant_integer_vector("shape22prime", (0, 1, 2, 3), 4)
    # registers are A1 B1 A2 B2; regroup to (A1 B1) : (A2 B2)
    assert pair_decomposition(v, 4) <= 6


def test_basis_validation():
    with pytest.raises(ValueError):
        g_invariant_integer_vector("sym4", (0, 1, 1, 2), 4)
    with pytest.raises(ValueError):
        g_invariant_integer_vector("shape31", (0, 1, 2, 4), 4)
    with pytest.raises(ValueError):
        g_invariant_integer_vector("hook", (0, 1, 2, 3), 4)


def test_representation_matrices_shape31():
    vs = specht_vectors("31", (0, 1, 2, 3), 4)
    np.testing.assert_array_equal(representation_matrix(vs, SWAP_13, 4), [[1, 0, 0], [-1, -1, -1], [0, 0, 1]])
    np.testing.assert_array_equal(representation_matrix(vs, SWAP_24, 4), [[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def test_representation_matrices_shape22():
    vs = specht_vectors("22", (0, 1, 2, 3), 4)
    M13 = representation_matrix(vs, SWAP_13, 4)
    M24 = representation_matrix(vs, SWAP_24, 4)
    np.testing.assert_array_equal(M13, [[-1, -1], [0, 1]])
    np.testing.assert_array_equal(M13 @ M13, np.eye(2, dtype=np.int64))
    np.testing.assert_array_equal(M24 @ M24, np.eye(2, dtype=np.int64))


def test_counterexample_subspace():
    S = counterexample_subspace(0, 1, 2, 3, 5)
    assert S.dim == 6
    np.testing.assert_allclose(S.basis.conj().T @ S.basis, np.eye(6), atol=1e-12)
    np.testing.assert_allclose(symmetric_projector(5, 2) @ S.basis, S.basis, atol=1e-12)
    with pytest.raises(ValueError):
        counterexample_subspace(0, 1, 2, 2, 4)
    with pytest.raises(ValueError):
        counterexample_subspace(0, 1, 2, 3, 3)


def test_counterexample_state():
    d = 4
    s = counterexample_state(0, 1, 2, 3, d)
    P = counterexample_subspace(0, 1, 2, 3, d).projector()
    a = s.amplitudes.reshape(d * d, d * d)
    both = P @ a @ P.T
    assert np.vdot(both, both).real == pytest.approx(1, abs=1e-12)
    t = s.tensor()
    for p in all_permutations(4):
        np.testing.assert_allclose(apply_permutation(t, p), t, atol=1e-12)
    lam = np.linalg.svd(a, compute_uv=False) ** 2
    assert np.sum(lam > 1e-12) > 1


def test_best_witness_on_counterexample():
    S = counterexample_subspace(0, 1, 2, 3, 4)
    assert best_witness_acceptance(S.basis, 4) == pytest.approx(1, abs=1e-10)


def test_fooling_search_reports():
    out = fooling_search(d=4, dims=(2,), seed=0, limit=30)
    assert out[2]["candidates"] == 30
    assert out[2]["entangled_and_fooled"] <= out[2]["perfect_witness"] <= 30
