from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uptest.linalg import StateVector, Subspace, haar_subspace, haar_unitary, tensor_product
from uptest.oracles import (
    ReflectionOracle,
    SpectrumOracle,
    apply_controlled,
    oracle_from_descriptor,
    reflection_from_subspace,
    sample_recurrence_instance,
)


def test_empty_reflection_is_identity():
    o = reflection_from_subspace(Subspace(3, np.zeros((3, 0))))
    np.testing.assert_array_equal(o.matrix(), np.eye(3))


def test_reflection_about_zero_ket():
    o = reflection_from_subspace(Subspace(2, np.array([[1.0], [0.0]])))
    np.testing.assert_allclose(o.matrix(), np.diag([-1, 1]), atol=1e-12)


def test_reflection_trace():
    o = reflection_from_subspace(haar_subspace(4, 2, 1))
    assert abs(np.trace(o.matrix())) < 1e-10


def test_reflection_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        reflection_from_subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))


@given(st.integers(0, 2**31 - 1), st.integers(1, 16), st.data())
def test_reflection_involution(seed, d, data):
    s = data.draw(st.integers(0, d))
    o = reflection_from_subspace(haar_subspace(d, s, seed) if s else Subspace(d, np.zeros((d, 0))))
    U = o.matrix()
    np.testing.assert_allclose(U @ U, np.eye(d), atol=1e-10)
    np.testing.assert_allclose(U, U.conj().T, atol=1e-10)


def test_matrix_free_agrees_with_dense(rng):
    S = haar_subspace(64, 5, rng)
    dense = ReflectionOracle(S)
    free = ReflectionOracle(S, matrix_free=True)
    v = rng.standard_normal((64, 3)) + 1j * rng.standard_normal((64, 3))
    np.testing.assert_allclose(dense.apply(v), free.apply(v), atol=1e-9)


def test_apply_then_adjoint_restores(rng):
    o = SpectrumOracle(np.exp(1j * rng.uniform(0, 6, 5)), haar_unitary(5, rng))
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    np.testing.assert_allclose(o.adjoint(o.apply(v)), v, atol=1e-10)
    assert o.query_counter == 2


def test_spectrum_roots_match(rng):
    z = np.exp(1j * rng.uniform(0, 6, 8))
    o = SpectrumOracle(z, haar_unitary(8, rng))
    ev = np.linalg.eigvals(o.matrix())
    for w in z:
        assert np.min(np.abs(ev - w)) < 1e-8


def test_spectrum_rejects_non_unit():
    with pytest.raises(ValueError):
        SpectrumOracle([1.0, 0.5])


def test_power_counts_queries():
    o = SpectrumOracle([1, 1j])
    np.testing.assert_allclose(o.power(3), np.diag([1, -1j]), atol=1e-12)
    assert o.query_counter == 3


def test_conjugated_reflection_spectrum(rng):
    o = reflection_from_subspace(haar_subspace(6, 2, rng))
    V = haar_unitary(6, rng)
    c = o.conjugate(V)
    assert isinstance(c, ReflectionOracle)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(c.matrix())), [-1, -1, 1, 1, 1, 1], atol=1e-10)
    np.testing.assert_allclose(c.matrix(), V @ o.matrix() @ V.conj().T, atol=1e-10)


def test_recurrence_instance_extremes():
    np.testing.assert_array_equal(sample_recurrence_instance(5, 0.0, 1j, 1).matrix(), np.eye(5))
    np.testing.assert_array_equal(sample_recurrence_instance(5, 1.0, -1, 1).matrix(), -np.eye(5))


def test_recurrence_instance_binomial():
    o = sample_recurrence_instance(1000, 0.3, 1j, 4)
    count = int(np.sum(np.isclose(o.spectrum, 1j)))
    assert abs(count - 300) <= 3 * math.sqrt(1000 * 0.3 * 0.7)


def test_recurrence_instance_validation():
    with pytest.raises(ValueError):
        sample_recurrence_instance(3, 0.5, 2.0)
    with pytest.raises(ValueError):
        sample_recurrence_instance(3, 1.5, 1j)


def _plus_zero():
    plus = StateVector(np.array([1, 1]) / math.sqrt(2), (2,))
    return tensor_product(plus, StateVector.basis(0, (2,)))


def test_controlled_examples():
    o = SpectrumOracle([-1, 1])
    zero = tensor_product(StateVector.basis(0, (2,)), StateVector.basis(0, (2,)))
    assert np.array_equal(apply_controlled(o, zero, 0, [1]).amplitudes, zero.amplitudes)
    one = tensor_product(StateVector.basis(1, (2,)), StateVector.basis(1, (2,)))
    neg = SpectrumOracle([-1, -1])
    np.testing.assert_allclose(apply_controlled(neg, one, 0, [1]).amplitudes, -one.amplitudes)
    out = apply_controlled(o, _plus_zero(), 0, [1])
    np.testing.assert_allclose(out.amplitudes, np.array([1, 0, -1, 0]) / math.sqrt(2), atol=1e-12)
    assert o.query_counter == 2


def test_controlled_register_order():
    o = SpectrumOracle([-1, 1])
    st_ = tensor_product(StateVector.basis(0, (2,)), StateVector(np.array([1, 1]) / math.sqrt(2), (2,)))
    out = apply_controlled(o, st_, 1, [0])
    np.testing.assert_allclose(out.amplitudes, np.array([1, -1, 0, 0]) / math.sqrt(2), atol=1e-12)


def test_controlled_shape_errors():
    o = SpectrumOracle([1, 1, 1])
    with pytest.raises(ValueError):
        apply_controlled(o, _plus_zero(), 0, [1])
    with pytest.raises(ValueError):
        apply_controlled(SpectrumOracle([1, 1]), _plus_zero(), 0, [0])


def test_descriptor_round_trip(rng):
    for o in (reflection_from_subspace(haar_subspace(4, 2, rng), seed=3), SpectrumOracle([1, 1j, -1], haar_unitary(3, rng))):
        back = oracle_from_descriptor(o.to_json())
        np.testing.assert_allclose(back.matrix(), o.matrix(), atol=1e-12)
        assert back.descriptor()["kind"] == o.kind
