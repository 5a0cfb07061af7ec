from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uptest.entanglement import h_k
from uptest.linalg import StateVector, Subspace, bell_state, haar_state, haar_subspace, haar_unitary, schmidt_spectrum, tensor_product
from uptest.oracles import SpectrumOracle, reflection_from_subspace
from uptest.testers import (
    VerifierReport,
    default_grover_schedule,
    dimension_estimator,
    g_plane_eigenphases,
    membership_test,
    phase_estimate,
    product_test,
    product_test_verifier,
    recurrence_bits,
    recurrence_tester,
    sample_report,
    swap_test,
    symqma_verifier,
    wrapped_qma_verifier,
)
from uptest.fooling import counterexample_state, counterexample_subspace
from uptest.linalg import coordinate_subspace


def ket(i, shape):
    return StateVector.basis(i, shape)


def test_report_validates_probability():
    with pytest.raises(ValueError):
        VerifierReport("x", 1.5, 0)
    assert VerifierReport("x", 1 + 1e-12, 0).accept_probability == 1.0


def test_report_json_fields():
    d = json.loads(VerifierReport("x", 0.25, 3, decision="accept", seed=4).to_json())
    for key in ("tester", "params", "seed", "trials", "accept_probability", "stderr", "queries_used", "decision"):
        assert key in d


def test_sample_report_within_band():
    r = sample_report(VerifierReport("x", 0.3, 1), 4000, seed=1)
    assert not r.exact
    assert abs(r.accept_probability - 0.3) <= 3 * r.stderr


def test_membership_examples():
    S = Subspace.span([bell_state().amplitudes])
    o = reflection_from_subspace(S)
    assert membership_test(o, bell_state()).accept_probability == pytest.approx(1, abs=1e-12)
    assert membership_test(o, ket(0, (2, 2))).accept_probability == pytest.approx(0.5, abs=1e-12)
    singlet = StateVector(np.array([0, 1, -1, 0]) / math.sqrt(2), (2, 2))
    r = membership_test(o, singlet)
    assert r.accept_probability == pytest.approx(0, abs=1e-12)
    assert r.queries_used == 1 and o.query_counter == 3


def test_swap_examples():
    a = ket(0, (2,))
    assert swap_test(tensor_product(a, a)).accept_probability == pytest.approx(1)
    assert swap_test(tensor_product(a, ket(1, (2,)))).accept_probability == pytest.approx(0.5)
    singlet = StateVector(np.array([0, 1, -1, 0]) / math.sqrt(2), (2, 2))
    assert swap_test(singlet).accept_probability == pytest.approx(0, abs=1e-12)


def test_swap_unequal_registers():
    with pytest.raises(ValueError):
        swap_test(ket(0, (2, 3)))


def test_product_test_examples():
    phi, xi = haar_state(3, 1), haar_state(3, 2)
    pxi = tensor_product(phi, xi)
    assert product_test(tensor_product(pxi, pxi), 2, 3).accept_probability == pytest.approx(1, abs=1e-10)
    b = bell_state()
    assert product_test(b.power(2), 2, 2).accept_probability == pytest.approx(0.75, abs=1e-12)
    assert product_test(b.power(3), 3, 2).accept_probability == pytest.approx(0.5, abs=1e-12)


@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)]))
def test_product_test_matches_h_k(seed, dk):
    d, k = dk
    psi = haar_state(d * d, seed, (d, d))
    p = product_test(psi.power(k), k, d).accept_probability
    assert abs(p - h_k(schmidt_spectrum(psi, d, d), k)) < 1e-10


def test_product_test_verifier_examples():
    d = 3
    phi, xi = haar_state(d, 1), haar_state(d, 2)
    prod = np.kron(phi.amplitudes, xi.amplitudes)
    extra = haar_subspace(d * d, 2, 3).basis
    o = reflection_from_subspace(Subspace.span([prod, *extra.T]))
    pxi = StateVector(prod, (d, d))
    r = product_test_verifier(o, pxi.power(2))
    assert r.accept_probability == pytest.approx(1, abs=1e-10)
    assert r.queries_used == 2 == o.query_counter
    # a proof outside S (x) S
    o2 = reflection_from_subspace(Subspace.span([np.eye(d * d)[0]]))
    other = StateVector(np.eye(d * d)[1], (d, d))
    assert product_test_verifier(o2, other.power(2)).accept_probability == pytest.approx(0, abs=1e-12)


def test_product_test_verifier_counterexample():
    o = reflection_from_subspace(counterexample_subspace(0, 1, 2, 3, 4))
    r = product_test_verifier(o, counterexample_state(0, 1, 2, 3, 4))
    assert r.accept_probability == pytest.approx(1, abs=1e-12)
    assert r.details["membership_probability"] == pytest.approx(1, abs=1e-12)


def test_symqma_examples():
    d = 2
    prod = np.kron([1, 0], [0, 1]).astype(complex)
    o = reflection_from_subspace(Subspace.span([prod, bell_state().amplitudes]))
    for k in (1, 2, 3):
        r = symqma_verifier(o, StateVector(prod, (d, d)).power(k + 1), k)
        assert r.accept_probability == pytest.approx(1, abs=1e-12)
        assert r.queries_used == 1
    psi = StateVector((np.sqrt(0.8) * np.kron([1, 0], [1, 0]) + np.sqrt(0.2) * np.kron([0, 1], [0, 1])).astype(complex), (2, 2))
    o2 = reflection_from_subspace(Subspace.span([psi.amplitudes]))
    r = symqma_verifier(o2, psi.power(3), 2)
    assert r.accept_probability == pytest.approx(h_k([0.8, 0.2], 2), abs=1e-12)


def test_wrapped_verifier_examples():
    d = 2
    psi = haar_state(4, 5, (2, 2))
    o = reflection_from_subspace(Subspace.span([psi.amplitudes]))
    s = product_test(psi.power(2), 2, d).accept_probability
    assert wrapped_qma_verifier(o, psi.power(2)).accept_probability == pytest.approx(s, abs=1e-10)
    e0 = np.eye(4)[0]
    perp = e0 - np.vdot(psi.amplitudes, e0) * psi.amplitudes
    perp /= np.linalg.norm(perp)
    orth = StateVector(np.kron(perp, perp), (2, 2, 2, 2))
    assert wrapped_qma_verifier(o, orth).accept_probability == pytest.approx(0, abs=1e-12)
    half = StateVector((psi.power(2).amplitudes + orth.amplitudes) / math.sqrt(2), (2, 2, 2, 2))
    assert wrapped_qma_verifier(o, half).accept_probability == pytest.approx(s / 2, abs=1e-10)


def test_wrapped_verifier_needs_rank_one():
    o = reflection_from_subspace(haar_subspace(4, 2, 1))
    with pytest.raises(ValueError):
        wrapped_qma_verifier(o, bell_state().power(2))


@given(st.integers(0, 2**31 - 1))
def test_wrapped_soundness(seed):
    rng = np.random.default_rng(seed)
    psi = haar_state(4, rng, (2, 2))
    o = reflection_from_subspace(Subspace.span([psi.amplitudes]))
    best = wrapped_qma_verifier(o, psi.power(2)).accept_probability
    proof = haar_state(16, rng, (2, 2, 2, 2))
    assert wrapped_qma_verifier(o, proof).accept_probability <= best + 1e-10


def test_phase_estimate_identity():
    o = SpectrumOracle(np.ones(3))
    dist = phase_estimate(o, haar_state(3, 1), 4)
    assert dist.probability_of(0.0) == pytest.approx(1, abs=1e-12)
    assert dist.queries_used == 15 == o.query_counter


def test_phase_estimate_exact_half():
    dist = phase_estimate(SpectrumOracle([1, -1]), ket(1, (2,)), 3)
    assert dist.probability_of(0.5) == pytest.approx(1, abs=1e-12)
    assert dist.mode() == 0.5


def test_phase_estimate_third():
    dist = phase_estimate(SpectrumOracle([1, np.exp(2j * np.pi / 3)]), ket(1, (2,)), 4)
    assert dist.mode() == 5 / 16
    assert dist.probability_of(5 / 16) >= 4 / math.pi**2


def test_recurrence_parameters():
    assert recurrence_bits(2, 0.5) == 7
    assert default_grover_schedule(4) == [2, 1, 1]
    with pytest.raises(ValueError):
        recurrence_tester(SpectrumOracle([1, 1]), 1, 1.5)
    with pytest.raises(ValueError):
        recurrence_tester(SpectrumOracle([1, 1]), 2, 0.5, bits=3)


def test_recurrence_yes_instances():
    for seed in range(20):
        o = SpectrumOracle([1, -1, 1, -1], haar_unitary(4, seed))
        r = recurrence_tester(o, 2, 0.5, seed=seed)
        assert r.decision == "accept" and r.accept_probability == 1.0
        assert r.queries_used == o.query_counter == 1397
    r = recurrence_tester(SpectrumOracle([1, 1]), 1, 0.5, seed=0)
    assert r.decision == "accept"


def test_recurrence_no_instance_rejects():
    o = SpectrumOracle([1, 1j, 1, 1])
    rejects = sum(recurrence_tester(o, 2, 0.5, seed=s).decision == "reject" for s in range(200))
    assert rejects / 200 >= 0.5


def test_dimension_estimator_zero_rank():
    o = reflection_from_subspace(coordinate_subspace(16, 0))
    for seed in range(5):
        assert dimension_estimator(o, 2, seed=seed).decision == "<=w"


def test_dimension_estimator_validation():
    with pytest.raises(ValueError):
        dimension_estimator(reflection_from_subspace(coordinate_subspace(4, 1)), 3)


def test_g_plane_eigenphases():
    o = reflection_from_subspace(haar_subspace(16, 4, 2))
    np.testing.assert_allclose(g_plane_eigenphases(o), [-math.pi / 3, math.pi / 3], atol=1e-9)


@pytest.mark.parametrize("s,expected", [(2, "<=w"), (4, ">=2w")])
def test_dimension_estimator_decisions(s, expected):
    o = reflection_from_subspace(haar_subspace(16, s, 11))
    hits = sum(dimension_estimator(o, 2, seed=i).decision == expected for i in range(100))
    assert hits >= 90
    r = dimension_estimator(o, 2, seed=0)
    assert r.details["within_10_percent_probability"] >= 0.9
