"""Desk-scale simulation of unitary property testers and their invariants."""

from __future__ import annotations

__version__ = "0.1.0"

from ._accel import backend
from .linalg import (
    Permutation,
    StateVector,
    Subspace,
    SymmetricGroupElement,
    haar_subspace,
    haar_unitary,
    permutation_operator,
    reduced_density,
    schmidt_spectrum,
    symmetric_projector,
    tensor_product,
)
from .oracles import ReflectionOracle, SpectrumOracle, UnitaryOracle, apply_controlled, reflection_from_subspace, sample_recurrence_instance
from .testers import (
    VerifierReport,
    dimension_estimator,
    membership_test,
    phase_estimate,
    product_test,
    product_test_verifier,
    recurrence_tester,
    swap_test,
    symqma_verifier,
    wrapped_qma_verifier,
)

__all__ = [
    "Permutation", "StateVector", "Subspace", "SymmetricGroupElement", "haar_subspace", "haar_unitary",
    "permutation_operator", "reduced_density", "schmidt_spectrum", "symmetric_projector", "tensor_product",
    "ReflectionOracle", "SpectrumOracle", "UnitaryOracle", "apply_controlled", "reflection_from_subspace",
    "sample_recurrence_instance", "VerifierReport", "dimension_estimator", "membership_test", "phase_estimate",
    "product_test", "product_test_verifier", "recurrence_tester", "swap_test", "symqma_verifier",
    "wrapped_qma_verifier", "backend", "__version__",
]
