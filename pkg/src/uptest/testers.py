"""Exact and sampled simulation of testers and verifiers.

Acceptance probabilities are computed by projector algebra on the full
state. Oracle calls go through the oracle interface so the reported query
counts are the oracle's own counter deltas.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import hadamard

from .linalg import StateVector, fix_shape, make_rng, max_entangled, symmetrize
from .oracles import ReflectionOracle, SpectrumOracle, UnitaryOracle

PROB_TOL = 1e-10


@dataclass
class VerifierReport:
    tester: str
    accept_probability: float
    queries_used: int
    decision: str | None = None
    seed: int | None = None
    trials: int = 1
    stderr: float = 0.0
    exact: bool = True
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        p = float(self.accept_probability)
        if self.exact:
            if not -PROB_TOL <= p <= 1 + PROB_TOL:
                raise ValueError(f"exact probability {p!r} outside [0, 1]")
            p = min(1.0, max(0.0, p))
        elif p - 3 * self.stderr < -0.05 or p + 3 * self.stderr > 1.05:
            raise ValueError(f"estimate {p!r} +- 3*{self.stderr!r} outside [-0.05, 1.05]")
        self.accept_probability = p

    def to_dict(self) -> dict:
        out = asdict(self)
        out["params"] = _jsonable(self.params)
        out["details"] = _jsonable(self.details)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def sample_report(report: VerifierReport, trials: int, seed=None) -> VerifierReport:
    """Replace an exact probability by a Bernoulli estimate over ``trials`` runs."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = make_rng(seed)
    hits = int(rng.binomial(trials, report.accept_probability))
    est = hits / trials
    err = math.sqrt(max(est * (1 - est), 1.0 / trials) / trials)
    return VerifierReport(
        report.tester, est, report.queries_used * trials, None, seed if isinstance(seed, int) else None,
        trials, err, False, dict(report.params), {"exact_probability": report.accept_probability},
    )


# -- building blocks --------------------------------------------------------


def _membership_branch(o: UnitaryOracle, t: np.ndarray) -> np.ndarray:
    """Hadamard test with controlled ``U`` on the leading axis of ``t``.

    Returns the unnormalized branch where the ancilla reads 1, which for
    ``U = I - 2 Pi`` is ``Pi t``. Charges one query.
    """
    anc = np.stack([t, t]) / math.sqrt(2)
    out = o.controlled(anc)
    return (out[0] - out[1]) / math.sqrt(2)


def _apply_on_axes(fn, t: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Run ``fn`` on a reshaped view with ``axes`` merged into the leading axis."""
    axes = list(axes)
    rest = [a for a in range(t.ndim) if a not in axes]
    moved = np.transpose(t, axes + rest)
    lead = math.prod(t.shape[a] for a in axes)
    out = fn(moved.reshape(lead, -1)).reshape(moved.shape)
    return np.transpose(out, np.argsort(axes + rest))


def _norm2(t: np.ndarray) -> float:
    return float(np.vdot(t, t).real)


def _pair_dim(o: UnitaryOracle) -> int:
    d = math.isqrt(o.dim)
    if d * d != o.dim:
        raise ValueError(f"oracle dim {o.dim} is not a square d*d")
    return d


def _product_projection(t: np.ndarray, copies: Sequence[int]) -> np.ndarray:
    """Apply Sym(A-group) (x) Sym(B-group) for the listed ``A_i B_i`` copies."""
    copies = list(copies)
    t = symmetrize(t, [2 * c for c in copies])
    return symmetrize(t, [2 * c + 1 for c in copies])


# -- verifiers --------------------------------------------------------------


def membership_test(o: ReflectionOracle, proof: StateVector) -> VerifierReport:
    """Accept with probability ``||Pi proof||^2`` using one controlled query."""
    if proof.dim != o.dim:
        raise ValueError(f"proof dim {proof.dim} != oracle dim {o.dim}")
    before = o.query_counter
    branch = _membership_branch(o, proof.amplitudes.reshape(o.dim, 1))
    p = _norm2(branch)
    return VerifierReport("membership", p, o.query_counter - before, params={"dim": o.dim})


def swap_test(joint: StateVector, registers: Sequence[int] = (0, 1)) -> VerifierReport:
    """Accept with probability ``<psi|(I + SWAP)/2|psi>`` on two equal registers."""
    a, b = registers
    if joint.shape[a] != joint.shape[b]:
        raise ValueError(f"register dims differ: {joint.shape[a]} vs {joint.shape[b]}")
    sym = symmetrize(joint.tensor(), [a, b])
    return VerifierReport("swap", _norm2(sym), 0, params={"shape": list(joint.shape)})


def product_test(state: StateVector, k: int, d: int) -> VerifierReport:
    """k-copy product test on registers ``A1 B1 ... Ak Bk``, each of dimension ``d``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    st = fix_shape(state, (d,) * (2 * k))
    p = _norm2(_product_projection(st.tensor(), range(k)))
    return VerifierReport("product_test", p, 0, params={"k": k, "d": d})


def product_test_verifier(o: ReflectionOracle, proof: StateVector) -> VerifierReport:
    """Membership on ``A1B1`` and on ``A2B2``, then the 2-copy product test."""
    d = _pair_dim(o)
    st = fix_shape(proof, (d, d, d, d))
    before = o.query_counter
    t = st.tensor()
    member = lambda x: _membership_branch(o, x)
    t = _apply_on_axes(member, t, [0, 1])
    t = _apply_on_axes(member, t, [2, 3])
    p_member = _norm2(t)
    p = _norm2(_product_projection(t, [0, 1]))
    return VerifierReport(
        "product_test_verifier", p, o.query_counter - before,
        params={"d": d}, details={"membership_probability": p_member},
    )


def symqma_verifier(o: ReflectionOracle, proof: StateVector, k: int) -> VerifierReport:
    """Product test on copies ``1..k`` and membership on copy ``k+1``."""
    d = _pair_dim(o)
    st = fix_shape(proof, (d,) * (2 * (k + 1)))
    before = o.query_counter
    t = _apply_on_axes(lambda x: _membership_branch(o, x), st.tensor(), [2 * k, 2 * k + 1])
    p_member = _norm2(t)
    p = _norm2(_product_projection(t, range(k)))
    return VerifierReport(
        "symqma_verifier", p, o.query_counter - before,
        params={"d": d, "k": k}, details={"membership_probability": p_member},
    )


Verifier = Callable[[StateVector], VerifierReport]


def wrapped_qma_verifier(o: ReflectionOracle, proof: StateVector, inner: Verifier | None = None) -> VerifierReport:
    """Check both proof copies against the encoded state, then run ``inner``.

    ``o`` must reflect about a single state ``|psi>`` in ``C^d (x) C^d``; the
    proof lives on ``A1 B1 A2 B2``. The default inner verifier is the 2-copy
    product test.
    """
    if not isinstance(o, ReflectionOracle) or o.rank != 1:
        raise ValueError("wrapped verifier needs a rank-1 reflection oracle")
    d = _pair_dim(o)
    st = fix_shape(proof, (d, d, d, d))
    inner = inner or (lambda s: product_test(s, 2, d))
    before = o.query_counter
    member = lambda x: _membership_branch(o, x)
    t = _apply_on_axes(member, st.tensor(), [0, 1])
    t = _apply_on_axes(member, t, [2, 3])
    c0_sq = _norm2(t)
    inner_p, inner_q = 0.0, 0
    if c0_sq > 1e-30:
        rep = inner(StateVector(t / math.sqrt(c0_sq), (d, d, d, d)))
        inner_p, inner_q = rep.accept_probability, rep.queries_used
    return VerifierReport(
        "wrapped_qma_verifier", c0_sq * inner_p, o.query_counter - before + inner_q,
        params={"d": d}, details={"overlap_squared": c0_sq, "inner_probability": inner_p},
    )


# -- phase estimation -------------------------------------------------------


@dataclass
class PhaseDistribution:
    """Outcome distribution over ``b``-bit phase estimates ``l / 2^b``."""

    bits: int
    probabilities: np.ndarray
    queries_used: int

    @property
    def phases(self) -> np.ndarray:
        return np.arange(self.probabilities.size) / self.probabilities.size

    def mode(self) -> float:
        return float(self.phases[int(np.argmax(self.probabilities))])

    def probability_of(self, phase: float) -> float:
        N = self.probabilities.size
        return float(self.probabilities[int(round(phase * N)) % N])

    def sample(self, seed=None, size=None):
        rng = make_rng(seed)
        return rng.choice(self.probabilities.size, size=size, p=self.probabilities) / self.probabilities.size


class _PhaseCircuit:
    """Phase-estimation unitary ``A`` on arrays of shape ``(2^bits, D, ...)``.

    ``powers(j)`` returns the dense ``W^{2^j}`` acting on axis 1 and is
    responsible for charging the corresponding queries.
    """

    def __init__(self, bits: int, powers: Callable[[int], np.ndarray]):
        if bits < 1:
            raise ValueError("bits must be >= 1")
        self.bits = bits
        self.N = 2**bits
        self._powers = powers
        self._wh = hadamard(self.N).astype(np.complex128) / math.sqrt(self.N)
        self._sel = [((np.arange(self.N) >> j) & 1).astype(bool) for j in range(bits)]

    def _controlled(self, x: np.ndarray, adjoint: bool) -> np.ndarray:
        x = x.copy()
        for j in range(self.bits):
            M = self._powers(j)
            if adjoint:
                M = M.conj().T
            rows = self._sel[j]
            sub = x[rows]
            x[rows] = np.matmul(M, sub.reshape(sub.shape[0], sub.shape[1], -1)).reshape(sub.shape)
        return x

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.tensordot(self._wh, x, axes=(1, 0))
        x = self._controlled(x, adjoint=False)
        return np.fft.fft(x, axis=0, norm="ortho")

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        x = np.fft.ifft(x, axis=0, norm="ortho")
        x = self._controlled(x, adjoint=True)
        return np.tensordot(self._wh, x, axes=(1, 0))

    def initial(self, v: np.ndarray) -> np.ndarray:
        x = np.zeros((self.N,) + v.shape, dtype=np.complex128)
        x[0] = v
        return x


def _oracle_powers(o: UnitaryOracle) -> Callable[[int], np.ndarray]:
    return lambda j: o.power(2**j)


def phase_estimate(o: UnitaryOracle, state: StateVector, bits: int) -> PhaseDistribution:
    """Textbook phase estimation of ``o`` on ``state``; uses ``2^bits - 1`` queries."""
    if state.dim != o.dim:
        raise ValueError(f"input dim {state.dim} != oracle dim {o.dim}")
    before = o.query_counter
    circ = _PhaseCircuit(bits, _oracle_powers(o))
    out = circ.forward(circ.initial(state.amplitudes))
    probs = np.sum(np.abs(out) ** 2, axis=1)
    return PhaseDistribution(bits, probs / probs.sum(), o.query_counter - before)


def recurrence_bits(t: int, epsilon: float) -> int:
    return math.ceil(math.log2(8 * t / epsilon)) + 2


def default_grover_schedule(d: int) -> list[int]:
    """Iteration counts ``sqrt(d), sqrt(d/2), ...`` down to a single marked item."""
    out, i = [], 0
    while 2**i <= d:
        out.append(max(1, round(math.sqrt(d / 2**i))))
        i += 1
    return out


def recurrence_tester(o: UnitaryOracle, t: int, epsilon: float, bits: int | None = None, grover_schedule: Sequence[int] | None = None, seed=None) -> VerifierReport:
    """Decide ``U^t = I`` against ``||U^t - I|| >= epsilon``.

    Phase estimation runs on half of a maximally entangled state; outcomes
    ``l`` with ``|exp(2 pi i t l / 2^bits) - 1| >= epsilon / 2`` are marked bad
    and amplified with the given schedule. The run rejects iff some stage
    measures a bad outcome. ``accept_probability`` is the exact probability
    that no stage does.
    """
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if t < 1:
        raise ValueError("t must be >= 1")
    bits = recurrence_bits(t, epsilon) if bits is None else int(bits)
    if bits < 1 or 2.0**-bits > epsilon / (8 * t):
        raise ValueError(f"bits={bits} too small: need 2^-bits <= epsilon/(8t) = {epsilon / (8 * t):.3g}")
    d = o.dim
    schedule = default_grover_schedule(d) if grover_schedule is None else [int(m) for m in grover_schedule]
    if any(m < 0 for m in schedule):
        raise ValueError("Grover iteration counts must be nonnegative")
    before = o.query_counter
    circ = _PhaseCircuit(bits, _oracle_powers(o))
    N = circ.N
    ell = np.arange(N)
    bad = np.abs(np.exp(2j * np.pi * t * ell / N) - 1) >= epsilon / 2
    start = circ.initial(max_entangled(d).amplitudes.reshape(d, d))
    rng = make_rng(seed)
    p_bad, rejected_at = [], None
    for stage, m in enumerate(schedule):
        psi = circ.forward(start)
        for _ in range(m):
            psi[bad] *= -1
            x = circ.adjoint(psi)
            x = 2 * np.vdot(start, x) * start - x
            psi = circ.forward(x)
        pb = float(np.sum(np.abs(psi[bad]) ** 2))
        # exact-phase instances leave only rounding noise in the bad set
        pb = 0.0 if pb < 1e-12 else min(1.0, pb)
        p_bad.append(pb)
        if rng.random() < pb and rejected_at is None:
            rejected_at = stage
    accept = float(np.prod([1 - p for p in p_bad]))
    return VerifierReport(
        "recurrence_tester", accept, o.query_counter - before,
        decision="reject" if rejected_at is not None else "accept",
        seed=seed if isinstance(seed, int) else None,
        params={"t": t, "epsilon": epsilon, "bits": bits, "schedule": schedule, "d": d},
        details={"stage_bad_probability": p_bad, "rejected_at_stage": rejected_at},
    )


# -- dimension estimation ---------------------------------------------------


DIMENSION_C = 128.0


def dimension_bits(d: int, w: int, c: float = DIMENSION_C) -> int:
    return max(1, math.ceil(math.log2(c * math.sqrt(d / w))))


def _g_matrix(U: np.ndarray) -> np.ndarray:
    d = U.shape[0]
    phi = max_entangled(d).amplitudes
    R = 2 * np.outer(phi, phi.conj()) - np.eye(d * d)
    return R @ np.kron(U, np.eye(d))


def _g_powers(o: UnitaryOracle, bits: int) -> Callable[[int], np.ndarray]:
    """``G^{2^j}`` by repeated squaring; each power charges ``2^j`` oracle calls."""
    # the squarings depend only on the oracle, so keep them on it
    mats = o.__dict__.setdefault("_g_power_cache", [])
    if not mats:
        mats.append(_g_matrix(o.matrix()))
    while len(mats) < bits:
        mats.append(mats[-1] @ mats[-1])

    def power(j):
        o._charge(2**j)
        return mats[j]

    return power


def dimension_estimate_distribution(o: ReflectionOracle, bits: int) -> PhaseDistribution:
    d = o.dim
    before = o.query_counter
    # the outcome law is deterministic; later runs reuse it but still pay for the queries
    cache = o.__dict__.setdefault("_g_dist_cache", {})
    if bits in cache:
        o._charge(2**bits - 1)
        probs = cache[bits]
    else:
        circ = _PhaseCircuit(bits, _g_powers(o, bits))
        out = circ.forward(circ.initial(max_entangled(d).amplitudes))
        probs = np.sum(np.abs(out) ** 2, axis=1)
        probs = probs / probs.sum()
        cache[bits] = probs
    return PhaseDistribution(bits, probs, o.query_counter - before)


def s_estimates(d: int, bits: int) -> np.ndarray:
    """``d sin^2(pi l / 2^bits)`` for every outcome ``l``."""
    N = 2**bits
    return d * np.sin(np.pi * np.arange(N) / N) ** 2


def dimension_estimator(o: ReflectionOracle, w: int, bits: int | None = None, seed=None) -> VerifierReport:
    """Decide ``rank >= 2w`` versus ``rank <= w`` for a reflection oracle.

    ``accept_probability`` is the exact probability of the decision ``>=2w``.
    """
    d = o.dim
    if not 1 <= w <= d / 2:
        raise ValueError(f"w must lie in [1, {d // 2}], got {w}")
    bits = dimension_bits(d, w) if bits is None else int(bits)
    dist = dimension_estimate_distribution(o, bits)
    s_tilde = s_estimates(d, bits)
    high = s_tilde >= 1.5 * w
    rng = make_rng(seed)
    ell = int(rng.choice(dist.probabilities.size, p=dist.probabilities))
    details = {"s_tilde": float(s_tilde[ell]), "outcome": ell}
    if isinstance(o, ReflectionOracle) and o.rank > 0:
        s = o.rank
        close = (s_tilde >= 0.9 * s) & (s_tilde <= 1.1 * s)
        details["within_10_percent_probability"] = float(dist.probabilities[close].sum())
    return VerifierReport(
        "dimension_estimator", float(dist.probabilities[high].sum()), dist.queries_used,
        decision=">=2w" if high[ell] else "<=w",
        seed=seed if isinstance(seed, int) else None,
        params={"w": w, "bits": bits, "d": d}, details=details,
    )


def g_plane_eigenphases(o: ReflectionOracle) -> np.ndarray:
    """Eigenphases of ``G`` restricted to the plane spanned by the two halves of Phi."""
    d = o.dim
    s = o.rank
    if not 0 < s < d:
        raise ValueError("plane is degenerate for rank 0 or rank d")
    phi = max_entangled(d).amplitudes
    P = np.kron(o.subspace.projector(), np.eye(d))
    a = P @ phi
    b = phi - a
    B = np.column_stack([a / np.linalg.norm(a), b / np.linalg.norm(b)])
    M = B.conj().T @ _g_matrix(o.matrix()) @ B
    return np.sort(np.angle(np.linalg.eigvals(M)))
