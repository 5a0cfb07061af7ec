"""Black-box unitaries with query accounting.

Every forward, adjoint or controlled call charges one query to the oracle's
``query_counter``. A power ``U^m`` obtained through :meth:`UnitaryOracle.power`
charges ``m`` queries, matching a circuit that calls ``U`` ``m`` times.
"""

from __future__ import annotations

import json
import math
import threading
from typing import Sequence

import numpy as np

from .linalg import StateVector, Subspace, make_rng

UNIT_TOL = 1e-12


class UnitaryOracle:
    """Base class: subclasses provide ``_apply_array`` and ``_dense``."""

    kind = "unitary"

    def __init__(self, dim: int, seed=None):
        if dim < 1:
            raise ValueError("oracle dimension must be positive")
        self.dim = int(dim)
        self.seed = seed
        self._queries = 0
        self._lock = threading.Lock()

    # -- accounting -------------------------------------------------------

    @property
    def query_counter(self) -> int:
        return self._queries

    def _charge(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError("cannot charge a negative number of queries")
        with self._lock:
            self._queries += int(n)

    # -- subclass hooks ---------------------------------------------------

    def _dense(self) -> np.ndarray:
        raise NotImplementedError

    def _apply_array(self, v: np.ndarray, adjoint: bool) -> np.ndarray:
        M = self._dense()
        if adjoint:
            M = M.conj().T
        return np.tensordot(M, v, axes=(1, 0))

    def _dense_power(self, m: int) -> np.ndarray:
        # repeated squaring
        result = np.eye(self.dim, dtype=np.complex128)
        base = self._dense()
        while m:
            if m & 1:
                result = base @ result
            m >>= 1
            if m:
                base = base @ base
        return result

    # -- public API -------------------------------------------------------

    def matrix(self) -> np.ndarray:
        """Dense matrix for inspection. Does not charge a query."""
        return self._dense()

    def apply(self, state, registers: Sequence[int] | None = None, adjoint: bool = False):
        """Apply ``U`` (or ``U^dag``) to a state or to the leading axis of an array.

        For a :class:`StateVector` the listed registers, whose dimensions must
        multiply to ``dim``, are the target. Without ``registers`` the whole
        state is the target.
        """
        self._charge(1)
        if isinstance(state, StateVector):
            return _apply_on_registers(self, state, registers, adjoint)
        v = np.asarray(state, dtype=np.complex128)
        if v.shape[0] != self.dim:
            raise ValueError(f"leading axis {v.shape[0]} != oracle dim {self.dim}")
        return self._apply_array(v, adjoint)

    def adjoint(self, state, registers: Sequence[int] | None = None):
        return self.apply(state, registers, adjoint=True)

    def controlled(self, v: np.ndarray, adjoint: bool = False) -> np.ndarray:
        """Controlled-U on an array of shape ``(2, dim, ...)``; control is axis 0."""
        self._charge(1)
        v = np.asarray(v, dtype=np.complex128)
        if v.shape[0] != 2 or v.shape[1] != self.dim:
            raise ValueError(f"expected shape (2, {self.dim}, ...), got {v.shape}")
        out = v.copy()
        out[1] = self._apply_array(v[1], adjoint)
        return out

    def power(self, m: int) -> np.ndarray:
        """Dense ``U^m``; charges ``m`` queries."""
        if m < 0:
            raise ValueError("power must be nonnegative")
        self._charge(m)
        return self._dense_power(int(m))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self._dense())

    def conjugate(self, V: np.ndarray) -> "UnitaryOracle":
        return DenseOracle(V @ self._dense() @ V.conj().T)

    def descriptor(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)


class DenseOracle(UnitaryOracle):
    """Oracle backed by an explicit unitary matrix."""

    kind = "dense"

    def __init__(self, matrix: np.ndarray, seed=None, atol: float = 1e-10):
        M = np.array(matrix, dtype=np.complex128)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("oracle matrix must be square")
        if np.abs(M.conj().T @ M - np.eye(M.shape[0])).max() > atol:
            raise ValueError("oracle matrix is not unitary")
        super().__init__(M.shape[0], seed)
        M.setflags(write=False)
        self._M = M

    def _dense(self):
        return self._M

    def descriptor(self):
        return {"kind": self.kind, "dim": self.dim, "matrix": _encode(self._M), "seed": self.seed}


class ReflectionOracle(UnitaryOracle):
    """``U = I - 2 Pi`` for the projector ``Pi`` onto ``subspace``.

    With ``matrix_free=True`` application uses ``v - 2 B (B^dag v)`` and never
    forms the ``dim x dim`` matrix.
    """

    kind = "reflection"

    def __init__(self, subspace: Subspace, seed=None, matrix_free: bool = False):
        super().__init__(subspace.ambient_dim, seed)
        self.subspace = subspace
        self.matrix_free = matrix_free
        self._cache = None

    @property
    def rank(self) -> int:
        return self.subspace.dim

    def _dense(self):
        if self._cache is None:
            M = np.eye(self.dim, dtype=np.complex128) - 2 * self.subspace.projector()
            M.setflags(write=False)
            self._cache = M
        return self._cache

    def _apply_array(self, v, adjoint):
        # self-adjoint, so the flag is irrelevant
        if self.matrix_free:
            return v - 2 * self.subspace.project(v)
        return np.tensordot(self._dense(), v, axes=(1, 0))

    def _dense_power(self, m):
        return self._dense().copy() if m % 2 else np.eye(self.dim, dtype=np.complex128)

    def eigenvalues(self):
        return np.concatenate([-np.ones(self.rank), np.ones(self.dim - self.rank)]).astype(np.complex128)

    def conjugate(self, V):
        return ReflectionOracle(self.subspace.transform(V), self.seed, self.matrix_free)

    def descriptor(self):
        return {"kind": self.kind, "dim": self.dim, "basis": _encode(self.subspace.basis), "seed": self.seed}


class SpectrumOracle(UnitaryOracle):
    """``U = V diag(z) V^dag`` for unit-modulus ``z`` and unitary ``V``."""

    kind = "spectrum"

    def __init__(self, eigenvalues, eigenbasis: np.ndarray | None = None, seed=None):
        z = np.array(eigenvalues, dtype=np.complex128).reshape(-1)
        if z.size == 0:
            raise ValueError("spectrum must be nonempty")
        if np.abs(np.abs(z) - 1).max() > UNIT_TOL:
            raise ValueError("eigenvalues must have unit modulus")
        super().__init__(z.size, seed)
        if eigenbasis is None:
            V = None
        else:
            V = np.array(eigenbasis, dtype=np.complex128)
            if V.shape != (z.size, z.size):
                raise ValueError(f"eigenbasis shape {V.shape} does not match {z.size} eigenvalues")
            if np.abs(V.conj().T @ V - np.eye(z.size)).max() > 1e-10:
                raise ValueError("eigenbasis is not unitary")
            V.setflags(write=False)
        z.setflags(write=False)
        self.spectrum = z
        self.eigenbasis = V

    def _dense_power(self, m):
        zm = self.spectrum**m
        if self.eigenbasis is None:
            return np.diag(zm)
        V = self.eigenbasis
        return (V * zm) @ V.conj().T

    def _dense(self):
        return self._dense_power(1)

    def _apply_array(self, v, adjoint):
        z = self.spectrum.conj() if adjoint else self.spectrum
        shape = (-1,) + (1,) * (v.ndim - 1)
        if self.eigenbasis is None:
            return z.reshape(shape) * v
        V = self.eigenbasis
        w = np.tensordot(V.conj().T, v, axes=(1, 0))
        return np.tensordot(V, z.reshape(shape) * w, axes=(1, 0))

    def eigenvalues(self):
        return self.spectrum.copy()

    def conjugate(self, V):
        base = np.eye(self.dim) if self.eigenbasis is None else self.eigenbasis
        return SpectrumOracle(self.spectrum, V @ base, self.seed)

    def descriptor(self):
        out = {"kind": self.kind, "dim": self.dim, "spectrum": _encode(self.spectrum), "seed": self.seed}
        if self.eigenbasis is not None:
            out["basis"] = _encode(self.eigenbasis)
        return out


# -- constructors -----------------------------------------------------------


def reflection_from_subspace(s: Subspace, matrix_free: bool = False, seed=None) -> ReflectionOracle:
    if not isinstance(s, Subspace):
        s = Subspace(len(s), s)  # validates orthonormality
    return ReflectionOracle(s, seed=seed, matrix_free=matrix_free)


def sample_recurrence_instance(d: int, p: float, z: complex, seed=None) -> SpectrumOracle:
    """Diagonal oracle whose entries are independently ``z`` (prob ``p``) or 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if abs(abs(z) - 1.0) > UNIT_TOL:
        raise ValueError(f"z must have unit modulus, got |z|={abs(z)}")
    rng = make_rng(seed)
    hits = rng.random(d) < p
    return SpectrumOracle(np.where(hits, complex(z), 1.0 + 0j), seed=seed if isinstance(seed, int) else None)


def apply_controlled(o: UnitaryOracle, state: StateVector, control: int, target: Sequence[int], adjoint: bool = False) -> StateVector:
    """``|0><0| (x) I + |1><1| (x) U`` with the given control and target registers."""
    if not 0 <= control < state.n_registers or state.shape[control] != 2:
        raise ValueError("control register must exist and have dimension 2")
    target = list(target)
    if control in target:
        raise ValueError("control register cannot also be a target")
    if math.prod(state.shape[t] for t in target) != o.dim:
        raise ValueError("target registers do not multiply to the oracle dimension")
    rest = [r for r in range(state.n_registers) if r != control and r not in target]
    order = [control] + target + rest
    t = np.transpose(state.tensor(), order).reshape(2, o.dim, -1)
    out = o.controlled(t, adjoint=adjoint)
    out = out.reshape([state.shape[r] for r in order])
    return StateVector(np.transpose(out, np.argsort(order)), state.shape)


def _apply_on_registers(o: UnitaryOracle, state: StateVector, registers, adjoint: bool) -> StateVector:
    regs = list(range(state.n_registers)) if registers is None else list(registers)
    if math.prod(state.shape[r] for r in regs) != o.dim:
        raise ValueError(f"registers {regs} of {state.shape} do not match oracle dim {o.dim}")
    rest = [r for r in range(state.n_registers) if r not in regs]
    order = regs + rest
    t = np.transpose(state.tensor(), order).reshape(o.dim, -1)
    out = o._apply_array(t, adjoint).reshape([state.shape[r] for r in order])
    return StateVector(np.transpose(out, np.argsort(order)), state.shape)


# -- serialization ----------------------------------------------------------


def _encode(a: np.ndarray) -> dict:
    a = np.asarray(a)
    return {"shape": list(a.shape), "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def _decode(obj: dict) -> np.ndarray:
    return (np.asarray(obj["re"]) + 1j * np.asarray(obj["im"])).reshape(obj["shape"])


def oracle_from_descriptor(desc: dict | str) -> UnitaryOracle:
    if isinstance(desc, str):
        desc = json.loads(desc)
    kind = desc["kind"]
    if kind == "reflection":
        return ReflectionOracle(Subspace(desc["dim"], _decode(desc["basis"])), seed=desc.get("seed"))
    if kind == "spectrum":
        basis = _decode(desc["basis"]) if "basis" in desc else None
        return SpectrumOracle(_decode(desc["spectrum"]), basis, seed=desc.get("seed"))
    if kind == "dense":
        return DenseOracle(_decode(desc["matrix"]), seed=desc.get("seed"))
    raise ValueError(f"unknown oracle kind {kind!r}")
