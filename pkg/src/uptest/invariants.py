"""Symmetric-group characters, Weingarten calculus and local-unitary invariants."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .linalg import (
    Permutation,
    all_permutations,
    haar_state,
    haar_unitaries,
    haar_unitary,
    make_rng,
    permutation_gather,
    permutation_operator,
    schmidt_spectrum,
    schmidt_state,
    split_rngs,
)

MAX_N = 6


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts if int(p) != 0)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be nonincreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def cells(self):
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j

    def hook(self, i: int, j: int) -> int:
        return self.parts[i] - j + self.conjugate().parts[j] - i - 1

    def class_size(self) -> int:
        """Number of permutations of this cycle type."""
        denom = 1
        for m, c in _multiplicities(self.parts).items():
            denom *= m**c * math.factorial(c)
        return math.factorial(self.n) // denom


def _multiplicities(parts) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in parts:
        out[p] = out.get(p, 0) + 1
    return out


def as_partition(x) -> Partition:
    if isinstance(x, Partition):
        return x
    if isinstance(x, Permutation):
        return Partition(x.cycle_type)
    return Partition(tuple(sorted((int(p) for p in x), reverse=True)))


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in reverse lexicographic order."""

    def gen(rem, cap):
        if rem == 0:
            yield ()
            return
        for p in range(min(rem, cap), 0, -1):
            for tail in gen(rem - p, p):
                yield (p,) + tail

    return tuple(Partition(p) for p in gen(n, n))


# -- characters -------------------------------------------------------------


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Murnaghan-Nakayama on a beta-set: strip rim hooks of length ``mu[0]``."""
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    bs = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in bs:
            continue
        # each bead jumped over flips the sign once
        height = sum(1 for x in beta if nb < x < b)
        new = tuple(sorted((bs - {b}) | {nb}, reverse=True))
        total += (-1) ** height * _mn(new, rest)
    return total


def character(lam, mu) -> int:
    """``chi^lam`` evaluated on cycle type ``mu`` (exact integer)."""
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.n != mu.n:
        raise ValueError(f"sizes differ: {lam.n} vs {mu.n}")
    ell = len(lam)
    beta = tuple(p + ell - 1 - i for i, p in enumerate(lam.parts))
    return _mn(beta, mu.parts)


@dataclass(frozen=True)
class CharacterTable:
    n: int
    values: dict

    @classmethod
    def build(cls, n: int) -> "CharacterTable":
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must lie in [1, {MAX_N}]")
        ps = partitions(n)
        return cls(n, {(lam, mu): character(lam, mu) for lam in ps for mu in ps})

    def __getitem__(self, key) -> int:
        lam, mu = key
        return self.values[(as_partition(lam), as_partition(mu))]

    def column_orthogonal(self) -> bool:
        ps = partitions(self.n)
        fact = math.factorial(self.n)
        for mu, nu in itertools.product(ps, ps):
            s = Fraction(sum(self.values[(lam, mu)] * self.values[(lam, nu)] for lam in ps) * mu.class_size(), fact)
            if s != (1 if mu == nu else 0):
                return False
        return True

    def row_orthogonal(self) -> bool:
        ps = partitions(self.n)
        fact = math.factorial(self.n)
        for lam, kap in itertools.product(ps, ps):
            s = sum(mu.class_size() * self.values[(lam, mu)] * self.values[(kap, mu)] for mu in ps)
            if s != (fact if lam == kap else 0):
                return False
        return True

    def to_json(self) -> str:
        rows = {str(lam): {str(mu): self.values[(lam, mu)] for mu in partitions(self.n)} for lam in partitions(self.n)}
        return json.dumps({"n": self.n, "characters": rows}, sort_keys=True)


# -- Schur functions and Weingarten -------------------------------------------


def schur_at_ones(lam, d: int) -> Fraction:
    """``s_lam(1, ..., 1)`` with ``d`` ones, by the hook-content formula."""
    lam = as_partition(lam)
    if d < 1:
        raise ValueError("d must be >= 1")
    if len(lam) > d:
        return Fraction(0)
    val = Fraction(1)
    for i, j in lam.cells():
        val *= Fraction(d + j - i, lam.hook(i, j))
    return val


@lru_cache(maxsize=None)
def _weingarten(mu: Partition, d: int) -> Fraction:
    n = mu.n
    total = Fraction(0)
    for lam in partitions(n):
        dim = character(lam, (1,) * n)
        total += Fraction(dim * dim * character(lam, mu)) / schur_at_ones(lam, d)
    return total / math.factorial(n) ** 2


def weingarten(cycle_type, d: int) -> Fraction:
    """Exact ``Wg(sigma, d)`` for a permutation or cycle type with ``n <= d``."""
    mu = as_partition(cycle_type)
    n = mu.n
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in [1, {MAX_N}]")
    if d < n:
        raise ValueError(f"d={d} < n={n}: pseudo-inverse regime is not supported")
    return _weingarten(mu, int(d))


def gram_identity_check(n: int, d: int) -> bool:
    """``sum_tau Wg(sigma^-1 tau) d^{#cycles(tau^-1 pi)} = delta`` in exact arithmetic."""
    perms = all_permutations(n)
    wg = {p: weingarten(p, d) for p in perms}
    gram = {p: d**p.n_cycles for p in perms}
    for sigma in perms:
        si = sigma.inverse()
        for pi in perms:
            s = sum(wg[si * tau] * gram[tau.inverse() * pi] for tau in perms)
            if s != (1 if sigma == pi else 0):
                return False
    return True


def weingarten_table(n: int, d: int) -> dict[str, str]:
    return {str(mu): str(weingarten(mu, d)) for mu in partitions(n)}


def twirl_exact(B: np.ndarray, n: int, d: int) -> np.ndarray:
    """``E_g (g^dag)^{(x)n} B g^{(x)n}`` via ``sum Wg(sigma^-1 tau) Tr(B P_tau^-1) P_sigma``.

    With ``P_sigma P_tau = P_{sigma tau}`` the trace must pair ``B`` with
    ``P_tau^-1``; for ``n = 2`` both readings agree.
    """
    perms = all_permutations(n)
    ops = {p: permutation_operator(p, d) for p in perms}
    traces = {t: np.trace(B @ ops[t.inverse()]) for t in perms}
    out = np.zeros_like(ops[perms[0]])
    for sigma in perms:
        si = sigma.inverse()
        coeff = sum(float(weingarten(si * tau, d)) * traces[tau] for tau in perms)
        out += coeff * ops[sigma]
    return out


@dataclass
class AverageCheck:
    residual: float
    band: float
    samples: int
    within_band: bool

    def to_dict(self):
        return {"residual": self.residual, "band": self.band, "samples": self.samples, "within_band": self.within_band}


def weingarten_average_check(B: np.ndarray, k: int, d: int, samples: int = 100_000, seed=None, batch: int = 20_000) -> AverageCheck:
    """Monte Carlo check of the twirl formula on ``(C^d)^{(x)2k}``.

    The band is three times the standard error of the Frobenius residual.
    """
    n = 2 * k
    if n > MAX_N or d < n:
        raise ValueError(f"need 2k <= {MAX_N} and d >= 2k (got k={k}, d={d})")
    B = np.ascontiguousarray(B, dtype=np.complex128)
    if B.shape != (d**n, d**n):
        raise ValueError(f"B must be {d**n}x{d**n}")
    total = np.zeros_like(B)
    sq = np.zeros(B.shape)
    rng = make_rng(seed)
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        gs = np.ascontiguousarray(haar_unitaries(d, m, rng))
        t, s = _accel.twirl_accumulate(gs, B, n)
        total += t
        sq += s
        done += m
    mean = total / samples
    var = np.maximum(sq / samples - np.abs(mean) ** 2, 0.0)
    residual = float(np.linalg.norm(mean - twirl_exact(B, n, d)))
    band = 3.0 * math.sqrt(float(var.sum()) / samples)
    return AverageCheck(residual, band, samples, residual <= band)


# -- trace invariants -------------------------------------------------------


def tr_sigma(sigma: Permutation, mats: Sequence[np.ndarray]) -> complex:
    """Product over cycles ``(i, sigma(i), ...)`` of ``Tr(A_i A_sigma(i) ...)``."""
    if len(mats) != sigma.n:
        raise ValueError(f"need {sigma.n} matrices, got {len(mats)}")
    shapes = {np.shape(m) for m in mats}
    if len(shapes) != 1 or len(next(iter(shapes))) != 2 or next(iter(shapes))[0] != next(iter(shapes))[1]:
        raise ValueError("matrices must be square and share one dimension")
    val = 1.0 + 0j
    for cyc in sigma.cycles():
        prod = mats[cyc[0]]
        for j in cyc[1:]:
            prod = prod @ mats[j]
        val *= complex(np.trace(prod))
    return val


def power_sum_word_check(eigenvalues, eigenbasis: np.ndarray | None, sigma: Permutation, word: Sequence[int]) -> float:
    """|tr_sigma on ``U`` / ``U^dag`` word - power-sum formula|.

    ``word[i]`` is +1 for ``U`` and -1 for ``U^dag``. Each cycle contributes
    ``p_m = sum z^m`` with ``m`` the signed count of its letters.
    """
    z = np.asarray(eigenvalues, dtype=np.complex128)
    V = np.eye(z.size) if eigenbasis is None else eigenbasis
    U = (V * z) @ V.conj().T
    mats = [U if w > 0 else U.conj().T for w in word]
    direct = tr_sigma(sigma, mats)
    formula = 1.0 + 0j
    for cyc in sigma.cycles():
        m = sum(word[j] for j in cyc)
        formula *= complex(np.sum(z**m))
    return abs(direct - formula)


def _pair_permutation(sigma: Permutation, tau: Permutation) -> Permutation:
    """``R_sigma (x) R_tau`` as one permutation of the slots ``A1 B1 ... Ak Bk``."""
    k = sigma.n
    imgs = [0] * (2 * k)
    for i in range(k):
        imgs[2 * i] = 2 * sigma(i)
        imgs[2 * i + 1] = 2 * tau(i) + 1
    return Permutation(tuple(imgs))


def lu_invariant(sigma: Permutation, tau: Permutation, X: np.ndarray, k: int) -> complex:
    """``Tr((R_sigma (x) R_tau) X^{(x)k})`` for ``X`` on ``C^d (x) C^d``."""
    if sigma.n != k or tau.n != k:
        raise ValueError("sigma and tau must both act on k copies")
    X = np.asarray(X, dtype=np.complex128)
    D = X.shape[0]
    d = math.isqrt(D)
    if d * d != D or X.shape != (D, D):
        raise ValueError("X must act on C^d (x) C^d")
    if D**k > 4096:
        raise ValueError(f"(d^2)^k = {D**k} exceeds the dense size limit")
    N = X
    for _ in range(k - 1):
        N = np.kron(N, X)
    g = permutation_gather(_pair_permutation(sigma, tau), d)
    # Tr(R N) = sum_x N[g(x), x] when (R v)[x] = v[g(x)]
    return complex(N[g, np.arange(g.size)].sum())


def pure_projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi).reshape(-1)
    return np.outer(psi, psi.conj())


def spectrum_dependence_audit(sigma: Permutation, tau: Permutation, k: int, d: int, trials: int = 20, seed=None) -> dict:
    """Check that the LU invariant of a pure state depends only on its Schmidt spectrum."""
    max_rot = 0.0
    max_same = 0.0
    for rng in split_rngs(seed, trials):
        psi = haar_state(d * d, rng).amplitudes
        base = lu_invariant(sigma, tau, pure_projector(psi), k)
        g, h = haar_unitary(d, rng), haar_unitary(d, rng)
        rot = lu_invariant(sigma, tau, pure_projector(np.kron(g, h) @ psi), k)
        max_rot = max(max_rot, abs(base - rot))
        lam = schmidt_spectrum(haar_state(d * d, rng, (d, d)), d, d)
        a = schmidt_state(lam, d, d, haar_unitary(d, rng), haar_unitary(d, rng)).amplitudes
        b = schmidt_state(lam, d, d, haar_unitary(d, rng), haar_unitary(d, rng)).amplitudes
        diff = lu_invariant(sigma, tau, pure_projector(a), k) - lu_invariant(sigma, tau, pure_projector(b), k)
        max_same = max(max_same, abs(diff))
    return {
        "sigma": list(sigma.images), "tau": list(tau.images), "k": k, "d": d, "trials": trials,
        "max_rotation_deviation": max_rot, "max_equal_spectrum_deviation": max_same,
        "passed": bool(max_rot <= 1e-9 and max_same <= 1e-9),
    }


def product_test_from_invariants(psi: np.ndarray, k: int) -> complex:
    """``(1/k!^2) sum_{sigma,tau}`` of LU invariants of ``|psi><psi|``."""
    X = pure_projector(psi)
    perms = all_permutations(k)
    total = sum(lu_invariant(s, t, X, k) for s in perms for t in perms)
    return total / math.factorial(k) ** 2


def character_table_json(ns: Iterable[int] = range(1, MAX_N + 1)) -> str:
    return json.dumps({str(n): json.loads(CharacterTable.build(n).to_json()) for n in ns}, sort_keys=True)
