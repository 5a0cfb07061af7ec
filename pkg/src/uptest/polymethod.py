"""Falsification audits for the polynomial structure of query testers.

A tester handle wraps a circuit that touches the oracle only through its
query interface. The audits check consequences of that structure: exact
acceptance depends on the spectrum only, dimension sweeps over nested
reflections are low-degree polynomials, and averages over random diagonal
instances are symmetric under ``z -> conj(z)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import coordinate_subspace, haar_unitary, max_entangled, split_rngs, split_seeds
from .oracles import SpectrumOracle, UnitaryOracle, reflection_from_subspace, sample_recurrence_instance
from .testers import VerifierReport, _membership_branch, recurrence_tester, sample_report


@dataclass(frozen=True)
class TesterHandle:
    """A named tester with a fixed query budget ``T`` (``None`` if variable)."""

    name: str
    queries: int | None
    run_fn: Callable[[UnitaryOracle, object], VerifierReport]
    invariant: bool = True

    def run(self, o: UnitaryOracle, seed=None) -> VerifierReport:
        return self.run_fn(o, seed)


def _report(name: str, p: float, o: UnitaryOracle, before: int) -> VerifierReport:
    return VerifierReport(name, p, o.query_counter - before)


def _membership_entangled(o, seed=None):
    d = o.dim
    before = o.query_counter
    phi = max_entangled(d).amplitudes.reshape(d, d)
    branch = _membership_branch(o, phi)
    return _report("membership_entangled", float(np.vdot(branch, branch).real), o, before)


def _uniform_overlap(o, seed=None):
    # Hadamard test on the uniform superposition, accept on ancilla 0
    d = o.dim
    before = o.query_counter
    u = np.full((d, 1), 1 / math.sqrt(d), dtype=np.complex128)
    out = o.controlled(np.stack([u, u]) / math.sqrt(2))
    zero = (out[0] + out[1]) / math.sqrt(2)
    return _report("uniform_overlap", float(np.vdot(zero, zero).real), o, before)


def _grover_echo(o, seed=None):
    # |<Phi| (U x I) R (U x I) |Phi>|^2 with R the reflection about Phi
    d = o.dim
    before = o.query_counter
    phi = max_entangled(d).amplitudes.reshape(d, d)
    x = o.apply(phi)
    x = 2 * np.vdot(phi, x) * phi - x
    x = o.apply(x)
    return _report("grover_echo", abs(np.vdot(phi, x)) ** 2, o, before)


def coin_tester(c: float = 0.5) -> TesterHandle:
    if not 0 <= c <= 1:
        raise ValueError("coin bias must lie in [0, 1]")
    return TesterHandle(f"coin[{c}]", 0, lambda o, seed=None: VerifierReport("coin", c, 0))


MEMBERSHIP = TesterHandle("membership_entangled", 1, _membership_entangled)
UNIFORM_OVERLAP = TesterHandle("uniform_overlap", 1, _uniform_overlap, invariant=False)
GROVER_ECHO = TesterHandle("grover_echo", 2, _grover_echo)


def recurrence_handle(t: int = 2, epsilon: float = 0.5, **kwargs) -> TesterHandle:
    return TesterHandle(
        f"recurrence[t={t},eps={epsilon}]", None,
        lambda o, seed=None: recurrence_tester(o, t, epsilon, seed=seed, **kwargs),
    )


BUILTIN_TESTERS = {h.name: h for h in (MEMBERSHIP, UNIFORM_OVERLAP, GROVER_ECHO, coin_tester(0.5))}


# -- audits -----------------------------------------------------------------


def conjugation_invariance_audit(tester: TesterHandle, spectrum, trials: int = 20, seed=None, exact: bool = True, samples: int = 100) -> dict:
    """Run ``tester`` on ``V diag(spectrum) V^dag`` for independent Haar ``V``.

    Exact mode compares exact acceptance probabilities (spread must be at most
    1e-9). Sampled mode compares per-conjugation frequencies over ``samples``
    seeded runs against their pooled mean with a 3-sigma band.
    """
    z = np.asarray(spectrum, dtype=np.complex128)
    probs, errs = [], []
    for i, child in enumerate(split_seeds(seed, trials)):
        rng = np.random.default_rng(child)
        V = haar_unitary(z.size, rng)
        o = SpectrumOracle(z, V)
        if exact:
            probs.append(tester.run(o, int(rng.integers(2**32))).accept_probability)
            errs.append(0.0)
            continue
        if tester.queries is None:
            runs = [tester.run(o, int(s)) for s in rng.integers(2**32, size=samples)]
            est = sum(r.decision == "accept" for r in runs) / samples
        else:
            est = sample_report(tester.run(o), samples, rng).accept_probability
        probs.append(est)
        errs.append(math.sqrt(max(est * (1 - est), 1.0 / samples) / samples))
    probs_a = np.asarray(probs)
    spread = float(probs_a.max() - probs_a.min())
    if exact:
        passed = spread <= 1e-9
    else:
        mean = float(probs_a.mean())
        passed = bool(np.all(np.abs(probs_a - mean) <= 3 * np.asarray(errs) + 1e-12))
    return {
        "tester": tester.name, "mode": "exact" if exact else "sampled", "trials": trials,
        "spectrum": [[float(c.real), float(c.imag)] for c in z],
        "probabilities": probs_a.tolist(), "spread": spread, "passed": bool(passed),
    }


def dimension_polynomial_fit(tester: TesterHandle, d: int, degree: int | None = None) -> dict:
    """Fit exact acceptance over nested coordinate reflections ``k = 0..d``.

    The default degree is ``2T`` for the tester's query budget ``T``.
    """
    if tester.queries is None and degree is None:
        raise ValueError("tester has no fixed query budget; pass degree explicitly")
    deg = 2 * tester.queries if degree is None else int(degree)
    ks = np.arange(d + 1)
    ps, used = [], []
    for k in ks:
        o = reflection_from_subspace(coordinate_subspace(d, int(k)))
        rep = tester.run(o)
        ps.append(rep.accept_probability)
        used.append(rep.queries_used)
    ps_a = np.asarray(ps)
    fit = np.polynomial.Polynomial.fit(ks, ps_a, deg=min(deg, d), domain=[0, d], window=[-1, 1])
    resid = float(np.max(np.abs(fit(ks) - ps_a)))
    return {
        "tester": tester.name, "d": d, "degree": deg,
        "k": ks.tolist(), "p": ps_a.tolist(),
        "coefficients": fit.convert().coef.tolist(),
        "max_residual": resid,
        "queries_match_budget": bool(tester.queries is None or all(q == tester.queries for q in used)),
        "passed": bool(resid <= 1e-8),
    }


DEFAULT_P_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_Z_ANGLES = (-2 * math.pi / 3, -math.pi / 2, math.pi / 2, 2 * math.pi / 3, math.pi)


def recurrence_surface(tester: TesterHandle, p_grid: Sequence[float] = DEFAULT_P_GRID, z_grid: Sequence[complex] | None = None, trials: int = 100, seed=None, d: int = 4, exact: bool = True) -> dict:
    """Estimate ``r(p, z) = E_{U ~ D(p, z)} accept(U)`` on a grid.

    Every cell draws its instances from its own split seed. In exact mode the
    per-instance acceptance is the exact probability; in sampled mode it is a
    single seeded run's decision.
    """
    if z_grid is None:
        z_grid = [complex(np.exp(1j * a)) for a in DEFAULT_Z_ANGLES]
    cells = []
    seeds = split_seeds(seed, len(p_grid) * len(z_grid))
    for (p, z), child in zip([(p, z) for p in p_grid for z in z_grid], seeds):
        vals = []
        for inst_seed in child.spawn(trials):
            rng = np.random.default_rng(inst_seed)
            o = sample_recurrence_instance(d, p, z, rng)
            rep = tester.run(o, int(rng.integers(2**32)))
            vals.append(rep.accept_probability if exact else float(rep.decision == "accept"))
        v = np.asarray(vals)
        cells.append({
            "p": float(p), "z": [float(np.real(z)), float(np.imag(z))],
            "r": float(v.mean()), "stderr": float(v.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
        })
    checks = _conjugate_symmetry(cells)
    return {
        "tester": tester.name, "d": d, "trials": trials, "mode": "exact" if exact else "sampled",
        "cells": cells, "symmetry": checks, "passed": all(c["passed"] for c in checks),
    }


def _conjugate_symmetry(cells: list[dict]) -> list[dict]:
    out = []
    key = {(c["p"], round(c["z"][0], 12), round(c["z"][1], 12)): c for c in cells}
    for c in cells:
        if c["z"][1] <= 0:
            continue
        partner = key.get((c["p"], round(c["z"][0], 12), round(-c["z"][1], 12)))
        if partner is None:
            continue
        diff = abs(c["r"] - partner["r"])
        band = 3 * math.hypot(c["stderr"], partner["stderr"]) + 1e-9
        out.append({"p": c["p"], "z": c["z"], "difference": diff, "band": band, "passed": bool(diff <= band)})
    return out


def surface_csv(surface: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "z_re", "z_im", "r", "stderr"])
    for c in surface["cells"]:
        w.writerow([repr(c["p"]), repr(c["z"][0]), repr(c["z"][1]), repr(c["r"]), repr(c["stderr"])])
    return buf.getvalue()


def dimension_table_csv(fit: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "p"])
    for k, p in zip(fit["k"], fit["p"]):
        w.writerow([k, repr(p)])
    return buf.getvalue()


def to_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True)
