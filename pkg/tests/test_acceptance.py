"""Acceptance suite: one experiment per criterion, at the stated tolerances.

Each test prints a single ``PASS``/``FAIL`` line (bypassing output capture)
and then asserts the experiment's checks and its runtime budget.
"""

from __future__ import annotations

import time

import pytest

from uptest.experiments import REGISTRY, run

SEED = 7

# criterion -> (experiment, runtime budget in seconds)
CRITERIA = {
    1: ("product-test-exactness", 60),
    2: ("product-test-bounds", 60),
    3: ("counterexample", 30),
    4: ("fooling-basis", 10),
    5: ("weingarten", 300),
    6: ("lu-invariants", 60),
    7: ("recurrence-tester", 300),
    8: ("dimension-estimator", 300),
    9: ("polymethod-audits", 600),
    10: ("entanglement-functionals", 30),
    11: ("wrapped-verifier", 60),
}


def test_every_criterion_has_one_experiment():
    mapped = sorted(e.criterion for e in REGISTRY.values() if e.criterion is not None)
    assert mapped == sorted(CRITERIA)
    for crit, (name, _) in CRITERIA.items():
        assert REGISTRY[name].criterion == crit


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion, capsys):
    name, budget = CRITERIA[criterion]
    t0 = time.perf_counter()
    out = run(name, {}, seed=SEED)
    elapsed = time.perf_counter() - t0
    payload = out["payload"]
    failed = [c["name"] for c in payload["checks"] if not c["passed"]]
    ok = payload["passed"] and elapsed < budget
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        extra = f" failed checks: {failed}" if failed else ""
        print(f"\n[acceptance] criterion {criterion:>2} {status} {name} ({elapsed:.1f}s / {budget}s){extra}")
    assert not failed
    assert elapsed < budget
