"""
Acceptance gate: every criterion at its published size and tolerance.

One PASS/FAIL line per criterion is printed at the end of the session.
"""

import pytest

from freesep.experiments import SUITES

RESULTS = {}

BUDGETS = {
    "delta-identity": 10,
    "cut-vertex-lemma": 120,
    "lemma-qmsep0": 120,
    "quasi-flat": 60,
    "section-identity": 30,
    "homogenization-limit": 30,
    "norm-sandwich": 300,
    "conjugation-invariance": 30,
    "whitehead-figure": 1,
}


@pytest.mark.parametrize("name", list(SUITES))
def test_criterion(name):
    result = SUITES[name]()
    RESULTS[name] = result
    assert result.runtime < BUDGETS[name], f"{name} took {result.runtime:.1f}s"
    assert result.passed, result.measured
