"""Shared dataset builders and the acceptance-summary reporting hook.

Every test that needs random data builds it through the helpers here so
seeds stay visible at the call site.  The hook at the bottom collects
the outcome of each test named ``test_criterion_<n>`` and prints one
ACCEPTANCE line per criterion at the end of the run.
"""

from __future__ import annotations

import re

import numpy as np

from pairrank import Dataset

_ACCEPTANCE_LABELS = {
    1: "moments oracle equivalence",
    2: "solver correctness",
    3: "auc equivalence",
    4: "subsampled-vs-batch convergence",
    5: "wall-clock speedup",
    6: "skew degradation",
    7: "real-data sanity",
    8: "bound conservativeness",
    9: "bound-formula fidelity",
    10: "determinism",
}

_acceptance_results: dict[int, str] = {}


def random_dataset(
    rng: np.random.Generator,
    dim: int,
    n1: int,
    n0: int,
    scale: float = 1.0,
) -> Dataset:
    """Gaussian-featured dataset with both classes non-empty."""
    return Dataset.from_arrays(
        rng.standard_normal((n1, dim)) * scale,
        rng.standard_normal((n0, dim)) * scale,
    )


def integer_dataset(
    rng: np.random.Generator,
    dim: int,
    n1: int,
    n0: int,
    low: int = -2,
    high: int = 3,
) -> Dataset:
    """Small-integer features; with integer weights the scores tie often."""
    return Dataset.from_arrays(
        rng.integers(low, high, size=(n1, dim)).astype(float),
        rng.integers(low, high, size=(n0, dim)).astype(float),
    )


def _criterion_number(nodeid: str) -> int | None:
    match = re.search(r"test_criterion_(\d+)", nodeid)
    return int(match.group(1)) if match else None


def pytest_runtest_logreport(report):
    number = _criterion_number(report.nodeid)
    if number is None:
        return
    if report.when == "setup":
        if report.skipped:
            _acceptance_results[number] = "SKIP"
        elif report.failed:
            _acceptance_results[number] = "FAIL"
    elif report.when == "call":
        if report.skipped:
            _acceptance_results[number] = "SKIP"
        else:
            _acceptance_results[number] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        verdict = _acceptance_results[number]
        label = _ACCEPTANCE_LABELS.get(number, "")
        terminalreporter.write_line(
            f"ACCEPTANCE: criterion {number} {verdict} ({label})"
        )
