"""Shared fixtures: parameter sets, families, and one run of each study.

Study runs are session-scoped so the experiment tests and the acceptance
gate share a single execution of each (the drivers are deterministic, so
sharing loses nothing).
"""

from __future__ import annotations

import pytest

from twistvar import (
    ExperimentSpec,
    PerturbationParams,
    make_h0,
    make_hn,
    run_approximation_study,
    run_counting_study,
    run_lemma_herm_check,
    run_lower_bound_study,
    run_mcor_study,
    run_spacing_study,
    run_theorem_mr,
)

A1K2 = dict(a=1.0, k=2, delta=0.05)


@pytest.fixture(scope="session")
def h0():
    return make_h0()


@pytest.fixture(scope="session")
def h8():
    return make_hn(PerturbationParams(n=8, **A1K2))


@pytest.fixture(scope="session")
def hbar8():
    return make_hn(PerturbationParams(n=8, **A1K2), include_bump=False)


@pytest.fixture(scope="session")
def spacing_a1():
    spec = ExperimentSpec(
        name="spacing", n_range=(16, 32, 64, 128),
        params=PerturbationParams(n=16, **A1K2),
    )
    return run_spacing_study(spec)


@pytest.fixture(scope="session")
def spacing_a2():
    spec = ExperimentSpec(
        name="spacing", n_range=(16, 32, 64, 128),
        params=PerturbationParams(n=16, a=2.0, k=2, delta=0.05),
    )
    return run_spacing_study(spec)


@pytest.fixture(scope="session")
def lowerbound_result():
    spec = ExperimentSpec(
        name="lowerbound", n_range=(8, 16, 32),
        params=PerturbationParams(n=8, **A1K2),
    )
    return run_lower_bound_study(spec)


@pytest.fixture(scope="session")
def approx_result():
    spec = ExperimentSpec(
        name="approx", n_range=(8, 16, 32),
        params=PerturbationParams(n=8, **A1K2), omega_rule="noble",
    )
    return run_approximation_study(spec)


@pytest.fixture(scope="session")
def counting_result():
    spec = ExperimentSpec(
        name="counting", n_range=(16, 32, 64),
        params=PerturbationParams(n=16, **A1K2),
    )
    return run_counting_study(spec)


@pytest.fixture(scope="session")
def mr16_result():
    spec = ExperimentSpec(
        name="theorem-mr", n_range=(16,),
        params=PerturbationParams(n=16, **A1K2), omega_rule="golden-deep",
    )
    return run_theorem_mr(spec)


@pytest.fixture(scope="session")
def mcor_r3():
    spec = ExperimentSpec(
        name="mcor", n_range=(8, 16, 32, 64),
        params=PerturbationParams(n=8, a=1.9, k=2, delta=0.05), order=3.0,
    )
    return run_mcor_study(spec)


@pytest.fixture(scope="session")
def herm_result():
    spec = ExperimentSpec(
        name="herm", n_range=(1, 2, 4),
        params=PerturbationParams(n=8, **A1K2),
    )
    return run_lemma_herm_check(spec)
