"""Shared fixtures."""

import time

import numpy as np
import pytest

from bglfrps.data import FOOTBALL_SCALE, DatasetSpec, load_dataset
from bglfrps.fitting import FitReport, em_fit
from bglfrps.reference import reference_fit
from bglfrps.typing_ import Config


@pytest.fixture(autouse=True)
def bglfrps_home(tmp_path, monkeypatch):
    """Keep config files and run logs out of the real home directory."""
    home = tmp_path / "bglfrps-home"
    monkeypatch.setenv("BGLFRPS_HOME", str(home))
    names = ("TOL", "MAX_ITER", "INNER_MAX_ITER", "POLISH", "POLISH_MAX_ITER")
    for name in names + ("TIE_TOL", "SEED", "LOG_RUNS"):
        monkeypatch.delenv(f"BGLFRPS_{name}", raising=False)
    return home


@pytest.fixture
def rng():
    return np.random.default_rng(20140501)


@pytest.fixture
def football():
    """The scoring-time pairs in minutes / 100."""
    return load_dataset(DatasetSpec(scale=FOOTBALL_SCALE))


@pytest.fixture
def fit_report():
    """A finished BGLFRG fit at the published estimates."""
    ref = reference_fit("BGLFRG")
    return FitReport(
        mle=ref.params,
        loglik=ref.loglik,
        iterations=12,
        converged=True,
        loglik_trace=[30.0, 37.5, ref.loglik],
        m0=24,
        m1=16,
        m2=2,
        family=ref.family.spec,
        n_params=6,
        clamped=["gamma"],
    )


@pytest.fixture(scope="session")
def fitted_model():
    """Fits to the scaled scoring times, once per model; returns (report, seconds)."""
    sample = load_dataset(DatasetSpec(scale=FOOTBALL_SCALE))
    cache = {}

    def fit(model):
        if model not in cache:
            family = reference_fit(model).family
            start = time.perf_counter()
            report = em_fit(sample, family, config=Config(log_runs=False))
            cache[model] = (report, time.perf_counter() - start)
        return cache[model]

    return fit
