import numpy as np
import pytest

from airesample.dataset import Dataset, GroupConfig
from airesample.synthgen import generate_pool, paper_pool_config

ACCEPTANCE_LINES = []


def make_dataset(groups, outcomes, features=None, ids=None):
    n = len(groups)
    if features is None:
        features = np.arange(n, dtype=float).reshape(-1, 1)
    if ids is None:
        ids = [f"r{i}" for i in range(n)]
    return Dataset(np.asarray(features, dtype=float), np.asarray(outcomes), np.asarray(groups, dtype=object), ids)


def counts_dataset(spec, p=2, seed=0):
    """Dataset with ``spec = {group: (n, passes)}``; features are seeded noise."""
    rng = np.random.default_rng(seed)
    groups, outcomes = [], []
    for g, (n, passes) in spec.items():
        groups += [g] * n
        outcomes += [1] * passes + [0] * (n - passes)
    X = rng.normal(size=(len(groups), p))
    return make_dataset(groups, outcomes, X)


@pytest.fixture(scope="session")
def paper_pool():
    return generate_pool(paper_pool_config(n_total=2501, seed=11))


@pytest.fixture
def group_cfg():
    return GroupConfig()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
