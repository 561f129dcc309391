import warnings

import numpy as np
import pytest

from ..repositories.memory import InMemoryArtifactRepository, InMemoryParameterRepository
from ..base_settings import create_reposet


def pytest_configure(config):
    # Warnings are errors; filters added later take precedence
    warnings.filterwarnings("error")
    # Third-party import-time deprecations are not ours to fix
    for module in ("numpy.*", "scipy.*", "pandas.*", "pydantic.*", "dateutil.*", "dotenv.*"):
        warnings.filterwarnings("ignore", category=DeprecationWarning, module=module)
        warnings.filterwarnings("ignore", category=PendingDeprecationWarning, module=module)


@pytest.fixture
def rng():
    """A fixed random stream per test"""
    return np.random.default_rng(20240611)


@pytest.fixture
def memory_reposet():
    """Repositories that keep everything in memory"""
    return create_reposet(
        artifact_repository=InMemoryArtifactRepository(),
        parameter_repository=InMemoryParameterRepository(),
    )
