import mpmath
import pytest

from src.PSICM.certify.registry import registry
from src.PSICM.certify.verify import load_catalog
from src.PSICM.core.kernels import QuadratureConfig

mpmath.mp.dps = 40


@pytest.fixture
def quad() -> QuadratureConfig:
    return QuadratureConfig()


@pytest.fixture
def catalog():
    """The full bound catalog, restored after tests that clear the registry."""
    bounds = load_catalog()
    yield bounds
    registry.clear_registry()
    load_catalog()


def rel_err(value: float, reference) -> float:
    reference = float(reference)
    return abs(value - reference) / max(1.0, abs(reference))
