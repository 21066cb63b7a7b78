import logging
import os
import sys
from typing import Iterable

import pytest

# Add src directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from rng_core import RandomStream

# ==============================================================================
# PYTEST CONFIGURATION & HOOKS
# ==============================================================================

def pytest_configure(config):
    """Configure pytest settings and markers."""
    config.addinivalue_line("markers", "unit: Fast deterministic tests with no sampling noise.")
    config.addinivalue_line("markers", "statistical: Seeded Monte Carlo and goodness-of-fit tests.")
    config.addinivalue_line("markers", "integration: CLI and service tests across several modules.")

@pytest.fixture(scope="session", autouse=True)
def setup_test_environment(pytestconfig):
    """Set up test environment with logging configuration."""
    # Use pytest's log_cli_level if available, otherwise default to INFO
    log_level = pytestconfig.getoption("log_cli_level") or "INFO"
    logging.basicConfig(
        level=log_level.upper(),
        format="[%(asctime)s] [%(levelname)s] [%(name)s:%(lineno)d] - %(message)s",
        stream=sys.stdout,
        force=True,
    )
    logging.info(f"Test logging configured with level: {log_level.upper()}")
    yield

# ==============================================================================
# TEST DOUBLES
# ==============================================================================

class ScriptedStream(RandomStream):
    """A RandomStream that replays fixed uniforms, for forcing particular branches."""

    def __init__(self, uniforms: Iterable[float]):
        super().__init__(0)
        self._script = list(uniforms)

    def next_uniform(self) -> float:
        if self.position >= len(self._script):
            raise AssertionError(f"scripted stream exhausted after {self.position} uniforms")
        u = self._script[self.position]
        self.position += 1
        return u

# ==============================================================================
# FIXTURES
# ==============================================================================

@pytest.fixture
def scripted_stream():
    """Factory fixture: scripted_stream([0.3, 0.7, ...])."""
    return ScriptedStream

@pytest.fixture
def stream() -> RandomStream:
    """A fresh seeded stream for each test."""
    return RandomStream(20240715)

@pytest.fixture(scope="session")
def suite_dir() -> str:
    return os.path.join(os.path.dirname(__file__), '..', 'src', 'suites')
