"""Pytest configuration and shared fixtures for pqground tests."""

import shutil
import tempfile
from collections.abc import Generator
from pathlib import Path

import numpy as np
import pytest
import structlog

from pqground.problem import Problem, build_problem
from pqground.radial import Profile, RadialGrid
from pqground.shooting import GroundState, multi_start_ground_state
from pqground.utils import load_config


@pytest.fixture(autouse=True)
def reset_logging() -> Generator[None, None, None]:
    """Drop any structlog configuration a test installed."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test operations.

    Yields:
        Path to the temporary directory
    """
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def presets_path() -> Path:
    """Get the path to the bundled presets."""
    return Path(__file__).parent.parent / "src" / "pqground" / "presets"


def gaussian(dim: int = 3, r_max: float = 8.0, resolution: int = 2048) -> Profile:
    """u(r) = exp(-r^2) on a graded grid."""
    grid = RadialGrid.build(dim, r_max=r_max, resolution=resolution)
    return Profile.from_functions(
        grid,
        lambda r: np.exp(-(r**2)),
        lambda r: -2.0 * r * np.exp(-(r**2)),
        exponents=(2.0, 4.0),
    )


@pytest.fixture
def gaussian_profile() -> Profile:
    """exp(-r^2) in R^3 with gradient exponents 2 and 4."""
    return gaussian()


@pytest.fixture(scope="session")
def classical_problem() -> Problem:
    """Single Laplacian with g(s) = -s + s^3 in R^3."""
    return build_problem(load_config("classical_soliton"))


@pytest.fixture(scope="session")
def classical_state(classical_problem: Problem) -> GroundState:
    """Certified ground state of the classical problem, solved once per session."""
    cfg = load_config("classical_soliton")
    return multi_start_ground_state(
        classical_problem.spec, classical_problem.op, cfg.shooting, cfg.tolerances
    )


@pytest.fixture(scope="session")
def chain_problem() -> Problem:
    """Born-Infeld chain k=2, beta=1, N=3 with g(s) = s^6."""
    return build_problem(load_config("bi_k2_alpha7"))


@pytest.fixture(scope="session")
def chain_state(chain_problem: Problem) -> GroundState:
    """Certified ground state of the k=2 chain, solved once per session."""
    cfg = load_config("bi_k2_alpha7")
    return multi_start_ground_state(chain_problem.spec, chain_problem.op, cfg.shooting, cfg.tolerances)
