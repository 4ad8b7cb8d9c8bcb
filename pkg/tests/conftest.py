import numpy as np
import pytest

from rch_lab.spectral import Field, TorusGrid

_ACCEPTANCE = []


def band_limited(grid: TorusGrid, k_max: int, rng, amplitude=1.0, zero_mean=False) -> Field:
    """Random real field with modes 0..k_max only."""
    spec = np.zeros(grid.n // 2 + 1, dtype=complex)
    k = np.arange(0 if not zero_mean else 1, k_max + 1)
    spec[k] = (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)) * grid.n / 2
    spec[0] = spec[0].real
    u = Field.from_spectrum(grid, spec)
    return Field(grid, amplitude * u.values / max(u.max_abs(), 1e-300))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
