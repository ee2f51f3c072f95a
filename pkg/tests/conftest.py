from functools import lru_cache

import pytest

from j1j2discord import ChainSpec, assemble_low_spectrum


@lru_cache(maxsize=64)
def spectrum(n, j2, n_levels=3):
    return assemble_low_spectrum(ChainSpec(n, j2), n_levels=n_levels)


@pytest.fixture
def low_spectrum():
    return spectrum
