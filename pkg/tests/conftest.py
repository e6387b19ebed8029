import numpy as np
import pytest

from ap_equivalence.config import get_settings
from ap_equivalence.data_access.corpus import load_corpus
from ap_equivalence.domain.models.exponent import SymbolTable


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Every test starts from default settings and writes no CSV files unless it asks to."""
    monkeypatch.delenv("APEQ_CSV_DIR", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def unit_table() -> SymbolTable:
    return SymbolTable()


@pytest.fixture
def l2_table() -> SymbolTable:
    return SymbolTable.prime_logs([2])


@pytest.fixture
def prime_table() -> SymbolTable:
    return SymbolTable.prime_logs([2, 3, 5, 7])


@pytest.fixture
def corpus():
    return load_corpus()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
