import numpy as np
import pytest

from src.core import criteria


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _isolated_line_params(tmp_path, monkeypatch):
    """Cada teste vê um arquivo de parâmetros próprio e um cache limpo."""
    monkeypatch.setattr("config.LINE_PARAMS_FILE", tmp_path / "line_params.json")
    criteria.clear_params_cache()
    yield
    criteria.clear_params_cache()
