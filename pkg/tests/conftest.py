import numpy as np
import pytest

from src.controllers import ControllerConfig, PiGains
from src.plant import BesParams, GeneratorParams, PlantConfig
from src.signals import AceSeries, SynthConfig, save_ace_csv, synth_ace


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help="run slow acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def plant() -> PlantConfig:
    """200 MW / 15 min storage next to 400 MW of conventional regulation."""
    return PlantConfig(generator=GeneratorParams(capacity_mw=400.0),
                       bes=BesParams.from_rating(200.0, 15.0, 0.85), dt_s=2.0)


@pytest.fixture
def controller_cfg(plant) -> ControllerConfig:
    return ControllerConfig(rega_gains=PiGains(0.0, 0.4), regd_gains=PiGains(1.0, 0.8), ca_mw=400.0, cd_mw=200.0,
                            soc_ref_mwh=plant.soc_ref_mwh)


@pytest.fixture
def synthetic_ace() -> AceSeries:
    return synth_ace(SynthConfig(seed=3, horizon_s=3600.0))


@pytest.fixture
def ace_file(tmp_path, synthetic_ace):
    path = tmp_path / 'ace.csv'
    save_ace_csv(synthetic_ace, path)
    return path


def constant_ace(value: float, n: int, dt_s: float = 2.0) -> AceSeries:
    return AceSeries(np.full(n, float(value)), dt_s=dt_s)
