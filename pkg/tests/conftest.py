"""
Pytest configuration and shared fixtures for TactileSensePro tests
"""
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from scripts.calibration_utils import fit_polynomial
from scripts.config_utils import ToolkitConfig
from scripts.pipeline_utils import collect_protocol_dataset
from scripts.sensor_utils import LoadScenario, save_scenario

DATASETS = Path(__file__).resolve().parent.parent / "datasets"


@pytest.fixture(scope="session")
def datasets_dir():
    """Directory holding the bundled config and scenario files"""
    return DATASETS


@pytest.fixture(scope="session")
def default_config():
    """Toolkit configuration with every published default"""
    return ToolkitConfig()


@pytest.fixture(scope="session")
def noiseless_config():
    """Default configuration with the amplifier noise switched off"""
    cfg = ToolkitConfig()
    return replace(cfg, bridge=replace(cfg.bridge, noise_fraction=0.0))


@pytest.fixture(scope="session")
def protocol_dataset(default_config):
    """The 100-sample weight protocol replayed through the simulated chain"""
    return collect_protocol_dataset(default_config, seed=0)


@pytest.fixture(scope="session")
def chain_model(protocol_dataset):
    """Order-1 volts → newtons model calibrated on the simulated protocol"""
    return fit_polynomial(protocol_dataset.signals, protocol_dataset.forces, order=1)


@pytest.fixture
def model_rows():
    """Noise-free samples on f = 1 + 2v"""
    v = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    return v, 1.0 + 2.0 * v


@pytest.fixture
def contact_scenario():
    """One press per quadrant in order 1→4, the third one an overload"""
    return LoadScenario.from_rows(
        [
            (0.0, 0.0, ()),
            (1.0, 0.5, {1}),
            (2.0, 0.0, ()),
            (2.5, 0.6, {2}),
            (3.5, 0.0, ()),
            (4.5, 1.4, {3}),
            (5.5, 0.0, ()),
            (6.5, 0.7, {4}),
            (7.5, 0.0, ()),
            (8.5, 0.0, ()),
        ]
    )


@pytest.fixture
def accuracy_scenario():
    """20, 50 and 100 gw pressed on quadrant 1 with rests between presses"""
    return LoadScenario.from_rows(
        [
            (0.0, 0.0, ()),
            (1.0, 0.196, {1}),
            (4.0, 0.0, ()),
            (5.0, 0.49, {1}),
            (8.0, 0.0, ()),
            (9.0, 0.98, {1}),
            (12.0, 0.0, ()),
            (13.0, 0.0, ()),
        ]
    )


@pytest.fixture
def scenario_file(tmp_path, contact_scenario):
    """The contact scenario written as CSV"""
    path = tmp_path / "scenario.csv"
    save_scenario(contact_scenario, path)
    return path


def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests"
    )
