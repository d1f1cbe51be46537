"""
Unit tests for pipeline_utils module
"""
from dataclasses import replace

import numpy as np
import pytest

from scripts.calibration_utils import PolynomialModel
from scripts.exceptions import ConfigurationError, DataError, UsageError
from scripts.pipeline_utils import (
    build_estimator_config,
    collect_protocol_dataset,
    element_signal_thresholds,
    find_element_thresholds,
    sample_times,
    sense_channels,
    simulate_stream,
    stream_to_signal,
)
from scripts.sensor_utils import LoadScenario, apply_load, fabric_delta_r
from scripts.units_utils import gw_to_newtons


def _rests(config):
    return [e.rest_resistance for e in config.elements]


class TestSenseChannels:
    """Tests for sense_channels function"""

    def test_no_load(self, default_config):
        volts, codes = sense_channels(default_config, 0.0, _rests(default_config))
        np.testing.assert_array_equal(volts, np.zeros(5))
        np.testing.assert_array_equal(codes, np.zeros(5))

    def test_fifty_gram_weight(self, noiseless_config):
        dr = fabric_delta_r(noiseless_config.fabric, gw_to_newtons(50))
        _, codes = sense_channels(noiseless_config, dr, _rests(noiseless_config))
        assert codes[0] == 111

    def test_fifty_gram_weight_on_quadrant_two(self, noiseless_config):
        scenario = LoadScenario.from_rows([(0.0, gw_to_newtons(50), {2})])
        dr, rs = apply_load(scenario, noiseless_config.fabric, noiseless_config.elements, 0.0)
        _, codes = sense_channels(noiseless_config, dr, rs)
        signals = stream_to_signal(noiseless_config, codes)
        thresholds = element_signal_thresholds(noiseless_config)
        assert codes[0] == 111
        assert signals[2] >= thresholds[1]
        assert all(signals[i + 1] < thresholds[i] for i in (0, 2, 3))

    def test_triggered_element(self, noiseless_config):
        rests = _rests(noiseless_config)
        rests[1] *= 1.05
        volts, codes = sense_channels(noiseless_config, 0.0, rests)
        assert volts[2] == pytest.approx(2.522, abs=1e-3)
        assert codes.tolist() == [0, 0, 129, 0, 0]

    def test_open_element_hits_rail(self, noiseless_config):
        rests = _rests(noiseless_config)
        rests[2] *= 100
        _, codes = sense_channels(noiseless_config, 0.0, rests)
        assert codes[3] == 255


class TestSimulateStream:
    """Tests for sample_times and simulate_stream"""

    def test_exact_timestamps(self):
        times = sample_times(9.6, 30.0)
        k = np.arange(times.size)
        assert times.size == 289
        assert np.array_equal(times, k / 9.6)

    def test_empty_one_second(self, default_config):
        scenario = LoadScenario.from_rows([(0.0, 0.0, ()), (1.0, 0.0, ())])
        samples = list(simulate_stream(default_config, scenario))
        assert len(samples) == 10
        assert all(s.channels == (0.0,) * 5 for s in samples)

    def test_deterministic(self, default_config, contact_scenario):
        a = list(simulate_stream(default_config, contact_scenario, seed=5))
        b = list(simulate_stream(default_config, contact_scenario, seed=5))
        assert a == b

    def test_seed_changes_noise(self, default_config, contact_scenario):
        a = list(simulate_stream(default_config, contact_scenario, seed=1))
        b = list(simulate_stream(default_config, contact_scenario, seed=2))
        assert a != b

    def test_overload_press(self, default_config, contact_scenario):
        samples = list(simulate_stream(default_config, contact_scenario))
        overload = [s for s in samples if 4.6 < s.time < 5.4]
        assert overload
        assert all(s.channels[0] == 255 and s.channels[3] == 255 for s in overload)

    def test_must_start_at_zero(self, default_config):
        scenario = LoadScenario.from_rows([(0.5, 0.0, ()), (1.0, 0.0, ())])
        with pytest.raises(DataError):
            list(simulate_stream(default_config, scenario))


class TestStreamToSignal:
    """Tests for stream_to_signal function"""

    def test_codes_to_volts(self, default_config):
        np.testing.assert_allclose(stream_to_signal(default_config, [255, 51, 0, 0, 0]),
                                   [5.0, 1.0, 0.0, 0.0, 0.0])

    def test_same_units_pass_through(self, default_config):
        cfg = replace(default_config, signal_units="adc_counts")
        np.testing.assert_array_equal(stream_to_signal(cfg, [3, 4, 5, 6, 7]), [3, 4, 5, 6, 7])

    def test_bad_code(self, default_config):
        with pytest.raises(DataError):
            stream_to_signal(default_config, [12.5, 0, 0, 0, 0])


class TestProtocolDataset:
    """Tests for collect_protocol_dataset function"""

    def test_size_and_forces(self, protocol_dataset):
        assert len(protocol_dataset) == 100
        assert protocol_dataset.forces.max() == pytest.approx(0.98)
        assert np.count_nonzero(protocol_dataset.weights_gw == 50) == 10

    def test_signal_grows_with_weight(self, protocol_dataset):
        means = [
            protocol_dataset.signals[protocol_dataset.weights_gw == w].mean()
            for w in np.unique(protocol_dataset.weights_gw)
        ]
        assert np.all(np.diff(means) > 0)

    def test_deterministic(self, default_config):
        a = collect_protocol_dataset(default_config, seed=3)
        b = collect_protocol_dataset(default_config, seed=3)
        np.testing.assert_array_equal(a.signals, b.signals)

    def test_adc_count_units(self, default_config):
        cfg = replace(default_config, signal_units="adc_counts")
        data = collect_protocol_dataset(cfg, seed=0)
        assert np.all(data.signals == np.floor(data.signals))
        assert data.signals.max() <= 255


class TestEstimatorLink:
    """Tests for element_signal_thresholds and build_estimator_config"""

    def test_thresholds_in_volts(self, default_config):
        thresholds = element_signal_thresholds(default_config)
        assert len(thresholds) == 4
        for t in thresholds:
            assert t == pytest.approx(1.261, abs=1e-3)

    def test_thresholds_in_counts(self, default_config):
        cfg = replace(default_config, signal_units="adc_counts")
        assert element_signal_thresholds(cfg) == (64.5,) * 4

    def test_build(self, default_config, chain_model):
        cfg = build_estimator_config(default_config, chain_model)
        assert cfg.sensing_range == 1.0
        assert cfg.resolution == 0.05
        assert cfg.filter_window == 4

    def test_gain_sets_range(self, default_config, chain_model):
        cfg = build_estimator_config(default_config.with_overrides(gain=22), chain_model)
        assert cfg.sensing_range == 1.5

    def test_units_mismatch(self, default_config):
        model = PolynomialModel((0.0, 0.004), signal_units="adc_counts")
        with pytest.raises(ConfigurationError):
            build_estimator_config(default_config, model)


class TestFindElementThresholds:
    """Tests for find_element_thresholds function"""

    def test_protocol_weights(self, default_config):
        found = find_element_thresholds(default_config)
        np.testing.assert_allclose(found, gw_to_newtons([20, 20, 20, 25]), rtol=1e-12)

    def test_within_grid_resolution(self, default_config):
        step = gw_to_newtons(1.0)
        found = find_element_thresholds(default_config, np.arange(1.0, 131.0))
        for value, expected in zip(found, (0.10, 0.10, 0.15, 0.20)):
            assert expected <= value < expected + step

    def test_untriggered_element(self, default_config):
        found = find_element_thresholds(default_config, [5.0, 10.0, 12.0])
        assert found[0] == pytest.approx(gw_to_newtons(12.0))
        assert np.isnan(found[2]) and np.isnan(found[3])

    def test_follows_configured_trigger(self, default_config):
        elements = list(default_config.elements)
        elements[3] = replace(elements[3], trigger_threshold=0.5)
        cfg = replace(default_config, elements=tuple(elements))
        found = find_element_thresholds(cfg, np.arange(1.0, 131.0))
        assert 0.5 <= found[3] < 0.5 + gw_to_newtons(1.0)

    def test_no_weights(self, default_config):
        with pytest.raises(UsageError):
            find_element_thresholds(default_config, [])
