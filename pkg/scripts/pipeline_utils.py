"""
pipeline_utils.py

Composition of the sensor chain: scenario → layer resistances → bridges →
amplifier → ADC codes on the five microcontroller channels, plus the helpers
that tie the chain to calibration and estimation (protocol replay, element
threshold levels, stream unit conversion).

Author: Satvik Praveen
Project: TactileSensePro
"""

import logging
import math
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .bridge_utils import adc_sample, amplify, bridge_output, dequantize
from .calibration_utils import CalibrationDataset, PolynomialModel, protocol_weights
from .config_utils import ToolkitConfig
from .estimator_utils import EstimatorConfig, detect_contacts, range_for_gain
from .exceptions import ConfigurationError, DataError, UsageError
from .io_utils import N_CHANNELS, SampleLine
from .sensor_utils import LoadScenario, apply_load, element_resistance
from .units_utils import gw_to_newtons

logger = logging.getLogger(__name__)

# ✅ Chain
def sense_channels(
    config: ToolkitConfig,
    fabric_dr: float,
    element_rs: Sequence[float],
    noise: Optional[Sequence[float]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Amplified voltages and ADC codes of all five channels.

    Each element sits in its own equal-arm bridge balanced at its rest
    resistance; all channels share gain, noise level and ADC.

    Returns
    -------
    tuple
        ``(volts, codes)``, both of length 5.
    """
    noise = np.zeros(N_CHANNELS) if noise is None else np.asarray(noise, dtype=np.float64)
    bridge_volts = [bridge_output(config.bridge, fabric_dr)]
    for model, r in zip(config.elements, element_rs):
        element_bridge = config.bridge.equal_arms(model.rest_resistance)
        bridge_volts.append(bridge_output(element_bridge, r - model.rest_resistance))
    volts = amplify(config.bridge, np.array(bridge_volts), noise)
    return volts, adc_sample(config.adc, volts)


def sample_times(adc_rate: float, end: float) -> np.ndarray:
    """t_k = k / rate for k = 0..floor(end·rate), each computed directly from k."""
    n = int(np.floor(end * adc_rate + 1e-9)) + 1
    return np.arange(n) / adc_rate


def simulate_stream(
    config: ToolkitConfig,
    scenario: LoadScenario,
    seed: Optional[int] = None,
) -> Iterator[SampleLine]:
    """
    Sampled channel codes for ``scenario`` at the ADC rate.

    One uniform noise draw per channel and tick, also when noise_fraction is 0.
    """
    if scenario.start > 0:
        raise DataError(f"❌ scenario must start at t=0, starts at {scenario.start}")
    rng = np.random.default_rng(config.seed if seed is None else seed)
    times = sample_times(config.adc.sample_rate, scenario.end)
    logger.info("simulating %d samples over %.3f s", times.size, scenario.end)
    for t in times:
        noise = rng.uniform(-1.0, 1.0, size=N_CHANNELS)
        dr, rs = apply_load(scenario, config.fabric, config.elements, t)
        _, codes = sense_channels(config, dr, rs, noise)
        yield SampleLine(time=float(t), channels=tuple(float(c) for c in codes))


# ✅ Unit conversion between stream and model
def codes_to_signal(config: ToolkitConfig, codes) -> np.ndarray:
    """ADC codes expressed in the configured ``signal_units``."""
    codes = np.asarray(codes, dtype=np.float64)
    if config.signal_units == "adc_counts":
        return codes
    return np.asarray(dequantize(config.adc, codes), dtype=np.float64)


def stream_to_signal(config: ToolkitConfig, values: Sequence[float]) -> np.ndarray:
    """
    Convert stream values (``stream_units``) to model ``signal_units``.

    Raises
    ------
    DataError
        If a code stream holds non-integral or out-of-range codes.
    """
    values = np.asarray(values, dtype=np.float64)
    if config.stream_units == config.signal_units:
        return values
    if config.stream_units == "adc_counts":
        try:
            return codes_to_signal(config, values)
        except UsageError as exc:
            raise DataError(str(exc))
    return np.asarray(adc_sample(config.adc, values), dtype=np.float64)


# ✅ Links to calibration and estimation
def collect_protocol_dataset(
    config: ToolkitConfig,
    seed: Optional[int] = None,
    quadrant: int = 1,
) -> CalibrationDataset:
    """
    Replays the weight protocol through the simulated chain.

    Each repetition is one press of the weight on ``quadrant``; the recorded
    signal is the force-layer channel in ``signal_units``.
    """
    rng = np.random.default_rng(config.seed if seed is None else seed)
    signals, forces, weights = [], [], []
    for weight, count in protocol_weights():
        force = gw_to_newtons(weight)
        scenario = LoadScenario.from_rows([(0.0, force, {quadrant})])
        dr, rs = apply_load(scenario, config.fabric, config.elements, 0.0)
        for _ in range(count):
            _, codes = sense_channels(config, dr, rs, rng.uniform(-1.0, 1.0, size=N_CHANNELS))
            signals.append(float(codes_to_signal(config, codes[0])))
            forces.append(force)
            weights.append(weight)
    logger.info("collected %d protocol samples", len(signals))
    return CalibrationDataset(
        signals=np.array(signals), forces=np.array(forces), weights_gw=np.array(weights)
    )


def element_signal_thresholds(config: ToolkitConfig) -> Tuple[float, float, float, float]:
    """
    Detection level of each element in ``signal_units``.

    Half of the noise-free chain output of the element at its trigger force,
    i.e. midway between the rest and triggered readings.
    """
    levels = []
    for model in config.elements:
        r = element_resistance(model, model.trigger_threshold)
        v = bridge_output(config.bridge.equal_arms(model.rest_resistance), r - model.rest_resistance)
        amplified = amplify(config.bridge, v, 0.0)
        level = amplified if config.signal_units == "volts" else adc_sample(config.adc, amplified)
        if level <= 0:
            raise ConfigurationError("❌ element trigger produces no signal; check gain and delta")
        levels.append(0.5 * float(level))
    return tuple(levels)


def build_estimator_config(config: ToolkitConfig, model: PolynomialModel) -> EstimatorConfig:
    """
    EstimatorConfig for ``model`` under ``config``.

    Raises
    ------
    ConfigurationError
        If the model's signal units differ from the configured ones.
    """
    if model.signal_units != config.signal_units:
        raise ConfigurationError(
            f"❌ model expects {model.signal_units!r} signals but config uses "
            f"{config.signal_units!r}"
        )
    sensing_range, resolution = range_for_gain(config.bridge.amplifier_gain)
    return EstimatorConfig(
        model=model,
        element_thresholds=element_signal_thresholds(config),
        filter_window=config.filter_window,
        sensing_range=config.sensing_range or sensing_range,
        resolution=config.resolution or resolution,
        hysteresis_fraction=config.hysteresis_fraction,
        element_threshold_forces=tuple(m.trigger_threshold for m in config.elements),
    )


def find_element_thresholds(
    config: ToolkitConfig,
    weights_gw: Optional[Iterable[float]] = None,
) -> Tuple[float, float, float, float]:
    """
    Smallest force of a weight sweep that switches each element on.

    Every weight (the protocol weights by default) is pressed on every
    quadrant through the noise-free chain; an element counts as triggered once
    its reading reaches the detection level of ``element_signal_thresholds``.

    Returns
    -------
    tuple
        One force (N) per element, ``nan`` where no weight triggered it.
    """
    if weights_gw is None:
        weights_gw = [w for w, _ in protocol_weights()]
    weights = np.unique(np.asarray(list(weights_gw), dtype=np.float64))
    if weights.size == 0:
        raise UsageError("❌ threshold sweep needs at least one weight")
    levels = element_signal_thresholds(config)

    found = [math.nan] * len(config.elements)
    for element in range(len(config.elements)):
        for weight in weights:
            force = gw_to_newtons(weight)
            scenario = LoadScenario.from_rows([(0.0, force, {element + 1})])
            dr, rs = apply_load(scenario, config.fabric, config.elements, 0.0)
            _, codes = sense_channels(config, dr, rs)
            states = detect_contacts(codes_to_signal(config, codes[1:]), levels)
            if states[element]:
                found[element] = force
                break
        logger.debug("element %d triggers at %s N", element + 1, found[element])
    return tuple(found)
