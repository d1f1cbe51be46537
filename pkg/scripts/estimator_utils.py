"""
estimator_utils.py

Runtime pipeline, one frame per sample: polynomial force model → range clamp
→ moving-average filter, plus per-element on/off detection and a contact
pattern label for the 2×2 position layer.

Author: Satvik Praveen
Project: TactileSensePro
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Optional, Sequence, Tuple

import numpy as np

from .bridge_utils import GAIN_PRESETS
from .calibration_utils import PolynomialModel, evaluate_model
from .exceptions import ConfigurationError, DomainError, StreamError, UsageError
from .units_utils import Force, check_finite

PATTERNS = ("none", "point", "line", "area")
N_ELEMENTS = 4

# Sensing range / resolution measured at each published gain
RANGE_TABLE = {22.0: (1.5, 0.1), 41.36: (1.0, 0.05)}


# ✅ Configuration & frame types
@dataclass(frozen=True)
class EstimatorConfig:
    """Model, filter and detection settings of the runtime estimator."""

    model: PolynomialModel
    element_thresholds: Tuple[float, float, float, float]
    filter_window: int = 4
    sensing_range: float = 1.0
    resolution: float = 0.05
    hysteresis_fraction: float = 0.0
    element_threshold_forces: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if int(self.filter_window) != self.filter_window or self.filter_window < 1:
            raise ConfigurationError("❌ filter_window must be an integer >= 1")
        if not self.sensing_range > 0:
            raise ConfigurationError("❌ sensing_range must be > 0")
        if not self.resolution > 0:
            raise ConfigurationError("❌ resolution must be > 0")
        thresholds = tuple(float(t) for t in self.element_thresholds)
        if len(thresholds) != N_ELEMENTS or min(thresholds) <= 0:
            raise ConfigurationError("❌ need 4 element thresholds, all > 0")
        if not 0 <= self.hysteresis_fraction < 1:
            raise ConfigurationError("❌ hysteresis_fraction must be in [0, 1)")
        object.__setattr__(self, "element_thresholds", thresholds)


@dataclass(frozen=True)
class EstimateFrame:
    time: float
    raw_force: Force
    filtered_force: Force
    element_state: Tuple[bool, bool, bool, bool]
    pattern: str


class MovingAverageFilter:
    """Equal-weight mean of the last ``window`` samples; averages what it has during warm-up."""

    def __init__(self, window: int = 4):
        if window < 1:
            raise UsageError("❌ filter window must be >= 1")
        self.window = int(window)
        self.samples: Deque[float] = deque(maxlen=self.window)

    def update(self, value: float) -> float:
        self.samples.append(float(value))
        return moving_average(self.samples, self.window)


@dataclass
class StreamState:
    """Mutable per-stream context: filter memory, last timestamp, element states."""

    filter: MovingAverageFilter
    last_time: Optional[float] = None
    element_state: Tuple[bool, ...] = field(default=(False,) * N_ELEMENTS)
    frames: int = 0

    @classmethod
    def for_config(cls, cfg: EstimatorConfig) -> "StreamState":
        return cls(filter=MovingAverageFilter(cfg.filter_window))


# ✅ Range & resolution
def range_for_gain(gain: float) -> Tuple[float, float]:
    """
    Sensing range and resolution (N) for an amplifier gain.

    Exact at the published gains; between them linear in 1/gain, outside them
    proportional to 1/gain, so range and resolution both shrink as gain grows.
    """
    if not gain > 0:
        raise DomainError(f"❌ amplifier gain must be > 0, got {gain}")
    for preset in GAIN_PRESETS:
        if math.isclose(gain, preset, rel_tol=1e-12):
            return RANGE_TABLE[preset]
    low_gain, high_gain = GAIN_PRESETS
    (r_low, res_low), (r_high, res_high) = RANGE_TABLE[low_gain], RANGE_TABLE[high_gain]
    x = 1.0 / gain
    if gain < low_gain:
        return r_low * low_gain * x, res_low * low_gain * x
    if gain > high_gain:
        return r_high * high_gain * x, res_high * high_gain * x
    xp = [1.0 / high_gain, 1.0 / low_gain]
    return float(np.interp(x, xp, [r_high, r_low])), float(np.interp(x, xp, [res_high, res_low]))


# ✅ Force path
def moving_average(window: Sequence[float], filter_window: Optional[int] = None) -> float:
    """
    Mean of the most recent ``min(filter_window, len(window))`` samples.

    Raises
    ------
    UsageError
        If the window is empty.
    """
    samples = list(window)
    if not samples:
        raise UsageError("❌ moving average of an empty window")
    if filter_window is not None:
        samples = samples[-int(filter_window):]
    mean = math.fsum(samples) / len(samples)
    return min(max(mean, min(samples)), max(samples))


def estimate_force(cfg: EstimatorConfig, v: float) -> Force:
    """Model force at signal ``v`` clamped to ``[0, sensing_range]``."""
    v = float(check_finite(v, "signal"))
    return float(np.clip(evaluate_model(cfg.model, v), 0.0, cfg.sensing_range))


# ✅ Contact path
def detect_contacts(
    signals: Sequence[float],
    thresholds: Sequence[float],
    previous: Optional[Sequence[bool]] = None,
    hysteresis_fraction: float = 0.0,
) -> Tuple[bool, ...]:
    """
    Element on/off states; on iff signal >= threshold (inclusive).

    With ``hysteresis_fraction`` h > 0, an element that was on stays on until
    its signal falls below threshold·(1 − h).
    """
    s = check_finite(signals, "element signal")
    thr = np.asarray(thresholds, dtype=np.float64)
    if s.shape != thr.shape:
        raise UsageError(f"❌ {s.size} element signals but {thr.size} thresholds")
    on = s >= thr
    if previous is not None and hysteresis_fraction > 0:
        hold = np.asarray(previous, dtype=bool) & (s >= thr * (1.0 - hysteresis_fraction))
        on = on | hold
    return tuple(bool(x) for x in on)


def classify_pattern(states: Sequence[bool]) -> str:
    """none / point / line / area from the number of active elements."""
    active = int(np.count_nonzero(states))
    return PATTERNS[min(active, 3)]


# ✅ Frame processing
def process_frame(
    cfg: EstimatorConfig,
    state: StreamState,
    signals: Sequence[float],
    time: float,
) -> EstimateFrame:
    """
    Turns one 5-channel sample into an EstimateFrame and advances ``state``.

    Channel 0 is the force layer, channels 1–4 are the elements. The model is
    applied first, then the filter.

    Raises
    ------
    StreamError
        If ``time`` is earlier than the previous frame.
    """
    if len(signals) != 1 + N_ELEMENTS:
        raise UsageError(f"❌ expected 5 channels, got {len(signals)}")
    if state.last_time is not None and time < state.last_time:
        raise StreamError(f"❌ timestamp {time} precedes previous {state.last_time}")

    raw = estimate_force(cfg, signals[0])
    filtered = float(np.clip(state.filter.update(raw), 0.0, cfg.sensing_range))
    elements = detect_contacts(
        signals[1:],
        cfg.element_thresholds,
        previous=state.element_state,
        hysteresis_fraction=cfg.hysteresis_fraction,
    )

    state.last_time = float(time)
    state.element_state = elements
    state.frames += 1
    return EstimateFrame(
        time=float(time),
        raw_force=raw,
        filtered_force=filtered,
        element_state=elements,
        pattern=classify_pattern(elements),
    )
