"""
config_utils.py

Toolkit configuration: one frozen ``ToolkitConfig`` composed of the layer,
bridge, ADC, estimator and calibration settings. Files are flat ``KEY=value``
lists in the ``.env`` style (see ``datasets/toolkit.env``); every default is
the published value.

Author: Satvik Praveen
Project: TactileSensePro
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

from dotenv import dotenv_values

from .bridge_utils import AdcConfig, BridgeConfig
from .calibration_utils import SIGNAL_UNITS
from .exceptions import ConfigurationError
from .sensor_utils import ElementModel, FabricModel

logger = logging.getLogger(__name__)

DEFAULT_ELEMENT_RESTS = (1.0e6, 1.3e6, 1.6e6, 2.0e6)
DEFAULT_ELEMENT_THRESHOLDS = (0.10, 0.10, 0.15, 0.20)


def _default_elements() -> Tuple[ElementModel, ...]:
    return tuple(
        ElementModel(rest_resistance=r, trigger_threshold=t)
        for r, t in zip(DEFAULT_ELEMENT_RESTS, DEFAULT_ELEMENT_THRESHOLDS)
    )


@dataclass(frozen=True)
class ToolkitConfig:
    fabric: FabricModel = field(default_factory=FabricModel)
    elements: Tuple[ElementModel, ...] = field(default_factory=_default_elements)
    bridge: BridgeConfig = field(default_factory=BridgeConfig)
    adc: AdcConfig = field(default_factory=AdcConfig)
    filter_window: int = 4
    hysteresis_fraction: float = 0.0
    sensing_range: Optional[float] = None
    resolution: Optional[float] = None
    signal_units: str = "volts"
    stream_units: str = "adc_counts"
    kfold_k: int = 5
    repeats: int = 20
    orders: Tuple[int, ...] = (1, 2, 3, 4, 5)
    strict_paper_cv: bool = False
    seed: int = 0

    def __post_init__(self):
        if len(self.elements) != 4:
            raise ConfigurationError(f"❌ expected 4 elements, got {len(self.elements)}")
        if self.bridge.rx_rest != self.fabric.rest_resistance:
            raise ConfigurationError(
                "❌ bridge_rx_rest must equal fabric_rest_resistance "
                f"({self.bridge.rx_rest} != {self.fabric.rest_resistance})"
            )
        for name in ("signal_units", "stream_units"):
            if getattr(self, name) not in SIGNAL_UNITS:
                raise ConfigurationError(
                    f"❌ {name} must be one of {SIGNAL_UNITS}, got {getattr(self, name)!r}"
                )
        if self.filter_window < 1:
            raise ConfigurationError("❌ filter_window must be >= 1")
        if self.kfold_k < 2:
            raise ConfigurationError("❌ kfold_k must be >= 2")
        if self.repeats < 1:
            raise ConfigurationError("❌ repeats must be >= 1")
        if not self.orders or min(self.orders) < 1:
            raise ConfigurationError("❌ orders must be positive integers")

    def with_overrides(
        self,
        seed: Optional[int] = None,
        gain: Optional[float] = None,
        window: Optional[int] = None,
        orders: Optional[Tuple[int, ...]] = None,
        repeats: Optional[int] = None,
        strict_paper_cv: Optional[bool] = None,
    ) -> "ToolkitConfig":
        """Copy with the command-line overrides that were given (None = keep)."""
        changes = {}
        if seed is not None:
            changes["seed"] = int(seed)
        if gain is not None:
            changes["bridge"] = replace(self.bridge, amplifier_gain=float(gain))
        if window is not None:
            changes["filter_window"] = int(window)
        if orders is not None:
            changes["orders"] = tuple(orders)
        if repeats is not None:
            changes["repeats"] = int(repeats)
        if strict_paper_cv:
            changes["strict_paper_cv"] = True
        return replace(self, **changes)


# ✅ Parsing
_BRIDGE_KEYS = {
    "supply_voltage": "supply_voltage",
    "bridge_r1": "r1",
    "bridge_r2": "r2",
    "bridge_r3": "r3",
    "bridge_rx_rest": "rx_rest",
    "amplifier_gain": "amplifier_gain",
    "noise_fraction": "noise_fraction",
    "rail_low": "rail_low",
    "rail_high": "rail_high",
}
_ADC_KEYS = {"adc_bits": "bits", "sample_rate": "sample_rate", "adc_full_scale": "full_scale"}
_FABRIC_KEYS = {
    "fabric_rest_resistance": "rest_resistance",
    "fabric_max_fractional_delta": "max_fractional_delta",
    "fabric_full_scale_force": "full_scale_force",
}
_ELEMENT_KEYS = {
    "element_rest_resistances",
    "element_thresholds_n",
    "element_active_signal_delta",
    "element_saturation_force",
}
_SCALAR_KEYS = {
    "filter_window": int,
    "hysteresis_fraction": float,
    "sensing_range": float,
    "resolution": float,
    "signal_units": str,
    "stream_units": str,
    "kfold_k": int,
    "repeats": int,
    "seed": int,
}
KNOWN_KEYS = (
    set(_BRIDGE_KEYS) | set(_ADC_KEYS) | set(_FABRIC_KEYS) | _ELEMENT_KEYS
    | set(_SCALAR_KEYS) | {"orders", "strict_paper_cv"}
)


def _number(key: str, text: str, kind=float):
    try:
        return kind(text)
    except (TypeError, ValueError):
        raise ConfigurationError(f"❌ {key}={text!r} is not a valid {kind.__name__}")


def _number_list(key: str, text: str, kind=float) -> Tuple:
    return tuple(_number(key, part.strip(), kind) for part in text.split(",") if part.strip())


def parse_orders(text: str) -> Tuple[int, ...]:
    """``"1-5"`` or ``"1,2,3"`` → tuple of orders."""
    text = text.strip()
    if "-" in text:
        lo, hi = (_number("orders", part, int) for part in text.split("-", 1))
        return tuple(range(lo, hi + 1))
    return _number_list("orders", text, int)


def _parse_bool(key: str, text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off", ""):
        return False
    raise ConfigurationError(f"❌ {key}={text!r} is not a boolean")


def config_from_mapping(values: Mapping[str, Optional[str]]) -> ToolkitConfig:
    """
    Build a ToolkitConfig from string ``KEY=value`` pairs.

    Raises
    ------
    ConfigurationError
        On unknown keys, malformed values or violated invariants.
    """
    values = {k.strip().lower(): ("" if v is None else str(v).strip()) for k, v in values.items()}
    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigurationError(f"❌ unknown configuration key(s): {unknown}")

    defaults = ToolkitConfig()
    bridge = replace(defaults.bridge, **{
        attr: _number(key, values[key]) for key, attr in _BRIDGE_KEYS.items() if key in values
    })
    adc = replace(defaults.adc, **{
        attr: _number(key, values[key], int if attr == "bits" else float)
        for key, attr in _ADC_KEYS.items() if key in values
    })
    fabric = replace(defaults.fabric, **{
        attr: _number(key, values[key]) for key, attr in _FABRIC_KEYS.items() if key in values
    })
    if "fabric_rest_resistance" in values and "bridge_rx_rest" not in values:
        # arms follow the fabric unless given explicitly
        r = fabric.rest_resistance
        bridge = replace(bridge, **{
            attr: r for key, attr in _BRIDGE_KEYS.items()
            if attr in ("r1", "r2", "r3", "rx_rest") and key not in values
        })

    rests = _number_list("element_rest_resistances", values["element_rest_resistances"]) \
        if "element_rest_resistances" in values else DEFAULT_ELEMENT_RESTS
    thresholds = _number_list("element_thresholds_n", values["element_thresholds_n"]) \
        if "element_thresholds_n" in values else DEFAULT_ELEMENT_THRESHOLDS
    if len(rests) != 4 or len(thresholds) != 4:
        raise ConfigurationError("❌ element_rest_resistances and element_thresholds_n need 4 values")
    element_extra = {}
    if "element_active_signal_delta" in values:
        element_extra["active_signal_delta"] = _number(
            "element_active_signal_delta", values["element_active_signal_delta"]
        )
    if "element_saturation_force" in values:
        element_extra["saturation_force"] = _number(
            "element_saturation_force", values["element_saturation_force"]
        )
    elements = tuple(
        ElementModel(rest_resistance=r, trigger_threshold=t, **element_extra)
        for r, t in zip(rests, thresholds)
    )

    scalars = {
        key: _number(key, values[key], kind) if kind is not str else values[key]
        for key, kind in _SCALAR_KEYS.items() if key in values and values[key] != ""
    }
    if "orders" in values:
        scalars["orders"] = parse_orders(values["orders"])
    if "strict_paper_cv" in values:
        scalars["strict_paper_cv"] = _parse_bool("strict_paper_cv", values["strict_paper_cv"])

    return ToolkitConfig(fabric=fabric, elements=elements, bridge=bridge, adc=adc, **scalars)


def load_config(path: Optional[Union[str, Path]] = None) -> ToolkitConfig:
    """
    Load a ``KEY=value`` config file; ``None`` gives the defaults.

    Raises
    ------
    OSError
        If the file does not exist.
    """
    if path is None:
        return ToolkitConfig()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    values: Dict[str, Optional[str]] = dotenv_values(path)
    logger.debug("loaded %d config keys from %s", len(values), path)
    return config_from_mapping(values)
