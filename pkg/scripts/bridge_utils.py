"""
bridge_utils.py

Electrical model of the sensing chain: quarter Wheatstone bridge, Thevenin
reduction, instrumentation amplifier (gain, multiplicative noise, rail
clipping) and an N-bit ADC.

Bridge layout used throughout::

            Vs
        ┌───┴───┐
        R1      R3
        ├─ a    ├─ b        Vout = Vb − Va
        R2      Rx+ΔRx
        └───┬───┘
           GND

Author: Satvik Praveen
Project: TactileSensePro
"""

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .exceptions import ConfigurationError, UsageError
from .units_utils import Resistance, Voltage, check_finite, check_non_negative

# Published amplifier gains
GAIN_PRESETS: Tuple[float, float] = (22.0, 41.36)
BALANCE_RTOL = 1e-9


# ✅ Configurations
@dataclass(frozen=True)
class BridgeConfig:
    """Bridge arms, amplifier and output rails for one sensing channel."""

    supply_voltage: Voltage = 5.0
    r1: Resistance = 100e3
    r2: Resistance = 100e3
    r3: Resistance = 100e3
    rx_rest: Resistance = 100e3
    amplifier_gain: float = 41.36
    noise_fraction: float = 0.01
    rail_low: float = 0.0
    rail_high: float = 5.0

    def __post_init__(self):
        for name in ("r1", "r2", "r3", "rx_rest"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"❌ bridge {name} must be > 0")
        if not self.supply_voltage > 0:
            raise ConfigurationError("❌ supply_voltage must be > 0")
        if not self.amplifier_gain > 0:
            raise ConfigurationError("❌ amplifier_gain must be > 0")
        if not 0 <= self.noise_fraction < 1:
            raise ConfigurationError("❌ noise_fraction must be in [0, 1)")
        if not self.rail_low < self.rail_high:
            raise ConfigurationError("❌ rail_low must be below rail_high")

    def equal_arms(self, resistance: float) -> "BridgeConfig":
        """Same amplifier and supply, all four arms set to ``resistance``."""
        return replace(self, r1=resistance, r2=resistance, r3=resistance, rx_rest=resistance)


@dataclass(frozen=True)
class AdcConfig:
    """Microcontroller ADC: resolution, sample clock and full-scale voltage."""

    bits: int = 8
    sample_rate: float = 9.6
    full_scale: float = 5.0

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 1:
            raise ConfigurationError("❌ ADC bits must be an integer >= 1")
        if not self.sample_rate > 0:
            raise ConfigurationError("❌ ADC sample_rate must be > 0")
        if not self.full_scale > 0:
            raise ConfigurationError("❌ ADC full_scale must be > 0")

    @property
    def max_code(self) -> int:
        return 2 ** int(self.bits) - 1

    @property
    def lsb(self) -> float:
        """Voltage step of one code."""
        return self.full_scale / self.max_code


# ✅ Bridge
def is_balanced(cfg: BridgeConfig) -> bool:
    """True iff R1/R2 = R3/Rx at rest (1e-9 relative)."""
    return bool(np.isclose(cfg.r1 / cfg.r2, cfg.r3 / cfg.rx_rest, rtol=BALANCE_RTOL, atol=0.0))


def thevenin_resistance(rx: Resistance, delta_rx):
    """
    Thevenin resistance of an equal-resistor bridge seen from its output.

    Rt = Rx/2 + Rx·(Rx + ΔRx) / (2Rx + ΔRx)
    """
    if not rx > 0:
        raise UsageError("❌ rx must be > 0")
    d = check_non_negative(delta_rx, "delta_rx")
    rt = rx / 2.0 + rx * (rx + d) / (2.0 * rx + d)
    return float(rt) if rt.ndim == 0 else rt


def thevenin_slope(rx: Resistance, delta_rx):
    """Closed-form dRt/dΔRx = Rx² / (2Rx + ΔRx)²; 0.25 at rest."""
    if not rx > 0:
        raise UsageError("❌ rx must be > 0")
    d = check_non_negative(delta_rx, "delta_rx")
    slope = rx ** 2 / (2.0 * rx + d) ** 2
    return float(slope) if slope.ndim == 0 else slope


def bridge_output(cfg: BridgeConfig, delta_rx):
    """
    Differential bridge output for a sensing-arm rise of ``delta_rx`` ohms.

    Vout = Vs · [ (Rx+ΔRx)/(R3+Rx+ΔRx) − R2/(R1+R2) ]

    The amplifier input is treated as high impedance, so Rt does not load
    the dividers.

    Raises
    ------
    ConfigurationError
        If the bridge is not balanced at rest.
    """
    if not is_balanced(cfg):
        raise ConfigurationError(
            f"❌ bridge is not balanced at rest: R1/R2={cfg.r1 / cfg.r2:.6g} "
            f"vs R3/Rx={cfg.r3 / cfg.rx_rest:.6g}"
        )
    d = check_non_negative(delta_rx, "delta_rx")
    rx = cfg.rx_rest + d
    v = cfg.supply_voltage * (rx / (cfg.r3 + rx) - cfg.r2 / (cfg.r1 + cfg.r2))
    return float(v) if v.ndim == 0 else v


# ✅ Amplifier
def amplify(cfg: BridgeConfig, v_in, noise_sample=0.0):
    """
    Instrumentation amplifier: gain, multiplicative noise, rail clipping.

    Parameters
    ----------
    v_in : float or array-like
        Differential input voltage.
    noise_sample : float or array-like
        Noise draw in [-1, 1]; scaled by ``cfg.noise_fraction``.
    """
    v = check_finite(v_in, "amplifier input")
    noise = check_finite(noise_sample, "noise sample")
    if np.any(np.abs(noise) > 1.0):
        raise UsageError(f"❌ noise sample must be within [-1, 1], got {noise_sample!r}")
    out = np.clip(
        cfg.amplifier_gain * v * (1.0 + cfg.noise_fraction * noise),
        cfg.rail_low,
        cfg.rail_high,
    )
    return float(out) if out.ndim == 0 else out


# ✅ ADC
def adc_sample(adc: AdcConfig, v):
    """
    Quantise a voltage to an ADC code, clamping out-of-range inputs.

    code = round_half_up(clamp(v, 0, FS) / FS · (2^bits − 1))
    """
    x = np.clip(check_finite(v, "ADC input"), 0.0, adc.full_scale)
    code = np.floor(x / adc.full_scale * adc.max_code + 0.5).astype(np.int64)
    code = np.minimum(code, adc.max_code)
    return int(code) if code.ndim == 0 else code


def dequantize(adc: AdcConfig, code):
    """
    Voltage represented by an ADC code.

    Raises
    ------
    UsageError
        If a code is not an integer in [0, 2^bits − 1].
    """
    c = np.asarray(code, dtype=np.float64)
    if not np.all(np.isfinite(c)) or np.any(c != np.floor(c)):
        raise UsageError(f"❌ ADC codes must be integers, got {code!r}")
    if np.any(c < 0) or np.any(c > adc.max_code):
        raise UsageError(f"❌ ADC code out of range [0, {adc.max_code}]: {code!r}")
    v = c / adc.max_code * adc.full_scale
    return float(v) if v.ndim == 0 else v
