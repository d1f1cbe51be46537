"""
sensor_utils.py

Forward model of the dual-layer soft sensor: applied load → resistance of the
conductive-fabric force layer and of the four conductive-rubber elements of
the position layer. This is the ground-truth generator of the simulator.

Author: Satvik Praveen
Project: TactileSensePro
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .exceptions import ConfigurationError, DataError, DomainError
from .units_utils import Force, Resistance, check_finite, check_non_negative

QUADRANTS = (1, 2, 3, 4)
SCENARIO_COLUMNS = ("t", "force_n", "quadrants")

# Element reading in the near-open regime, as a multiple of rest resistance
OPEN_LOOP_FACTOR = 100.0


# ✅ Layer models
@dataclass(frozen=True)
class FabricModel:
    """
    Conductive-fabric force layer.

    The resistance rise is linear in force up to ``full_scale_force`` where it
    saturates at ``rest_resistance * max_fractional_delta``.
    """

    rest_resistance: Resistance = 100e3
    max_fractional_delta: float = 0.35
    full_scale_force: Force = 4.0

    def __post_init__(self):
        if not self.rest_resistance > 0:
            raise ConfigurationError("❌ fabric rest_resistance must be > 0")
        if not 0 < self.max_fractional_delta <= 1:
            raise ConfigurationError("❌ fabric max_fractional_delta must be in (0, 1]")
        if not self.full_scale_force > 0:
            raise ConfigurationError("❌ fabric full_scale_force must be > 0")


@dataclass(frozen=True)
class ElementModel:
    """One conductive-rubber element (taxel) of the position layer."""

    rest_resistance: Resistance = 1.5e6
    trigger_threshold: Force = 0.1
    active_signal_delta: float = 0.05
    saturation_force: Force = 1.2

    def __post_init__(self):
        if not 1e6 <= self.rest_resistance <= 2e6:
            raise ConfigurationError(
                f"❌ element rest_resistance must be within [1 MΩ, 2 MΩ], got {self.rest_resistance}"
            )
        if not self.trigger_threshold > 0:
            raise ConfigurationError("❌ element trigger_threshold must be > 0")
        if not self.active_signal_delta > 0:
            raise ConfigurationError("❌ element active_signal_delta must be > 0")
        if not self.saturation_force >= self.trigger_threshold:
            raise ConfigurationError("❌ element saturation_force must be >= trigger_threshold")


# ✅ Resistance models
def stretched_resistance(rest: Resistance, stretch_ratio):
    """
    Resistance of a conductor stretched by ``stretch_ratio`` at constant volume.

    L grows by λ and A shrinks by 1/λ, so R = ρL/A grows by λ².

    Raises
    ------
    DomainError
        If λ < 1 (compression is outside the model).
    """
    lam = check_finite(stretch_ratio, "stretch ratio")
    if np.any(lam < 1.0):
        raise DomainError(f"❌ stretch ratio must be >= 1, got {stretch_ratio!r}")
    r = rest * lam ** 2
    return float(r) if r.ndim == 0 else r


def fabric_delta_r(model: FabricModel, force):
    """
    Resistance rise of the fabric layer under ``force`` (N).

    ΔR = R0 · δmax · min(force / F_full, 1)
    """
    f = check_non_negative(force, "force")
    dr = model.rest_resistance * model.max_fractional_delta * np.minimum(
        f / model.full_scale_force, 1.0
    )
    return float(dr) if dr.ndim == 0 else dr


def element_resistance(model: ElementModel, force):
    """
    Piecewise element resistance.

    below threshold → rest; threshold..saturation → rest·(1+delta);
    above saturation → 100·rest (near open loop).
    """
    f = check_non_negative(force, "force")
    r = np.select(
        [f < model.trigger_threshold, f <= model.saturation_force],
        [
            model.rest_resistance,
            model.rest_resistance * (1.0 + model.active_signal_delta),
        ],
        default=model.rest_resistance * OPEN_LOOP_FACTOR,
    )
    return float(r) if r.ndim == 0 else r


# ✅ Load scenarios
def parse_quadrants(text: str) -> FrozenSet[int]:
    """Parses a ``+``-joined quadrant list such as ``"1+2"``; empty means no contact."""
    text = str(text).strip()
    if not text:
        return frozenset()
    try:
        quadrants = frozenset(int(part) for part in text.split("+"))
    except ValueError:
        raise DataError(f"❌ malformed quadrant list {text!r}")
    if not quadrants <= set(QUADRANTS):
        raise DataError(f"❌ quadrants must be within 1..4, got {text!r}")
    return quadrants


def format_quadrants(quadrants: Iterable[int]) -> str:
    return "+".join(str(q) for q in sorted(quadrants))


@dataclass(frozen=True)
class LoadScenario:
    """
    Time-stamped applied force and contacted quadrants, held between samples.
    """

    times: np.ndarray
    forces: np.ndarray
    quadrants: Tuple[FrozenSet[int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        times = check_finite(self.times, "scenario time").ravel()
        forces = check_non_negative(self.forces, "scenario force").ravel()
        quadrants = tuple(frozenset(q) for q in self.quadrants)
        if times.size == 0:
            raise DataError("❌ a scenario needs at least one row")
        if not (times.size == forces.size == len(quadrants)):
            raise DataError("❌ scenario columns have different lengths")
        if np.any(np.diff(times) <= 0):
            raise DataError("❌ scenario times must be strictly increasing")
        for t, f, q in zip(times, forces, quadrants):
            if not q <= set(QUADRANTS):
                raise DataError(f"❌ quadrants must be within 1..4 at t={t}")
            if f > 0 and not q:
                raise DataError(f"❌ non-zero force without a contact quadrant at t={t}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "forces", forces)
        object.__setattr__(self, "quadrants", quadrants)

    @classmethod
    def from_rows(cls, rows: Sequence[Tuple[float, float, Iterable[int]]]) -> "LoadScenario":
        """Builds a scenario from ``(t, force_n, quadrants)`` tuples."""
        return cls(
            times=np.array([r[0] for r in rows], dtype=np.float64),
            forces=np.array([r[1] for r in rows], dtype=np.float64),
            quadrants=tuple(frozenset(r[2]) for r in rows),
        )

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    def state_at(self, time: float) -> Tuple[float, FrozenSet[int]]:
        """Zero-order hold lookup of ``(force, quadrants)`` at ``time``."""
        idx = int(np.searchsorted(self.times, time, side="right")) - 1
        if idx < 0:
            raise DomainError(f"❌ t={time} is before the scenario start t={self.start}")
        return float(self.forces[idx]), self.quadrants[idx]

    def force_at(self, times) -> np.ndarray:
        """Vectorised zero-order hold of the force column."""
        t = np.atleast_1d(np.asarray(times, dtype=np.float64))
        idx = np.searchsorted(self.times, t, side="right") - 1
        if np.any(idx < 0):
            raise DomainError(f"❌ times before the scenario start t={self.start}")
        return self.forces[idx]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.times,
                "force_n": self.forces,
                "quadrants": [format_quadrants(q) for q in self.quadrants],
            }
        )


def load_scenario(path: Union[str, Path]) -> LoadScenario:
    """
    Load a scenario CSV with header ``t,force_n,quadrants``.

    Raises
    ------
    OSError
        If the file cannot be read.
    DataError
        If columns are missing or values violate scenario invariants.
    """
    df = pd.read_csv(path, dtype={"quadrants": str}, keep_default_na=False)
    df.columns = [c.strip() for c in df.columns]
    missing = [c for c in SCENARIO_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"❌ scenario {path} is missing column(s) {missing}")
    try:
        times = df["t"].astype(np.float64).to_numpy()
        forces = df["force_n"].astype(np.float64).to_numpy()
    except ValueError as exc:
        raise DataError(f"❌ scenario {path} has a non-numeric value: {exc}")
    quadrants = tuple(parse_quadrants(q) for q in df["quadrants"])
    return LoadScenario(times=times, forces=forces, quadrants=quadrants)


def save_scenario(scenario: LoadScenario, path: Union[str, Path]) -> None:
    scenario.to_frame().to_csv(path, index=False)


# ✅ Composition per tick
def apply_load(
    scenario: LoadScenario,
    fabric: FabricModel,
    elements: Sequence[ElementModel],
    time: float,
) -> Tuple[float, np.ndarray]:
    """
    Resistances of both layers at ``time``.

    The fabric sees the total force; every listed quadrant element sees the
    full force, the others see none.

    Returns
    -------
    tuple
        ``(fabric ΔR, array of 4 element resistances)``.
    """
    if len(elements) != len(QUADRANTS):
        raise ConfigurationError(f"❌ expected 4 element models, got {len(elements)}")
    force, quadrants = scenario.state_at(time)
    delta_r = fabric_delta_r(fabric, force)
    resistances = np.array(
        [
            element_resistance(model, force if q in quadrants else 0.0)
            for q, model in zip(QUADRANTS, elements)
        ]
    )
    return delta_r, resistances
