"""
io_utils.py

Text formats of the toolkit: the serial-style sample-line stream, frame
records, dataset CSV and model files.

Author: Satvik Praveen
Project: TactileSensePro
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .calibration_utils import CalibrationDataset, PolynomialModel
from .estimator_utils import EstimateFrame
from .exceptions import ArityError, DataError, ParseError, StreamError

PathLike = Union[str, Path]

N_CHANNELS = 5
FRAME_COLUMNS = ("t", "raw_n", "filtered_n", "e1", "e2", "e3", "e4", "pattern")
MODEL_FORMAT = "tactilesense-model/1"


# ✅ Sample lines
@dataclass(frozen=True)
class SampleLine:
    """One microcontroller reading: time and 5 channels (0 = force layer, 1–4 = elements)."""

    time: float
    channels: Tuple[float, float, float, float, float]


def format_number(x: float) -> str:
    """Shortest decimal that round-trips, without exponent or trailing zeros."""
    return np.format_float_positional(float(x), trim="-")


def parse_sample_line(line: str, line_number: Optional[int] = None) -> SampleLine:
    """
    Parse ``t,v0,v1,v2,v3,v4``; whitespace around fields is ignored.

    Raises
    ------
    ArityError
        If the line does not carry exactly 5 channels.
    ParseError
        If a field is not a finite decimal or the time is negative.
    """
    fields = [f.strip() for f in line.strip().split(",")]
    if len(fields) != 1 + N_CHANNELS:
        raise ArityError(
            f"❌ expected {N_CHANNELS} channels, got {len(fields) - 1}", line_number
        )
    values = []
    for i, text in enumerate(fields):
        try:
            value = float(text)
        except ValueError:
            raise ParseError(f"❌ field {i + 1} is not a number: {text!r}", line_number)
        if not math.isfinite(value):
            raise ParseError(f"❌ field {i + 1} is not finite: {text!r}", line_number)
        values.append(value)
    if values[0] < 0:
        raise ParseError(f"❌ negative timestamp {values[0]}", line_number)
    return SampleLine(time=values[0], channels=tuple(values[1:]))


def format_sample_line(sample: SampleLine) -> str:
    """Canonical text form of a sample (no newline)."""
    return ",".join(format_number(x) for x in (sample.time, *sample.channels))


def read_sample_stream(lines: Iterable[str]) -> Iterator[SampleLine]:
    """
    Lazily parse a sample stream, skipping blank lines and ``#`` comments.

    Raises
    ------
    StreamError
        If a timestamp is earlier than the previous one.
    """
    last_time = None
    for number, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        sample = parse_sample_line(line, number)
        if last_time is not None and sample.time < last_time:
            raise StreamError(
                f"❌ timestamp {sample.time} precedes previous {last_time}", number
            )
        last_time = sample.time
        yield sample


# ✅ Frame records
def format_frame(frame: EstimateFrame) -> str:
    """``t,raw_n,filtered_n,e1,e2,e3,e4,pattern`` with states as 0/1."""
    states = ",".join("1" if s else "0" for s in frame.element_state)
    return (
        f"{format_number(frame.time)},{frame.raw_force:.6f},{frame.filtered_force:.6f},"
        f"{states},{frame.pattern}"
    )


def load_frames(path: PathLike) -> pd.DataFrame:
    """Read frame records (no header) into a DataFrame with FRAME_COLUMNS."""
    try:
        df = pd.read_csv(
            path, header=None, names=list(FRAME_COLUMNS), comment="#",
            dtype=str, keep_default_na=False,
        )
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=list(FRAME_COLUMNS))
    if df.isna().any().any() or (df == "").any().any():
        raise DataError(f"❌ {path} has incomplete frame records")
    try:
        for col in ("t", "raw_n", "filtered_n"):
            df[col] = pd.to_numeric(df[col]).astype(np.float64)
        for col in ("e1", "e2", "e3", "e4"):
            df[col] = pd.to_numeric(df[col]).astype(np.int64)
    except ValueError as exc:
        raise DataError(f"❌ {path} has a malformed frame record: {exc}")
    return df


# ✅ Datasets
def save_dataset(dataset: CalibrationDataset, path: PathLike) -> None:
    dataset.to_frame().to_csv(path, index=False)


def load_dataset(path: PathLike) -> CalibrationDataset:
    """
    Read a dataset CSV with columns ``v,force_n`` and optional ``weight_gw``.
    """
    df = pd.read_csv(path)
    df.columns = [c.strip() for c in df.columns]
    missing = [c for c in ("v", "force_n") if c not in df.columns]
    if missing:
        raise DataError(f"❌ dataset {path} is missing column(s) {missing}")
    try:
        weights = df["weight_gw"].astype(np.float64).to_numpy() if "weight_gw" in df else None
        return CalibrationDataset(
            signals=df["v"].astype(np.float64).to_numpy(),
            forces=df["force_n"].astype(np.float64).to_numpy(),
            weights_gw=weights,
        )
    except ValueError as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"❌ dataset {path} has a non-numeric value: {exc}")


# ✅ Model files
def save_model(model: PolynomialModel, path: PathLike) -> None:
    """Write a model as JSON; coefficients keep full float precision."""
    payload = {
        "format": MODEL_FORMAT,
        "order": model.order,
        "coefficients": list(model.coefficients),
        "signal_units": model.signal_units,
        "metadata": model.metadata,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_model(path: PathLike) -> PolynomialModel:
    """
    Read a model file written by :func:`save_model`.

    Raises
    ------
    DataError
        If the file is not a valid model file.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"❌ {path} is not a model file: {exc}")
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise DataError(f"❌ {path} is not a {MODEL_FORMAT} file")
    coefficients = payload.get("coefficients", [])
    if payload.get("order") != len(coefficients) - 1:
        raise DataError(f"❌ {path}: order does not match coefficient count")
    return PolynomialModel(
        coefficients=tuple(coefficients),
        signal_units=payload.get("signal_units", "volts"),
        metadata=payload.get("metadata", {}),
    )
