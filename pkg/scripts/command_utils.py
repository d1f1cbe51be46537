"""
command_utils.py

The toolkit verbs behind ``tactile_cli.py``: simulate, collect, thresholds,
calibrate, estimate and report. Each takes a ToolkitConfig plus paths/streams and is
deterministic given its inputs and seed.

Author: Satvik Praveen
Project: TactileSensePro
"""

import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Dict, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from .calibration_utils import FitReport, cross_validate, format_fit_report
from .config_utils import ToolkitConfig
from .estimator_utils import StreamState, process_frame, range_for_gain
from .exceptions import UsageError
from .io_utils import (
    format_frame,
    format_sample_line,
    load_dataset,
    load_frames,
    load_model,
    read_sample_stream,
    save_dataset,
    save_model,
)
from .pipeline_utils import (
    build_estimator_config,
    collect_protocol_dataset,
    find_element_thresholds,
    simulate_stream,
    stream_to_signal,
)
from .sensor_utils import LoadScenario, load_scenario
from .units_utils import newtons_to_gw, rmse

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# ✅ simulate / collect
def cmd_simulate(config: ToolkitConfig, scenario_path: PathLike, output_path: PathLike) -> int:
    """Writes the sampled channel stream for a scenario file; returns the line count."""
    scenario = load_scenario(scenario_path)
    count = 0
    with open(output_path, "w", newline="\n") as out:
        for sample in simulate_stream(config, scenario):
            out.write(format_sample_line(sample) + "\n")
            count += 1
    logger.info("wrote %d samples to %s", count, output_path)
    return count


def cmd_collect(config: ToolkitConfig, output_path: PathLike, quadrant: int = 1) -> int:
    """Writes the simulated weight-protocol dataset CSV; returns the sample count."""
    dataset = collect_protocol_dataset(config, quadrant=quadrant)
    save_dataset(dataset, output_path)
    logger.info("wrote %d protocol samples to %s", len(dataset), output_path)
    return len(dataset)


def cmd_thresholds(
    config: ToolkitConfig,
    output_path: Optional[PathLike] = None,
    weights_gw: Optional[Sequence[float]] = None,
) -> pd.DataFrame:
    """
    Weight sweep over the four quadrants: smallest triggering force per element
    next to the configured trigger force. Written as CSV when ``output_path``
    is given.
    """
    found = np.array(find_element_thresholds(config, weights_gw))
    table = pd.DataFrame(
        {
            "element": np.arange(1, len(found) + 1),
            "threshold_n": found,
            "threshold_gw": [newtons_to_gw(f) if np.isfinite(f) else np.nan for f in found],
            "configured_n": [e.trigger_threshold for e in config.elements],
        }
    )
    if output_path is not None:
        table.to_csv(output_path, index=False, float_format="%.6g")
        logger.info("wrote element thresholds to %s", output_path)
    return table


# ✅ calibrate
def cmd_calibrate(
    config: ToolkitConfig,
    dataset_path: PathLike,
    model_path: PathLike,
    report_path: Optional[PathLike] = None,
) -> FitReport:
    """
    Cross-validates every configured order and persists the selected model.

    Nothing is written if any fold fails to fit.
    """
    dataset = load_dataset(dataset_path)
    report = cross_validate(
        dataset,
        orders=config.orders,
        repeats=config.repeats,
        k=config.kfold_k,
        seed=config.seed,
        strict_paper_cv=config.strict_paper_cv,
        signal_units=config.signal_units,
    )
    model = report.model
    metadata = {
        "seed": config.seed,
        "repeats": report.repeats,
        "k": report.k,
        "strict_paper_cv": report.strict_paper_cv,
        "samples": len(dataset),
        "orders": list(report.orders),
        "train_rmse_n": [float(x) for x in report.train_rmse],
        "test_rmse_n": [float(x) for x in report.test_rmse],
    }
    save_model(replace(model, metadata=metadata), model_path)
    if report_path is not None:
        Path(report_path).write_text(format_fit_report(report))
    logger.info("saved order-%d model to %s", report.selected_order, model_path)
    return report


# ✅ estimate
def cmd_estimate(
    config: ToolkitConfig,
    model_path: PathLike,
    stream: Union[PathLike, TextIO],
    output: Optional[TextIO] = None,
) -> int:
    """
    Streams one frame record per input sample to ``output`` (stdout by default),
    flushing after each frame.

    ``stream`` is a path, ``"-"`` for stdin, or an open text stream. Memory use
    does not grow with stream length.
    """
    model = load_model(model_path)
    cfg = build_estimator_config(config, model)
    state = StreamState.for_config(cfg)
    output = sys.stdout if output is None else output

    def run(lines) -> None:
        for sample in read_sample_stream(lines):
            signals = stream_to_signal(config, sample.channels)
            frame = process_frame(cfg, state, signals, sample.time)
            output.write(format_frame(frame) + "\n")
            # one frame per input line, visible before the next line arrives
            output.flush()

    if hasattr(stream, "read"):
        run(stream)
    elif str(stream) == "-":
        run(sys.stdin)
    else:
        with open(stream) as lines:
            run(lines)
    logger.info("estimated %d frames", state.frames)
    return state.frames


# ✅ report
def summarize_frames(
    frames: pd.DataFrame,
    truth: Optional[LoadScenario] = None,
    filter_window: int = 4,
    sensing_range: float = 1.0,
) -> Tuple[Dict[str, float], pd.DataFrame]:
    """
    Summary statistics of a frame stream.

    Returns
    -------
    tuple
        ``(summary, per_load)``: a dict of scalar fields and, when ``truth``
        is given, a table of mean filtered force per applied load.

    Notes
    -----
    ``rmse_n`` only uses settled frames, where the truth force has been
    constant for at least ``filter_window`` consecutive frames.
    """
    summary: Dict[str, float] = {"frames": int(len(frames))}
    per_load = pd.DataFrame(columns=["truth_n", "mean_n", "error_n", "frames"])
    if frames.empty:
        return summary, per_load

    summary["duration_s"] = float(frames["t"].iloc[-1] - frames["t"].iloc[0])
    summary["saturation_count"] = int((frames["raw_n"] >= sensing_range - 5e-7).sum())
    for col in ("e1", "e2", "e3", "e4"):
        summary[f"duty_{col}"] = float(frames[col].mean())
    for pattern in ("none", "point", "line", "area"):
        summary[f"pattern_{pattern}"] = int((frames["pattern"] == pattern).sum())

    if truth is not None:
        df = frames.assign(truth_n=truth.force_at(frames["t"].to_numpy()))
        run_id = (df["truth_n"] != df["truth_n"].shift()).cumsum()
        settled = df.groupby(run_id).cumcount() >= filter_window - 1
        summary["rmse_all_n"] = rmse(df["filtered_n"], df["truth_n"])
        if settled.any():
            summary["rmse_n"] = rmse(df.loc[settled, "filtered_n"], df.loc[settled, "truth_n"])
            loaded = df[settled & (df["truth_n"] > 0)]
            per_load = (
                loaded.groupby("truth_n")["filtered_n"]
                .agg(mean_n="mean", frames="size")
                .reset_index()
            )
            per_load.insert(2, "error_n", per_load["mean_n"] - per_load["truth_n"])
    return summary, per_load


def format_summary(summary: Dict[str, float], per_load: pd.DataFrame) -> str:
    lines = []
    for key, value in summary.items():
        text = str(value) if isinstance(value, (int, np.integer)) else f"{value:.4f}"
        lines.append(f"{key}: {text}")
    if not per_load.empty:
        lines.append("per_load:")
        lines.append(per_load.to_string(index=False, float_format="{:.4f}".format))
    return "\n".join(lines) + "\n"


def cmd_report(
    config: ToolkitConfig,
    frames_path: PathLike,
    truth_path: Optional[PathLike] = None,
    require_rmse: bool = False,
) -> str:
    """
    Plain-text summary of a frame file, optionally scored against a scenario.

    Raises
    ------
    UsageError
        If RMSE is requested without a truth scenario.
    """
    if require_rmse and truth_path is None:
        raise UsageError("❌ RMSE needs a ground-truth scenario (--truth)")
    frames = load_frames(frames_path)
    truth = load_scenario(truth_path) if truth_path is not None else None
    sensing_range = config.sensing_range or range_for_gain(config.bridge.amplifier_gain)[0]
    summary, per_load = summarize_frames(frames, truth, config.filter_window, sensing_range)
    return format_summary(summary, per_load)

