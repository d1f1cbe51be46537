"""
TactileSensePro Toolkit

Desk-scale model of a dual-layer soft tactile sensor: load → resistance →
Wheatstone bridge → amplifier → ADC → polynomial calibration → filtered force
estimate and contact-location detection.

Quick imports:
--------------
from scripts import load_config, simulate_stream, cross_validate
from scripts.bridge_utils import bridge_output, adc_sample
from scripts.estimator_utils import process_frame, range_for_gain
"""

# Errors
from .exceptions import (
    TactileError,
    UsageError,
    ConfigurationError,
    DataError,
    DomainError,
    ParseError,
    ArityError,
    StreamError,
    FitError,
    UnderdeterminedFitError,
    SingularFitError,
)

# Units
from .units_utils import (
    GRAVITY,
    gw_to_newtons,
    newtons_to_gw,
    rmse,
)

# Sensor layers
from .sensor_utils import (
    FabricModel,
    ElementModel,
    LoadScenario,
    stretched_resistance,
    fabric_delta_r,
    element_resistance,
    apply_load,
    load_scenario,
    save_scenario,
)

# Bridge, amplifier, ADC
from .bridge_utils import (
    BridgeConfig,
    AdcConfig,
    GAIN_PRESETS,
    is_balanced,
    thevenin_resistance,
    thevenin_slope,
    bridge_output,
    amplify,
    adc_sample,
    dequantize,
)

# Calibration
from .calibration_utils import (
    PolynomialModel,
    CalibrationDataset,
    FitReport,
    PUBLISHED_MODELS,
    protocol_weights,
    protocol_forces,
    synthetic_dataset,
    build_design_matrix,
    least_squares_fit,
    fit_polynomial,
    evaluate_model,
    describe_model,
    kfold_split,
    cross_validate,
    format_fit_report,
)

# Estimator
from .estimator_utils import (
    EstimatorConfig,
    EstimateFrame,
    MovingAverageFilter,
    StreamState,
    range_for_gain,
    moving_average,
    estimate_force,
    detect_contacts,
    classify_pattern,
    process_frame,
)

# Configuration
from .config_utils import (
    ToolkitConfig,
    config_from_mapping,
    load_config,
    parse_orders,
)

# I/O
from .io_utils import (
    SampleLine,
    parse_sample_line,
    format_sample_line,
    read_sample_stream,
    format_frame,
    load_frames,
    save_dataset,
    load_dataset,
    save_model,
    load_model,
)

# Pipeline
from .pipeline_utils import (
    sense_channels,
    simulate_stream,
    stream_to_signal,
    collect_protocol_dataset,
    element_signal_thresholds,
    find_element_thresholds,
    build_estimator_config,
)

__version__ = "1.0.0"

__all__ = [
    # Errors
    "TactileError",
    "UsageError",
    "ConfigurationError",
    "DataError",
    "DomainError",
    "ParseError",
    "ArityError",
    "StreamError",
    "FitError",
    "UnderdeterminedFitError",
    "SingularFitError",
    # Units
    "GRAVITY",
    "gw_to_newtons",
    "newtons_to_gw",
    "rmse",
    # Sensor layers
    "FabricModel",
    "ElementModel",
    "LoadScenario",
    "stretched_resistance",
    "fabric_delta_r",
    "element_resistance",
    "apply_load",
    "load_scenario",
    "save_scenario",
    # Bridge, amplifier, ADC
    "BridgeConfig",
    "AdcConfig",
    "GAIN_PRESETS",
    "is_balanced",
    "thevenin_resistance",
    "thevenin_slope",
    "bridge_output",
    "amplify",
    "adc_sample",
    "dequantize",
    # Calibration
    "PolynomialModel",
    "CalibrationDataset",
    "FitReport",
    "PUBLISHED_MODELS",
    "protocol_weights",
    "protocol_forces",
    "synthetic_dataset",
    "build_design_matrix",
    "least_squares_fit",
    "fit_polynomial",
    "evaluate_model",
    "describe_model",
    "kfold_split",
    "cross_validate",
    "format_fit_report",
    # Estimator
    "EstimatorConfig",
    "EstimateFrame",
    "MovingAverageFilter",
    "StreamState",
    "range_for_gain",
    "moving_average",
    "estimate_force",
    "detect_contacts",
    "classify_pattern",
    "process_frame",
    # Configuration
    "ToolkitConfig",
    "config_from_mapping",
    "load_config",
    "parse_orders",
    # I/O
    "SampleLine",
    "parse_sample_line",
    "format_sample_line",
    "read_sample_stream",
    "format_frame",
    "load_frames",
    "save_dataset",
    "load_dataset",
    "save_model",
    "load_model",
    # Pipeline
    "sense_channels",
    "simulate_stream",
    "stream_to_signal",
    "collect_protocol_dataset",
    "element_signal_thresholds",
    "find_element_thresholds",
    "build_estimator_config",
]
