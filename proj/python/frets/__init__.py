"""Frequency-domain MLP forecaster (FreTS).

Arrays use the same layout as the C++ library: series are
``[channels, length]``, model inputs ``[batch, channels, lookback]`` and
predictions ``[batch, channels, horizon]``.
"""

from ._frets import (
    Activation,
    Checkpoint,
    ConfigError,
    DimensionError,
    Error,
    IngestionError,
    IoError,
    LearnerDomain,
    ModelConfig,
    Params,
    TrainingError,
    circular_conv,
    evaluate,
    fremlp_forward,
    frets_forward,
    init_params,
    irfft,
    load_checkpoint,
    loss_and_grad,
    rfft,
    run_checks,
    synth_sinusoids,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "Checkpoint",
    "ConfigError",
    "DimensionError",
    "Error",
    "IngestionError",
    "IoError",
    "LearnerDomain",
    "ModelConfig",
    "Params",
    "TrainingError",
    "circular_conv",
    "evaluate",
    "fremlp_forward",
    "frets_forward",
    "init_params",
    "irfft",
    "load_checkpoint",
    "loss_and_grad",
    "rfft",
    "run_checks",
    "synth_sinusoids",
    "train",
]
