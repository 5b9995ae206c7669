"""Length perturbation and n-best label smoothing for sequence training data."""

from ._accel import USE_NUMBA, backend_name
from .core import (ConfigError, FeatureSequence, FormatError, LengthPerturbConfig,
                   SeqAugError, SmoothingConfig, TrainingError, Utterance)
from .labelsmooth import (Hypothesis, NBestSet, parse_nbest_file, smooth_one_hot,
                          smooth_select, smoothed_cross_entropy)
from .lenperturb import drop_frames, insert_frames, perturb_features, perturb_utterance
from .rng import RandomStream, derive_stream
from .schedule import ScheduleSpec, apply_epoch, is_active

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "backend_name",
    "ConfigError", "FeatureSequence", "FormatError", "LengthPerturbConfig", "SeqAugError",
    "SmoothingConfig", "TrainingError", "Utterance",
    "Hypothesis", "NBestSet", "parse_nbest_file", "smooth_one_hot", "smooth_select",
    "smoothed_cross_entropy",
    "drop_frames", "insert_frames", "perturb_features", "perturb_utterance",
    "RandomStream", "derive_stream",
    "ScheduleSpec", "apply_epoch", "is_active",
]
