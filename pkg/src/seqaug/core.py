"""Domain types shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class SeqAugError(Exception):
    """Base class for toolkit errors."""


class ConfigError(SeqAugError, ValueError):
    pass


class FormatError(SeqAugError, ValueError):
    """Malformed input file. ``where`` is a byte offset or a line number."""

    def __init__(self, message: str, where: int | None = None):
        super().__init__(message)
        self.where = where


class TrainingError(SeqAugError, RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureSequence:
    """A read-only ``T x D`` frame matrix."""

    frames: np.ndarray
    frame_shift_ms: float = 10.0

    def __post_init__(self):
        arr = np.asarray(self.frames)
        if arr.dtype.kind != "f":
            arr = arr.astype(np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"frames must be a nonempty T x D matrix, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("frames contain NaN or Inf")
        if not self.frame_shift_ms > 0:
            raise ValueError("frame_shift_ms must be positive")
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        object.__setattr__(self, "frames", arr)

    @classmethod
    def _wrap(cls, frames: np.ndarray, frame_shift_ms: float) -> FeatureSequence:
        # kernel outputs are fresh, finite and 2-D: skip the checks and the copy
        frames.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "frames", frames)
        object.__setattr__(obj, "frame_shift_ms", frame_shift_ms)
        return obj

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]

    def same_as(self, other: FeatureSequence) -> bool:
        """Bit-exact equality of shape, dtype and values."""
        a, b = self.frames, other.frames
        return a.dtype == b.dtype and a.shape == b.shape and a.tobytes() == b.tobytes()


@dataclass(frozen=True)
class Utterance:
    id: str
    features: FeatureSequence = field(compare=False)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id or any(c.isspace() for c in self.id):
            raise ValueError(f"utterance id must be nonempty without whitespace: {self.id!r}")
        labels = tuple(self.labels)
        if any(not tok or any(c.isspace() for c in tok) for tok in labels):
            raise ValueError(f"{self.id}: label tokens must be nonempty words")
        object.__setattr__(self, "labels", labels)

    def replace(self, features: FeatureSequence | None = None,
                labels: Sequence[str] | None = None) -> Utterance:
        return Utterance(
            self.id,
            self.features if features is None else features,
            self.labels if labels is None else tuple(labels),
        )


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_count(name: str, value: int, minimum: int = 0) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class LengthPerturbConfig:
    """Drop/insert probabilities, frame fractions and maximum run lengths.

    ``T_s = 0`` (or ``T_p = 0``) disables that half regardless of the other
    two parameters. ``min_out_frames`` is the shortest output a drop may
    leave; a drop that would go below it is skipped.
    """

    p_s: float = 0.0
    r_s: float = 0.0
    T_s: int = 0
    p_p: float = 0.0
    r_p: float = 0.0
    T_p: int = 0
    min_out_frames: int = 1

    def __post_init__(self):
        for name in ("p_s", "r_s", "p_p", "r_p"):
            object.__setattr__(self, name, _check_unit(name, getattr(self, name)))
        object.__setattr__(self, "T_s", _check_count("T_s", self.T_s))
        object.__setattr__(self, "T_p", _check_count("T_p", self.T_p))
        object.__setattr__(self, "min_out_frames",
                           _check_count("min_out_frames", self.min_out_frames, 1))


@dataclass(frozen=True)
class SmoothingConfig:
    epsilon: float = 0.0
    K: int = 1

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _check_unit("epsilon", self.epsilon))
        object.__setattr__(self, "K", _check_count("K", self.K, 1))
