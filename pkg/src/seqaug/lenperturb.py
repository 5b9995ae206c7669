"""Length perturbation: random run dropping, then blank-frame insertion.

Draw layout per utterance (fixed; golden files depend on it):

1. gate draw ``g1`` (unit real); drop runs iff ``g1 < p_s``
2. gate draw ``g2`` (unit real); insert blanks iff ``g2 < p_p``
3. if dropping: ``m_s`` start indices without replacement, then one run
   length in ``1..T_s`` per start, in start draw order
4. if inserting: ``m_p`` anchors without replacement over the post-drop
   sequence, then one blank count in ``1..T_p`` per anchor

with ``m = floor(r * T)``. Both gate draws are always consumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import FeatureSequence, LengthPerturbConfig, Utterance
from .rng import RandomStream


def frame_count(rate: float, n_frames: int) -> int:
    """``floor(rate * n_frames)``, the number of starts or anchors.

    A 1e-9 slack absorbs binary rounding, so 0.29 * 100 counts 29, not 28.
    """
    return math.floor(rate * n_frames + 1e-9)


def drop_frames(seq: FeatureSequence, r_s: float, T_s: int, min_out_frames: int,
                rng: RandomStream) -> FeatureSequence:
    """Delete up to ``floor(r_s*T)`` runs of ``1..T_s`` consecutive frames.

    Runs are marked on a mask over the original indices, so overlapping
    runs merge and runs clamp at the sequence end. If fewer than
    ``min_out_frames`` frames would survive, ``seq`` is returned unchanged
    (the draws are still consumed).
    """
    n = seq.num_frames
    m = frame_count(r_s, n)
    if m == 0 or T_s == 0:
        return seq
    out, applied = K.drop_runs_apply(rng.state, seq.frames, m, T_s, min_out_frames)
    if not applied:
        return seq
    return FeatureSequence._wrap(out, seq.frame_shift_ms)


def insert_frames(seq: FeatureSequence, r_p: float, T_p: int,
                  rng: RandomStream) -> FeatureSequence:
    """Insert ``1..T_p`` all-zero frames after each of ``floor(r_p*T)`` anchors."""
    n = seq.num_frames
    m = frame_count(r_p, n)
    if m == 0 or T_p == 0:
        return seq
    counts = K.draw_insert_counts(rng.state, n, m, T_p)
    return FeatureSequence._wrap(K.expand_with_blanks(seq.frames, counts), seq.frame_shift_ms)


@dataclass(frozen=True)
class PerturbTrace:
    """Which gates opened for one utterance, plus lengths before and after."""

    drop_gate: bool
    insert_gate: bool
    len_in: int
    len_after_drop: int
    len_out: int


def perturb_features(seq: FeatureSequence, cfg: LengthPerturbConfig,
                     rng: RandomStream) -> tuple[FeatureSequence, PerturbTrace]:
    drop_gate = rng.next_unit_real() < cfg.p_s
    insert_gate = rng.next_unit_real() < cfg.p_p
    out = seq
    if drop_gate:
        out = drop_frames(out, cfg.r_s, cfg.T_s, cfg.min_out_frames, rng)
    mid = out.num_frames
    if insert_gate:
        out = insert_frames(out, cfg.r_p, cfg.T_p, rng)
    return out, PerturbTrace(drop_gate, insert_gate, seq.num_frames, mid, out.num_frames)


def perturb_utterance(u: Utterance, cfg: LengthPerturbConfig, rng: RandomStream) -> Utterance:
    features, _ = perturb_features(u.features, cfg, rng)
    if features is u.features:
        return u
    return u.replace(features=features)


def drop_length_samples(n_frames: int, r_s: float, T_s: int, n_trials: int,
                        rng: RandomStream, min_out_frames: int = 1):
    """Output lengths of ``n_trials`` successive :func:`drop_frames` calls on ``rng``.

    Runs the compiled loop; the draws are the ones :func:`drop_frames`
    would consume on a ``n_frames``-long input.
    """
    m = frame_count(r_s, n_frames)
    if m == 0 or T_s == 0:
        return np.full(n_trials, n_frames, dtype=np.int64)
    return K.drop_lengths_batch(rng.state, n_frames, m, T_s, min_out_frames, n_trials)


def insert_length_samples(n_frames: int, r_p: float, T_p: int, n_trials: int,
                          rng: RandomStream):
    m = frame_count(r_p, n_frames)
    if m == 0 or T_p == 0:
        return np.full(n_trials, n_frames, dtype=np.int64)
    return K.insert_lengths_batch(rng.state, n_frames, m, T_p, n_trials)
