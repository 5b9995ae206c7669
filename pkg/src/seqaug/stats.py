"""Length reports and statistical self-checks of the augmentation pipeline.

Reports are plain text, one ``name=value`` per line, in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import LengthPerturbConfig, SmoothingConfig, Utterance, FeatureSequence
from .labelsmooth import NBestSet
from .lenperturb import frame_count
from .schedule import EpochCounters, ScheduleSpec, apply_epoch

HIST_LIMIT = 50


def format_report(pairs) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


@dataclass
class LengthReport:
    ids: list[str]
    deltas: np.ndarray
    histogram: dict[int, int] = field(default_factory=dict)
    underflow: int = 0
    overflow: int = 0

    @property
    def count(self) -> int:
        return int(self.deltas.size)

    @property
    def mean(self) -> float:
        return float(self.deltas.mean()) if self.count else 0.0

    @property
    def std(self) -> float:
        return float(self.deltas.std()) if self.count else 0.0

    def to_text(self) -> str:
        pairs = [("count", self.count), ("mean_delta", _fmt(self.mean)),
                 ("std_delta", _fmt(self.std)),
                 ("min_delta", int(self.deltas.min()) if self.count else 0),
                 ("max_delta", int(self.deltas.max()) if self.count else 0),
                 ("hist_underflow", self.underflow), ("hist_overflow", self.overflow),
                 ("hist", ",".join(f"{k}:{v}" for k, v in sorted(self.histogram.items())))]
        return format_report(pairs)


def length_report(before: Iterable[Utterance], after: Iterable[Utterance]) -> LengthReport:
    """Per-utterance change in frame count, binned at width 1 over [-50, 50]."""
    ids, deltas = [], []
    sentinel = object()
    it_after = iter(after)
    for u in before:
        v = next(it_after, sentinel)
        if v is sentinel:
            raise ValueError(f"'after' stream ended before {u.id}")
        if v.id != u.id:
            raise ValueError(f"id mismatch: {u.id!r} vs {v.id!r}")
        ids.append(u.id)
        deltas.append(v.features.num_frames - u.features.num_frames)
    if next(it_after, sentinel) is not sentinel:
        raise ValueError("'after' stream is longer than 'before'")
    d = np.array(deltas, dtype=np.int64)
    report = LengthReport(ids, d)
    report.underflow = int((d < -HIST_LIMIT).sum())
    report.overflow = int((d > HIST_LIMIT).sum())
    inside = d[np.abs(d) <= HIST_LIMIT]
    values, counts = np.unique(inside, return_counts=True)
    report.histogram = {int(v): int(c) for v, c in zip(values, counts)}
    return report


def expected_insert_growth(n_frames: int, r_p: float, T_p: int) -> float:
    """Mean number of blank frames one insertion pass adds."""
    return frame_count(r_p, n_frames) * (T_p + 1) / 2.0


def binomial_band(p: float, n: int, k: float = 4.0) -> float:
    return k * math.sqrt(p * (1.0 - p) / n)


@dataclass(frozen=True)
class RateCheck:
    name: str
    expected: float
    observed: float
    band: float

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= self.band


@dataclass
class Verification:
    n_trials: int
    checks: list[RateCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        pairs = [("n_trials", self.n_trials)]
        for c in self.checks:
            pairs += [(f"{c.name}_expected", _fmt(c.expected)),
                      (f"{c.name}_observed", _fmt(c.observed)),
                      (f"{c.name}_band", _fmt(c.band)),
                      (f"{c.name}_pass", int(c.passed))]
        pairs.append(("all_pass", int(self.passed)))
        return format_report(pairs)


def synthetic_corpus(n: int, n_frames: int = 100, dim: int = 2, K: int = 1):
    """``n`` constant-shape utterances and K-deep n-best lists that never match the truth."""
    frames = np.arange(n_frames * dim, dtype=np.float32).reshape(n_frames, dim) + 1.0
    seq = FeatureSequence(frames)
    truth = ("ground", "truth")
    utts = [Utterance(f"syn{i:07d}", seq, truth) for i in range(n)]
    hyps = [("hyp", str(k)) for k in range(K)]
    nbest = {u.id: NBestSet.from_token_lists(u.id, hyps) for u in utts}
    return utts, nbest


def verify_rates(n_trials: int, lp_cfg: LengthPerturbConfig, sm_cfg: SmoothingConfig,
                 seed: int, threads: int = 1) -> Verification:
    """Gate and replacement rates of the real pipeline against their targets.

    Runs one epoch with both techniques active over synthetic utterances
    and flags each rate at four binomial standard errors.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    utts, nbest = synthetic_corpus(n_trials, K=sm_cfg.K)
    counters = EpochCounters()
    spec = ScheduleSpec(lenpb=(1, 1), nbestls=(1, 1))
    for _ in apply_epoch(utts, 1, lp_cfg, sm_cfg, nbest, spec, seed, threads, counters):
        pass
    n = counters.total
    checks = [
        RateCheck("drop_gate_rate", lp_cfg.p_s, counters.drop_gates / n,
                  binomial_band(lp_cfg.p_s, n)),
        RateCheck("insert_gate_rate", lp_cfg.p_p, counters.insert_gates / n,
                  binomial_band(lp_cfg.p_p, n)),
        RateCheck("replacement_rate", sm_cfg.epsilon, counters.replaced / n,
                  binomial_band(sm_cfg.epsilon, n)),
    ]
    return Verification(n, checks)
