"""Epoch-gated application of label smoothing and length perturbation."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .core import ConfigError, LengthPerturbConfig, SmoothingConfig, Utterance
from .labelsmooth import NBestSet, select_index
from .lenperturb import perturb_features
from .rng import derive_stream

LENPB = "lenpb"
NBESTLS = "nbestls"
TECHNIQUES = (LENPB, NBESTLS)


def _check_range(name, rng):
    if rng is None:
        return None
    start, end = (int(x) for x in rng)
    if start < 1 or end < start:
        raise ConfigError(f"{name} epoch range must satisfy 1 <= start <= end, got {start}-{end}")
    return (start, end)


@dataclass(frozen=True)
class ScheduleSpec:
    """Inclusive epoch ranges per technique; ``None`` means never active."""

    lenpb: tuple[int, int] | None = None
    nbestls: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "lenpb", _check_range(LENPB, self.lenpb))
        object.__setattr__(self, "nbestls", _check_range(NBESTLS, self.nbestls))


def is_active(technique: str, epoch: int, spec: ScheduleSpec) -> bool:
    if technique not in TECHNIQUES:
        raise ValueError(f"unknown technique {technique!r}")
    if epoch < 1:
        raise ValueError("epochs are numbered from 1")
    rng = getattr(spec, technique)
    return rng is not None and rng[0] <= epoch <= rng[1]


@dataclass
class EpochCounters:
    total: int = 0
    replaced: int = 0
    kept: int = 0
    missing_nbest: int = 0
    drop_gates: int = 0
    insert_gates: int = 0


@dataclass(frozen=True)
class _Outcome:
    utterance: Utterance
    smoothing: str | None  # "replaced", "kept", "missing" or None when inactive
    drop_gate: bool = False
    insert_gate: bool = False


def smooth_step(utt_id: str, labels, sm_cfg: SmoothingConfig,
                nbest: Mapping[str, NBestSet], rng) -> tuple[tuple[str, ...], str]:
    """One smoothing decision; the outcome is "replaced", "kept" or "missing"."""
    hyps = nbest.get(utt_id)
    i = select_index(hyps, sm_cfg, rng)
    if hyps is None or len(hyps) == 0:
        return tuple(labels), "missing"
    if i < 0:
        return tuple(labels), "kept"
    return hyps.hypotheses[i].tokens, "replaced"


def augment_one(u: Utterance, epoch: int, lp_cfg: LengthPerturbConfig,
                sm_cfg: SmoothingConfig, nbest: Mapping[str, NBestSet], spec: ScheduleSpec,
                global_seed: int) -> _Outcome:
    """Labels first, then features, all from the utterance's own stream."""
    rng = derive_stream(global_seed, u.id, epoch)
    out = u
    smoothing = None
    drop_gate = insert_gate = False
    if is_active(NBESTLS, epoch, spec):
        labels, smoothing = smooth_step(u.id, u.labels, sm_cfg, nbest, rng)
        if smoothing == "replaced":
            out = out.replace(labels=labels)
    if is_active(LENPB, epoch, spec):
        features, trace = perturb_features(out.features, lp_cfg, rng)
        drop_gate, insert_gate = trace.drop_gate, trace.insert_gate
        if features is not out.features:
            out = out.replace(features=features)
    return _Outcome(out, smoothing, drop_gate, insert_gate)


def ordered_map(func: Callable, items: Iterable, threads: int = 1) -> Iterator:
    """``map(func, items)`` on a thread pool, yielding results in input order.

    At most ``4 * threads`` items are in flight, so long streams are not
    buffered whole.
    """
    if threads <= 1:
        yield from map(func, items)
        return
    window = 4 * threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = deque()
        for item in items:
            pending.append(pool.submit(func, item))
            if len(pending) >= window:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


def apply_epoch(utterances: Iterable[Utterance], epoch: int, lp_cfg: LengthPerturbConfig,
                sm_cfg: SmoothingConfig, nbest: Mapping[str, NBestSet] | None,
                spec: ScheduleSpec, global_seed: int, threads: int = 1,
                counters: EpochCounters | None = None) -> Iterator[Utterance]:
    """Augment a stream for one epoch, preserving input order.

    Each utterance draws only from ``derive_stream(global_seed, id, epoch)``,
    so the output does not depend on ``threads``. ``counters`` is updated
    in input order as results are yielded.
    """
    nbest = nbest or {}

    def work(u):
        return augment_one(u, epoch, lp_cfg, sm_cfg, nbest, spec, global_seed)

    for outcome in ordered_map(work, utterances, threads):
        if counters is not None:
            counters.total += 1
            if outcome.smoothing == "replaced":
                counters.replaced += 1
            elif outcome.smoothing == "kept":
                counters.kept += 1
            elif outcome.smoothing == "missing":
                counters.missing_nbest += 1
            counters.drop_gates += outcome.drop_gate
            counters.insert_gates += outcome.insert_gate
        yield outcome.utterance
