"""N-best label smoothing, plus the classic one-hot smoothing formulas.

N-best file format (UTF-8, one hypothesis per line)::

    <utt_id> TAB <rank> TAB <hypothesis words> [TAB <score>]

Ranks start at 1 and ascend without gaps within each utterance. Blank
lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .core import FormatError, SmoothingConfig
from .rng import RandomStream

_RANK = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Hypothesis:
    tokens: tuple[str, ...]
    score: float | None = None


@dataclass(frozen=True)
class NBestSet:
    """Ranked hypotheses for one utterance; index 0 is rank 1."""

    utt_id: str
    hypotheses: tuple[Hypothesis, ...] = field(default=())

    def __len__(self):
        return len(self.hypotheses)

    @classmethod
    def from_token_lists(cls, utt_id: str, lists: Iterable[Sequence[str]]) -> NBestSet:
        return cls(utt_id, tuple(Hypothesis(tuple(t)) for t in lists))


def select_index(nbest: NBestSet | None, cfg: SmoothingConfig, rng: RandomStream) -> int:
    """Index of the replacing hypothesis, or -1 to keep the ground truth.

    Always draws ``gamma``; draws the index only when replacing.
    """
    gamma = rng.next_unit_real()
    if gamma <= 1.0 - cfg.epsilon or nbest is None or len(nbest) == 0:
        return -1
    k_eff = min(cfg.K, len(nbest))
    return rng.next_int_inclusive(0, k_eff - 1)


def smooth_select(truth: Sequence[str], nbest: NBestSet | None, cfg: SmoothingConfig,
                  rng: RandomStream) -> tuple[str, ...]:
    """Keep ``truth`` with probability ``1 - epsilon``, else a uniform top-K hypothesis."""
    i = select_index(nbest, cfg, rng)
    if i < 0:
        return tuple(truth)
    return nbest.hypotheses[i].tokens


def smooth_one_hot(class_index: int, num_classes: int, epsilon: float) -> np.ndarray:
    if not 0 <= class_index < num_classes:
        raise ValueError(f"class index {class_index} outside [0, {num_classes})")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    out = np.full(num_classes, epsilon / num_classes)
    out[class_index] += 1.0 - epsilon
    return out


def cross_entropy(p, q) -> float:
    """``H(p, q) = -sum p log q``; terms with ``p == 0`` contribute nothing."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError("p and q differ in length")
    support = p != 0
    if np.any(q[support] <= 0):
        raise ValueError("q vanishes where p has mass: cross entropy is infinite")
    return float(-np.sum(p[support] * np.log(q[support])))


def smoothed_cross_entropy(p, q, epsilon: float) -> float:
    """``(1 - eps) H(p, q) + eps H(u, q)`` with ``u`` uniform; natural log.

    ``q`` must be strictly positive, since ``u`` has mass everywhere.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if np.any(q <= 0):
        raise ValueError("q must be strictly positive")
    u = np.full(q.shape, 1.0 / q.size)
    return (1.0 - epsilon) * cross_entropy(p, q) + epsilon * cross_entropy(u, q)


# --------------------------------------------------------------------------
# file format


def parse_nbest_file(stream: IO[str] | Iterable[str]) -> dict[str, NBestSet]:
    """Parse an n-best file into ``{utt_id: NBestSet}`` in first-seen order."""
    groups: dict[str, list[Hypothesis]] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise FormatError(f"line {lineno}: expected 3 or 4 tab-separated fields, "
                              f"got {len(fields)}", lineno)
        utt_id, rank_text, text = fields[0], fields[1], fields[2]
        if not utt_id or any(c.isspace() for c in utt_id):
            raise FormatError(f"line {lineno}: bad utterance id {utt_id!r}", lineno)
        if not _RANK.fullmatch(rank_text) or int(rank_text) < 1:
            raise FormatError(f"line {lineno}: malformed rank {rank_text!r}", lineno)
        rank = int(rank_text)
        tokens = tuple(text.split())
        if not tokens:
            raise FormatError(f"line {lineno}: empty hypothesis text", lineno)
        score = None
        if len(fields) == 4:
            try:
                score = float(fields[3])
            except ValueError:
                raise FormatError(f"line {lineno}: malformed score {fields[3]!r}", lineno) from None
            if not math.isfinite(score):
                raise FormatError(f"line {lineno}: non-finite score", lineno)
        hyps = groups.setdefault(utt_id, [])
        if rank <= len(hyps):
            raise FormatError(f"line {lineno}: duplicate rank {rank} for {utt_id}", lineno)
        if rank != len(hyps) + 1:
            raise FormatError(f"line {lineno}: non-contiguous ranks for {utt_id} "
                              f"(expected {len(hyps) + 1}, got {rank})", lineno)
        hyps.append(Hypothesis(tokens, score))
    return {k: NBestSet(k, tuple(v)) for k, v in groups.items()}


def format_nbest(sets: Iterable[NBestSet]) -> str:
    lines = []
    for s in sets:
        for rank, hyp in enumerate(s.hypotheses, start=1):
            line = f"{s.utt_id}\t{rank}\t{' '.join(hyp.tokens)}"
            if hyp.score is not None:
                line += f"\t{hyp.score!r}"
            lines.append(line)
    return "".join(line + "\n" for line in lines)


def write_nbest(sets: Mapping[str, NBestSet] | Iterable[NBestSet], path) -> None:
    if isinstance(sets, Mapping):
        sets = sets.values()
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_nbest(sets))


def read_nbest(path) -> dict[str, NBestSet]:
    with open(path, encoding="utf-8") as f:
        return parse_nbest_file(f)
