"""File formats: FSEQ feature containers, CSV features, manifests, PGM images.

FSEQ layout (all little-endian)::

    offset 0   5 bytes   magic b"FSEQ1"
    offset 5   uint32    T (frames)
    offset 9   uint32    D (dims)
    offset 13  uint32    frame shift in microseconds
    offset 17  T*D float32, time-major
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import FeatureSequence, FormatError, Utterance

FSEQ_MAGIC = b"FSEQ1"
_HEADER = struct.Struct("<III")
HEADER_SIZE = len(FSEQ_MAGIC) + _HEADER.size


def encode_featseq(seq: FeatureSequence) -> bytes:
    t, d = seq.frames.shape
    shift_us = int(round(seq.frame_shift_ms * 1000))
    if shift_us < 1 or shift_us >= 2**32:
        raise ValueError(f"frame shift {seq.frame_shift_ms} ms does not fit the container")
    payload = np.ascontiguousarray(seq.frames, dtype="<f4").tobytes()
    return FSEQ_MAGIC + _HEADER.pack(t, d, shift_us) + payload


def decode_featseq(data: bytes) -> FeatureSequence:
    if len(data) < len(FSEQ_MAGIC) or data[:len(FSEQ_MAGIC)] != FSEQ_MAGIC:
        raise FormatError("bad magic at byte offset 0", 0)
    if len(data) < HEADER_SIZE:
        raise FormatError(f"truncated header at byte offset {len(data)}", len(data))
    t, d, shift_us = _HEADER.unpack_from(data, len(FSEQ_MAGIC))
    if t == 0 or d == 0:
        raise FormatError(f"empty matrix ({t} x {d}) declared at byte offset 5", 5)
    if shift_us == 0:
        raise FormatError("zero frame shift at byte offset 13", 13)
    expected = HEADER_SIZE + 4 * t * d
    if len(data) < expected:
        raise FormatError(f"truncated payload: {t} x {d} needs {expected} bytes, "
                          f"file ends at byte offset {len(data)}", len(data))
    if len(data) > expected:
        raise FormatError(f"trailing data at byte offset {expected}", expected)
    frames = np.frombuffer(data, dtype="<f4", offset=HEADER_SIZE).reshape(t, d)
    try:
        return FeatureSequence(frames.astype(np.float32), shift_us / 1000.0)
    except ValueError as exc:
        raise FormatError(f"invalid payload at byte offset {HEADER_SIZE}: {exc}",
                          HEADER_SIZE) from None


def write_featseq(seq: FeatureSequence, path) -> None:
    Path(path).write_bytes(encode_featseq(seq))


def read_csv_features(path, frame_shift_ms: float = 10.0) -> FeatureSequence:
    """One frame per line, comma-separated decimals, rounded to float32."""
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(x) for x in line.split(",")])
            except ValueError:
                raise FormatError(f"{path}: line {lineno}: malformed number", lineno) from None
            if len(rows[-1]) != len(rows[0]):
                raise FormatError(f"{path}: line {lineno}: expected {len(rows[0])} values, "
                                  f"got {len(rows[-1])}", lineno)
    if not rows:
        raise FormatError(f"{path}: no frames", 0)
    try:
        return FeatureSequence(np.array(rows, dtype=np.float32), frame_shift_ms)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}", 0) from None


def read_featseq(path) -> FeatureSequence:
    """Read an FSEQ file, or CSV when the name ends in ``.csv``."""
    if str(path).lower().endswith(".csv"):
        return read_csv_features(path)
    data = Path(path).read_bytes()
    try:
        return decode_featseq(data)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}", exc.where) from None


# --------------------------------------------------------------------------
# manifests


@dataclass(frozen=True)
class ManifestRecord:
    id: str
    features_path: str
    transcript: tuple[str, ...] = ()


@dataclass
class Manifest:
    """Ordered records; relative feature paths resolve against ``base_dir``."""

    records: list[ManifestRecord] = field(default_factory=list)
    base_dir: Path = Path(".")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def resolve(self, record: ManifestRecord) -> Path:
        p = Path(record.features_path)
        return p if p.is_absolute() else self.base_dir / p

    def load(self, record: ManifestRecord) -> Utterance:
        return Utterance(record.id, read_featseq(self.resolve(record)), record.transcript)

    def utterances(self):
        for record in self.records:
            yield self.load(record)


def parse_manifest(lines, base_dir=".") -> Manifest:
    records = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
            raise FormatError(f"line {lineno}: expected <id> TAB <features_path> "
                              f"[TAB <transcript>]", lineno)
        utt_id = fields[0]
        if any(c.isspace() for c in utt_id):
            raise FormatError(f"line {lineno}: whitespace in id {utt_id!r}", lineno)
        if utt_id in seen:
            raise FormatError(f"duplicate id {utt_id!r} on lines {seen[utt_id]} and {lineno}",
                              lineno)
        seen[utt_id] = lineno
        transcript = tuple(fields[2].split()) if len(fields) == 3 else ()
        records.append(ManifestRecord(utt_id, fields[1], transcript))
    return Manifest(records, Path(base_dir))


def read_manifest(path) -> Manifest:
    with open(path, encoding="utf-8") as f:
        try:
            return parse_manifest(f, Path(path).parent)
        except FormatError as exc:
            raise FormatError(f"{path}: {exc}", exc.where) from None


def format_manifest(records) -> str:
    return "".join(f"{r.id}\t{r.features_path}\t{' '.join(r.transcript)}\n" for r in records)


def write_manifest(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_manifest(records))


# --------------------------------------------------------------------------
# PGM rendering


def pgm_pixels(seq: FeatureSequence) -> np.ndarray:
    """``D x T`` uint8 image: row ``d`` is feature dim ``d``, column ``t`` is frame ``t``."""
    v = seq.frames.astype(np.float64).T
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.full(v.shape, 128, dtype=np.uint8)
    scaled = 255.0 * (v - lo) / (hi - lo)
    return np.floor(scaled + 0.5).astype(np.uint8)


def encode_pgm(seq: FeatureSequence) -> bytes:
    pixels = pgm_pixels(seq)
    height, width = pixels.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def render_pgm(seq: FeatureSequence, path) -> None:
    """Binary PGM, width T, height D, min-max scaled over the whole matrix."""
    try:
        with open(path, "wb") as f:
            f.write(encode_pgm(seq))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def read_pgm(path) -> np.ndarray:
    """Minimal P5 reader (maxval < 256, no comments) for round-trip checks."""
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if len(parts) < 4 or parts[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM", 0)
    width, height = int(parts[1]), int(parts[2])
    pixels = data[len(data) - width * height:]
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width)


def ensure_dir(path) -> Path:
    os.makedirs(path, exist_ok=True)
    return Path(path)
