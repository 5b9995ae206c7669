"""Hot loops: xoshiro256** stepping and the frame drop/insert kernels.

The generator primitives exist in two flavors with identical output: a
uint64 flavor compiled by numba and a Python-int flavor used when numba is
disabled. Everything above the primitives is single-source, or has a
vectorized numpy twin selected by :data:`seqaug._accel.USE_NUMBA`.

Generator state is a ``uint64[4]`` array mutated in place.
"""

import numpy as np

from ._accel import USE_NUMBA, jit

MASK64 = (1 << 64) - 1
TWO_POW_M53 = 1.0 / 9007199254740992.0


# --------------------------------------------------------------------------
# Python-int flavor (always defined; reference for the compiled flavor)


def _rotl_py(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK64


def next_u64_py(s):
    s0, s1, s2, s3 = int(s[0]), int(s[1]), int(s[2]), int(s[3])
    result = (_rotl_py((s1 * 5) & MASK64, 7) * 9) & MASK64
    t = (s1 << 17) & MASK64
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl_py(s3, 45)
    s[0] = s0
    s[1] = s1
    s[2] = s2
    s[3] = s3
    return result


def unit_real_py(s):
    return (next_u64_py(s) >> 11) * TWO_POW_M53


def int_inclusive_py(s, a, b):
    a = int(a)
    b = int(b)
    if b <= a:
        return a
    span = b - a
    shift = 64 - span.bit_length()
    while True:
        r = next_u64_py(s) >> shift
        if r <= span:
            return a + r


# --------------------------------------------------------------------------
# uint64 flavor


if USE_NUMBA:
    _U5 = np.uint64(5)
    _U9 = np.uint64(9)
    _U7 = np.uint64(7)
    _U57 = np.uint64(57)
    _U17 = np.uint64(17)
    _U45 = np.uint64(45)
    _U19 = np.uint64(19)
    _U11 = np.uint64(11)

    @jit
    def next_u64_nb(s):
        s1 = s[1]
        x = s1 * _U5
        result = ((x << _U7) | (x >> _U57)) * _U9
        t = s1 << _U17
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s3 = s[3]
        s[3] = (s3 << _U45) | (s3 >> _U19)
        return result

    @jit
    def unit_real_nb(s):
        return np.float64(next_u64_nb(s) >> _U11) * TWO_POW_M53

    @jit
    def int_inclusive_nb(s, a, b):
        if b <= a:
            return a
        span = b - a
        nbits = 0
        v = span
        while v > 0:
            nbits += 1
            v >>= 1
        shift = np.uint64(64 - nbits)
        uspan = np.uint64(span)
        while True:
            r = next_u64_nb(s) >> shift
            if r <= uspan:
                return a + np.int64(r)

    next_u64 = next_u64_nb
    unit_real = unit_real_nb
    int_inclusive = int_inclusive_nb
else:
    next_u64 = next_u64_py
    unit_real = unit_real_py
    int_inclusive = int_inclusive_py


# --------------------------------------------------------------------------
# Draw loops (single source)


@jit
def sample_without_replacement(s, n, m):
    """Partial Fisher-Yates: ``m`` distinct values of ``0..n-1`` in draw order.

    Step ``i`` draws ``j`` in ``[i, n-1]`` and swaps; the last step of a
    full permutation draws nothing.
    """
    pool = np.arange(n)
    for i in range(m):
        j = int_inclusive(s, i, n - 1)
        tmp = pool[i]
        pool[i] = pool[j]
        pool[j] = tmp
    return pool[:m].copy()


@jit
def draw_drop_runs(s, n_frames, n_starts, max_run):
    """Starts (without replacement), then one run length per start."""
    starts = sample_without_replacement(s, n_frames, n_starts)
    runs = np.empty(n_starts, dtype=np.int64)
    for k in range(n_starts):
        runs[k] = int_inclusive(s, 1, max_run)
    return starts, runs


@jit
def draw_insert_counts(s, n_frames, n_anchors, max_run):
    """Blank-frame count to insert after each original frame."""
    anchors = sample_without_replacement(s, n_frames, n_anchors)
    counts = np.zeros(n_frames, dtype=np.int64)
    for k in range(n_anchors):
        counts[anchors[k]] = int_inclusive(s, 1, max_run)
    return counts


# --------------------------------------------------------------------------
# Assembly (loop for numba, vectorized for numpy)


@jit
def _keep_mask_loop(n_frames, starts, runs):
    keep = np.ones(n_frames, dtype=np.bool_)
    for k in range(starts.shape[0]):
        stop = min(starts[k] + runs[k], n_frames)
        for i in range(starts[k], stop):
            keep[i] = False
    return keep


def _keep_mask_np(n_frames, starts, runs):
    # difference array over the original index space: +1 at start, -1 at stop
    delta = np.zeros(n_frames + 1, dtype=np.int64)
    stops = np.minimum(starts + runs, n_frames)
    np.add.at(delta, starts, 1)
    np.add.at(delta, stops, -1)
    return np.cumsum(delta[:-1]) == 0


@jit
def _expand_loop(frames, counts):
    n, d = frames.shape
    total = n + counts.sum()
    out = np.zeros((total, d), dtype=frames.dtype)
    pos = 0
    for i in range(n):
        for j in range(d):
            out[pos, j] = frames[i, j]
        pos += 1 + counts[i]
    return out


def _expand_np(frames, counts):
    n, d = frames.shape
    dest = np.arange(n) + np.concatenate(([0], np.cumsum(counts)[:-1]))
    out = np.zeros((n + int(counts.sum()), d), dtype=frames.dtype)
    out[dest] = frames
    return out


if USE_NUMBA:
    keep_mask = _keep_mask_loop
    expand_with_blanks = _expand_loop
else:
    keep_mask = _keep_mask_np
    expand_with_blanks = _expand_np


@jit
def drop_runs_apply(s, frames, n_starts, max_run, min_out):
    """Draw runs and gather survivors; ``applied`` is False below ``min_out``."""
    n = frames.shape[0]
    starts, runs = draw_drop_runs(s, n, n_starts, max_run)
    keep = keep_mask(n, starts, runs)
    n_keep = keep.sum()
    if n_keep < min_out:
        return frames[:0], False
    return frames[keep], True


# --------------------------------------------------------------------------
# Batch Monte Carlo over one stream (length outcomes only)


@jit
def drop_lengths_batch(s, n_frames, n_starts, max_run, min_out, n_trials):
    out = np.empty(n_trials, dtype=np.int64)
    for trial in range(n_trials):
        starts, runs = draw_drop_runs(s, n_frames, n_starts, max_run)
        kept = keep_mask(n_frames, starts, runs).sum()
        out[trial] = kept if kept >= min_out else n_frames
    return out


@jit
def insert_lengths_batch(s, n_frames, n_anchors, max_run, n_trials):
    out = np.empty(n_trials, dtype=np.int64)
    for trial in range(n_trials):
        out[trial] = n_frames + draw_insert_counts(s, n_frames, n_anchors, max_run).sum()
    return out


@jit
def int_inclusive_batch(s, a, b, n):
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = int_inclusive(s, a, b)
    return out


@jit
def unit_real_batch(s, n):
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = unit_real(s)
    return out
