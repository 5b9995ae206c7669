import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqaug import _kernels as K
from seqaug._accel import USE_NUMBA
from seqaug.rng import RandomStream, derive_seed, derive_stream, fnv1a64, mix64, seed_state


def test_xoshiro_reference_vector():
    # published xoshiro256** outputs for state {1, 2, 3, 4}
    s = np.array([1, 2, 3, 4], dtype=np.uint64)
    assert [int(K.next_u64(s)) for _ in range(4)] == [11520, 0, 1509978240, 1215971899390074240]


def test_splitmix_reference():
    # first splitmix64 output for seed 0
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


def test_fnv1a_reference():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C


def test_derive_stream_golden():
    # frozen: any change to the seed recipe breaks reproducibility of old runs
    r = derive_stream(7, "utt1", 0)
    assert [r.next_u64() for _ in range(3)] == [
        11882958108578494025, 11259375971099096760, 10719579967824019533]


def test_derive_stream_is_pure():
    a = derive_stream(7, "utt1", 0)
    b = derive_stream(7, "utt1", 0)
    assert [a.next_u64() for _ in range(64)] == [b.next_u64() for _ in range(64)]


@pytest.mark.parametrize("other", [(7, "utt1", 1), (8, "utt1", 0), (7, "utt2", 0)])
def test_derive_stream_differs(other):
    a = derive_stream(7, "utt1", 0)
    b = derive_stream(*other)
    xs = [a.next_u64() for _ in range(64)]
    ys = [b.next_u64() for _ in range(64)]
    assert all(x != y for x, y in zip(xs, ys))


def test_negative_and_huge_seeds_wrap():
    assert derive_seed(-1, "u", 0) == derive_seed(2**64 - 1, "u", 0)


def test_negative_epoch_rejected():
    with pytest.raises(ValueError):
        derive_stream(0, "u", -1)


@pytest.mark.skipif(not USE_NUMBA, reason="compiled flavor not loaded")
def test_python_and_compiled_flavors_agree():
    s1 = seed_state(99)
    s2 = s1.copy()
    assert [int(K.next_u64_nb(s1)) for _ in range(500)] == [K.next_u64_py(s2) for _ in range(500)]
    for a, b in [(0, 0), (1, 2), (0, 9), (5, 1000), (0, 2**40)]:
        assert [int(K.int_inclusive_nb(s1, a, b)) for _ in range(50)] == \
               [K.int_inclusive_py(s2, a, b) for _ in range(50)]
    assert [K.unit_real_nb(s1) for _ in range(50)] == [K.unit_real_py(s2) for _ in range(50)]


def test_unit_real_range():
    r = RandomStream(3)
    x = K.unit_real_batch(r.state, 100_000)
    assert x.min() >= 0.0 and x.max() < 1.0
    assert abs(x.mean() - 0.5) < 0.005


@pytest.mark.parametrize("T", range(1, 11))
def test_int_inclusive_uniform(T):
    r = RandomStream(T)
    draws = K.int_inclusive_batch(r.state, 1, T, 1_000_000)
    counts = np.bincount(draws, minlength=T + 1)[1:]
    assert draws.min() >= 1 and draws.max() <= T
    freq = counts / draws.size
    assert np.all(np.abs(freq - 1 / T) <= 0.05 / T)


def test_int_inclusive_degenerate_draws_nothing():
    r = RandomStream(1)
    before = r.state.copy()
    assert r.next_int_inclusive(4, 4) == 4
    assert np.array_equal(before, r.state)
    with pytest.raises(ValueError):
        r.next_int_inclusive(5, 4)


@given(n=st.integers(1, 200), frac=st.floats(0, 1), seed=st.integers(0, 2**64 - 1))
@settings(max_examples=200, deadline=None)
def test_sample_without_replacement_properties(n, frac, seed):
    m = int(frac * n)
    got = RandomStream(seed).sample_without_replacement(n, m)
    assert len(got) == m
    assert len(set(got.tolist())) == m
    assert all(0 <= x < n for x in got)


@given(n=st.integers(1, 100), seed=st.integers(0, 2**32))
@settings(max_examples=100, deadline=None)
def test_full_sample_is_permutation(n, seed):
    got = RandomStream(seed).sample_without_replacement(n, n)
    assert sorted(got.tolist()) == list(range(n))


def test_sample_without_replacement_rejects_oversample():
    with pytest.raises(ValueError):
        RandomStream(0).sample_without_replacement(3, 4)


def test_copy_is_independent():
    a = RandomStream(5)
    b = a.copy()
    assert a.next_u64() == b.next_u64()
    a.next_u64()
    assert a.next_u64() != b.next_u64()
