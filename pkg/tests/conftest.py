import numpy as np
import pytest

from seqaug.core import FeatureSequence, Utterance

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture
def make_utt():
    def make(utt_id="u1", n_frames=10, dim=3, labels=("a", "b"), start=1.0):
        frames = (np.arange(n_frames * dim, dtype=np.float32).reshape(n_frames, dim) + start)
        return Utterance(utt_id, FeatureSequence(frames), labels)
    return make


@pytest.fixture
def tagged():
    """Frames whose first column is a unique nonzero tag (1-based frame index)."""
    def make(n_frames, dim=2):
        frames = np.zeros((n_frames, dim), dtype=np.float64)
        frames[:, 0] = np.arange(1, n_frames + 1)
        frames[:, 1:] = 0.5
        return FeatureSequence(frames)
    return make
