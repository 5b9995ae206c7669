"""Toy length-mismatch experiment: train on short utterances, test on long ones.

Two frame patterns carry the class. ``offset`` dims hold a small
class-signed constant. ``onset`` dims hold an exponentially decaying burst
at the start of class-1 utterances only. Time-averaging dilutes the burst
by the utterance length, so a model fit at ``t_train`` frames that leans
on the burst places its boundary too high for ``t_test`` frames.

The classifier is logistic regression on time-averaged frames, trained by
full-batch gradient descent with one step per epoch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FeatureSequence, LengthPerturbConfig, TrainingError, Utterance
from .lenperturb import perturb_features
from .rng import derive_stream


@dataclass(frozen=True)
class TaskConfig:
    dim: int = 8
    t_train: int = 40
    t_test: int = 120
    n_per_class: int = 200
    noise: float = 1.0
    offset: float = 0.1
    onset_amp: float = 3.0
    onset_decay: float = 4.0  # frames
    onset_dims: int = 4

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not 0 < self.onset_dims < self.dim:
            raise ValueError("onset_dims must leave at least one offset dim")
        if self.n_per_class < 2:
            raise ValueError("need at least 2 utterances per class")


@dataclass
class Split:
    utterances: list[Utterance]
    labels: np.ndarray  # 0/1, alternating

    def pooled(self) -> np.ndarray:
        return np.stack([u.features.frames.mean(axis=0) for u in self.utterances])


@dataclass
class SyntheticTask:
    config: TaskConfig
    seed: int
    train: Split
    test: Split


def class_pattern(cfg: TaskConfig, label: int, length: int) -> np.ndarray:
    """Noise-free ``length x dim`` frames for one class."""
    n_off = cfg.dim - cfg.onset_dims
    out = np.zeros((length, cfg.dim))
    out[:, :n_off] = cfg.offset if label else -cfg.offset
    if label:
        t = np.arange(length, dtype=np.float64)
        out[:, n_off:] = cfg.onset_amp * np.exp(-t / cfg.onset_decay)[:, None]
    return out


def _make_split(cfg: TaskConfig, length: int, prefix: str, rng: np.random.Generator) -> Split:
    patterns = [class_pattern(cfg, 0, length), class_pattern(cfg, 1, length)]
    utts, labels = [], []
    for i in range(2 * cfg.n_per_class):
        label = i % 2
        frames = patterns[label] + cfg.noise * rng.standard_normal((length, cfg.dim))
        utts.append(Utterance(f"{prefix}{i:05d}", FeatureSequence(frames), (str(label),)))
        labels.append(label)
    return Split(utts, np.array(labels, dtype=np.float64))


def generate_task(cfg: TaskConfig | None = None, seed: int = 0) -> SyntheticTask:
    cfg = cfg or TaskConfig()
    rng = np.random.default_rng(seed)
    train = _make_split(cfg, cfg.t_train, "train", rng)
    test = _make_split(cfg, cfg.t_test, "test", rng)
    return SyntheticTask(cfg, seed, train, test)


# --------------------------------------------------------------------------
# logistic regression


def _design(x: np.ndarray) -> np.ndarray:
    return np.hstack([x, np.ones((x.shape[0], 1))])


def logistic_loss(w: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    """Mean negative log-likelihood; ``X`` already carries the bias column."""
    z = X @ w
    # log(1 + e^z) - y z, computed stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def logistic_grad(w: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    z = X @ w
    p = 0.5 * (1.0 + np.tanh(0.5 * z))
    return X.T @ (p - y) / X.shape[0]


def safe_step(X: np.ndarray) -> float:
    """``1/L`` for the loss's gradient Lipschitz bound ``L = lambda_max(X^T X) / 4n``."""
    lam = np.linalg.eigvalsh(X.T @ X / X.shape[0]).max()
    return 4.0 / lam


@dataclass
class Model:
    weights: np.ndarray  # last entry is the bias
    losses: list[float] = field(default_factory=list)
    augmented: bool = False

    def predict(self, pooled: np.ndarray) -> np.ndarray:
        return (_design(pooled) @ self.weights > 0).astype(np.float64)


def train_classifier(task: SyntheticTask, lp_cfg: LengthPerturbConfig | None = None,
                     epochs: int = 300, seed: int = 0, step: float | None = None) -> Model:
    """Full-batch gradient descent, one step per epoch.

    With ``lp_cfg`` every epoch re-perturbs the training utterances using
    the stream for ``(seed, id, epoch)`` before pooling. ``losses[k]`` is
    the loss on the features of epoch ``k`` before its step.
    """
    split = task.train
    y = split.labels
    X_clean = _design(split.pooled())
    w = np.zeros(X_clean.shape[1])
    if step is None:
        step = safe_step(X_clean)
    model = Model(w, augmented=lp_cfg is not None)
    for epoch in range(1, epochs + 1):
        if lp_cfg is None:
            X = X_clean
        else:
            pooled = [
                perturb_features(u.features, lp_cfg, derive_stream(seed, u.id, epoch))[0]
                .frames.mean(axis=0)
                for u in split.utterances
            ]
            X = _design(np.stack(pooled))
        loss = logistic_loss(w, X, y)
        if not np.isfinite(loss):
            raise TrainingError(f"non-finite loss at epoch {epoch}")
        model.losses.append(loss)
        w = w - step * logistic_grad(w, X, y)
    model.weights = w
    return model


def evaluate(model: Model, split: Split) -> float:
    return float(np.mean(model.predict(split.pooled()) == split.labels))


BEST_SWB = LengthPerturbConfig(p_s=0.7, r_s=0.1, T_s=7, p_p=0.7, r_p=0.1, T_p=3)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    baseline: float
    augmented: float
    train_accuracy: float


def run_seed(seed: int, lp_cfg: LengthPerturbConfig = BEST_SWB, epochs: int = 300,
             cfg: TaskConfig | None = None) -> SeedResult:
    task = generate_task(cfg, seed)
    base = train_classifier(task, None, epochs, seed)
    aug = train_classifier(task, lp_cfg, epochs, seed)
    return SeedResult(seed, evaluate(base, task.test), evaluate(aug, task.test),
                      evaluate(base, task.train))


def simulate(n_seeds: int = 10, lp_cfg: LengthPerturbConfig = BEST_SWB, epochs: int = 300,
             cfg: TaskConfig | None = None) -> list[SeedResult]:
    return [run_seed(s, lp_cfg, epochs, cfg) for s in range(n_seeds)]


def wins(results: list[SeedResult]) -> int:
    return sum(r.augmented >= r.baseline for r in results)


def format_results(results: list[SeedResult]) -> str:
    from .stats import format_report

    pairs = []
    for r in results:
        pairs += [(f"seed{r.seed}_baseline", f"{r.baseline:.4f}"),
                  (f"seed{r.seed}_augmented", f"{r.augmented:.4f}")]
    pairs += [("seeds", len(results)), ("wins", wins(results))]
    return format_report(pairs)
