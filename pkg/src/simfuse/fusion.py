"""Score fusion: calibrated per-model weights, weighted combination, and
the final classification rule.

Per-model validation metrics are softmax-normalized into a probability
triple (alpha, beta, gamma) weighting the Jaccard, CNN and TF-IDF scores.
Fusion is either the plain weighted sum or a small trained combiner over
the weighted triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .cnn import TrainConfig
from .errors import ConfigError, DegenerateData, DimensionError, FormatError

SIMILAR = "similar"
DIFFERENT = "different"

WEIGHTED_SUM = "weighted_sum"
LEARNED = "learned"

_FUSION_HEADER = "simfuse-fusion v1"
_COMBINER_HIDDEN = 4


@dataclass(frozen=True)
class FusionWeights:
    """Probability triple weighting (jaccard, w2v-cnn, tfidf) scores."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        total = self.alpha + self.beta + self.gamma
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"fusion weights must sum to 1, got {total}")
        if not all(0.0 < w < 1.0 for w in (self.alpha, self.beta, self.gamma)):
            raise ValueError("fusion weights must lie strictly in (0, 1)")

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])


#: Default weights for the accuracy-calibrated fused scorer.
DEFAULT_WEIGHTS = FusionWeights(alpha=0.38, beta=0.40, gamma=0.22)


@dataclass(frozen=True)
class FusionNet:
    """Shallow combiner: 3 -> hidden ReLU -> sigmoid scalar."""

    hidden_w: np.ndarray  # (h_f, 3)
    hidden_b: np.ndarray  # (h_f,)
    out_w: np.ndarray     # (h_f,)
    out_b: float

    def __post_init__(self):
        h = self.hidden_b.shape[0]
        if self.hidden_w.shape != (h, 3) or self.out_w.shape != (h,):
            raise ValueError("fusion net shapes are inconsistent")


@dataclass(frozen=True)
class FusionParams:
    mode: str = WEIGHTED_SUM
    net: FusionNet | None = None

    def __post_init__(self):
        if self.mode not in (WEIGHTED_SUM, LEARNED):
            raise ConfigError(f"unknown fusion mode {self.mode!r}")
        if self.mode == LEARNED and self.net is None:
            raise ConfigError("learned fusion mode requires a trained combiner")


def calibrate_weights(metric_jaccard: float, metric_w2vcnn: float,
                      metric_tfidf: float) -> FusionWeights:
    """Softmax over the three per-model metrics, in (jaccard, cnn, tfidf) order."""
    metrics = np.array([metric_jaccard, metric_w2vcnn, metric_tfidf], dtype=np.float64)
    shifted = np.exp(metrics - metrics.max())
    alpha, beta, gamma = shifted / shifted.sum()
    return FusionWeights(alpha=float(alpha), beta=float(beta), gamma=float(gamma))


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _net_forward(net: FusionNet, triple: np.ndarray) -> dict:
    hidden_pre = net.hidden_w @ triple + net.hidden_b
    hidden = np.maximum(hidden_pre, 0.0)
    logit = float(net.out_w @ hidden + net.out_b)
    return {"hidden_pre": hidden_pre, "hidden": hidden, "logit": logit}


def fuse(scores: tuple[float, float, float], weights: FusionWeights,
         params: FusionParams) -> float:
    """Combine (jaccard, w2vcnn, tfidf) scores into one value in [0, 1]."""
    weighted = weights.as_array() * np.asarray(scores, dtype=np.float64)
    if params.mode == WEIGHTED_SUM:
        # the weight triple can sum to 1 +- 1 ulp; keep the contract exact
        return float(min(1.0, weighted.sum()))
    if params.net is None:
        raise ConfigError("learned fusion mode requires a trained combiner")
    return _sigmoid(_net_forward(params.net, weighted)["logit"])


def train_fusion(triples: Sequence[tuple[float, float, float]],
                 labels: Sequence[float], weights: FusionWeights,
                 config: TrainConfig) -> tuple[FusionParams, list[float]]:
    """SGD cross-entropy training of the shallow combiner on weighted triples.

    Deterministic for a fixed seed.  Raises DegenerateData when the labels
    contain fewer than two distinct values.
    """
    if len(triples) != len(labels):
        raise DimensionError("triples and labels must have equal length")
    if len(set(labels)) < 2:
        raise DegenerateData("fusion training needs both label classes")
    inputs = weights.as_array() * np.asarray(triples, dtype=np.float64)
    target = np.asarray(labels, dtype=np.float64)

    rng = np.random.default_rng(config.seed)
    h = _COMBINER_HIDDEN
    bound_in, bound_out = 1.0 / math.sqrt(3), 1.0 / math.sqrt(h)
    hidden_w = rng.uniform(-bound_in, bound_in, size=(h, 3))
    hidden_b = rng.uniform(-bound_in, bound_in, size=h)
    out_w = rng.uniform(-bound_out, bound_out, size=h)
    out_b = float(rng.uniform(-bound_out, bound_out, size=1)[0])

    n = len(inputs)
    epoch_losses: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            g_hw = np.zeros_like(hidden_w)
            g_hb = np.zeros_like(hidden_b)
            g_ow = np.zeros_like(out_w)
            g_ob = 0.0
            for idx in batch:
                x, y = inputs[idx], target[idx]
                hidden_pre = hidden_w @ x + hidden_b
                hidden = np.maximum(hidden_pre, 0.0)
                logit = float(out_w @ hidden + out_b)
                total += max(logit, 0.0) + math.log1p(math.exp(-abs(logit))) - y * logit
                dlogit = _sigmoid(logit) - y
                g_ow += dlogit * hidden
                g_ob += dlogit
                dh = dlogit * out_w * (hidden_pre > 0.0)
                g_hw += np.outer(dh, x)
                g_hb += dh
            lr = config.learning_rate / len(batch)
            hidden_w -= lr * g_hw
            hidden_b -= lr * g_hb
            out_w -= lr * g_ow
            out_b -= lr * g_ob
        epoch_losses.append(total / n)
    net = FusionNet(hidden_w=hidden_w, hidden_b=hidden_b, out_w=out_w, out_b=out_b)
    return FusionParams(mode=LEARNED, net=net), epoch_losses


def classify(score: float) -> str:
    """Similar when the score is closer to 1 than to 0; ties go to similar."""
    return SIMILAR if score >= 0.5 else DIFFERENT


def scale_to_sts(score: float) -> float:
    """Map a [0, 1] similarity onto the graded 0..5 scale."""
    return 5.0 * score


def save_fusion_params(weights: FusionWeights, params: FusionParams,
                       stream: IO[str]) -> None:
    """Header, weight triple, then combiner tensors for the learned mode."""
    stream.write(_FUSION_HEADER + "\n")
    stream.write(" ".join(format(w, ".17g") for w in weights.as_array()) + "\n")
    if params.mode == LEARNED and params.net is not None:
        net = params.net
        for name, tensor in [
            ("hidden_w", net.hidden_w.ravel()),
            ("hidden_b", net.hidden_b),
            ("out_w", net.out_w),
            ("out_b", np.array([net.out_b])),
        ]:
            values = " ".join(format(x, ".17g") for x in tensor)
            stream.write(f"{name} {values}\n")


def load_fusion_params(stream: IO[str]) -> tuple[FusionWeights, FusionParams]:
    lines = [line.rstrip("\n") for line in stream if line.strip()]
    if not lines or lines[0] != _FUSION_HEADER:
        raise FormatError("bad fusion parameter header")
    if len(lines) < 2:
        raise FormatError("fusion parameter file missing the weight triple")
    try:
        alpha, beta, gamma = (float(x) for x in lines[1].split())
    except ValueError:
        raise FormatError("fusion weight line must hold three numbers") from None
    weights = FusionWeights(alpha=alpha, beta=beta, gamma=gamma)
    if len(lines) == 2:
        return weights, FusionParams(mode=WEIGHTED_SUM, net=None)
    sections: dict[str, np.ndarray] = {}
    for line in lines[2:]:
        name, _, rest = line.partition(" ")
        sections[name] = np.array([float(x) for x in rest.split()], dtype=np.float64)
    missing = {"hidden_w", "hidden_b", "out_w", "out_b"} - set(sections)
    if missing:
        raise FormatError(f"missing fusion net sections: {sorted(missing)}")
    h = sections["hidden_b"].size
    if sections["hidden_w"].size != 3 * h:
        raise FormatError("fusion hidden weight size mismatch")
    net = FusionNet(
        hidden_w=sections["hidden_w"].reshape(h, 3),
        hidden_b=sections["hidden_b"],
        out_w=sections["out_w"],
        out_b=float(sections["out_b"][0]),
    )
    return weights, FusionParams(mode=LEARNED, net=net)
