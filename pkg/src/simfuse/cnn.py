"""Convolution + max-pooling similarity scorer over attention-weighted
sentence matrices, with from-scratch training.

Shared filters slide along the token axis of each sentence (valid
positions over true tokens only, so zero padding never reaches the
pooling stage), max-over-time pooling yields one feature vector per
sentence, and a small dense head scores the symmetric combination
(|f_A - f_B|, f_A * f_B).  Everything is plain numpy; gradients are
implemented by hand and verifiable against central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import IO, Sequence

import numpy as np

from .attention import weighted_pair_matrices
from .corpus import BINARY, Dataset
from .embedding import EmbeddingTable, SentenceMatrix
from .errors import ConfigError, FormatError, LabelKindError

DEFAULT_FILTERS = 32
DEFAULT_KERNEL_WIDTH = 3
DEFAULT_HIDDEN = 16
DEFAULT_N_MAX = 32

_CNN_MAGIC = "simfuse-cnn"
_FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class CnnParams:
    """Trainable parameters; dimensions are fixed at construction."""

    filters: np.ndarray      # (F, k, d)
    filter_bias: np.ndarray  # (F,)
    dense_w: np.ndarray      # (h, 2F)
    dense_b: np.ndarray      # (h,)
    out_w: np.ndarray        # (h,)
    out_b: float
    rng_seed: int = 0

    def __post_init__(self):
        f, k, d = self.filters.shape
        h = self.dense_b.shape[0]
        if self.filter_bias.shape != (f,):
            raise ValueError("filter_bias shape mismatch")
        if self.dense_w.shape != (h, 2 * f):
            raise ValueError("dense weight shape mismatch")
        if self.out_w.shape != (h,):
            raise ValueError("output weight shape mismatch")
        tensors = [self.filters, self.filter_bias, self.dense_w, self.dense_b, self.out_w]
        if not all(np.all(np.isfinite(t)) for t in tensors) or not math.isfinite(self.out_b):
            raise ValueError("parameters must be finite")

    @property
    def n_filters(self) -> int:
        return self.filters.shape[0]

    @property
    def kernel_width(self) -> int:
        return self.filters.shape[1]

    @property
    def dim(self) -> int:
        return self.filters.shape[2]

    @property
    def hidden(self) -> int:
        return self.dense_b.shape[0]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 50
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")


def init_params(dim: int, n_filters: int = DEFAULT_FILTERS,
                kernel_width: int = DEFAULT_KERNEL_WIDTH,
                hidden: int = DEFAULT_HIDDEN, seed: int = 0) -> CnnParams:
    """Uniform fan-in-scaled initialization, deterministic for a seed."""
    rng = np.random.default_rng(seed)

    def uniform(fan_in, *shape):
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    return CnnParams(
        filters=uniform(kernel_width * dim, n_filters, kernel_width, dim),
        filter_bias=uniform(kernel_width * dim, n_filters),
        dense_w=uniform(2 * n_filters, hidden, 2 * n_filters),
        dense_b=uniform(2 * n_filters, hidden),
        out_w=uniform(hidden, hidden),
        out_b=float(uniform(hidden, 1)[0]),
        rng_seed=seed,
    )


def _windows(matrix: SentenceMatrix, k: int) -> np.ndarray:
    """Stacked convolution windows over true tokens, shape (P, k*d).

    Sentences shorter than the kernel get a single window zero-padded to
    width k; otherwise windows cover positions 0..L-k so padding never
    enters a window.
    """
    length = matrix.true_length
    rows = matrix.true_rows()
    if length < k:
        padded = np.zeros((k, matrix.dim))
        padded[:length] = rows
        return padded.reshape(1, k * matrix.dim)
    p = length - k + 1
    out = np.empty((p, k * matrix.dim))
    for i in range(p):
        out[i] = rows[i : i + k].ravel()
    return out


def _conv_forward(params: CnnParams, matrix: SentenceMatrix) -> dict:
    windows = _windows(matrix, params.kernel_width)
    flat_filters = params.filters.reshape(params.n_filters, -1)
    pre = windows @ flat_filters.T + params.filter_bias  # (P, F)
    act = np.maximum(pre, 0.0)
    best = act.argmax(axis=0)
    feats = act[best, np.arange(params.n_filters)]
    return {"windows": windows, "pre": pre, "best": best, "feats": feats}


def _forward(params: CnnParams, a: SentenceMatrix, b: SentenceMatrix) -> dict:
    conv_a = _conv_forward(params, a)
    conv_b = _conv_forward(params, b)
    fa, fb = conv_a["feats"], conv_b["feats"]
    z = np.concatenate([np.abs(fa - fb), fa * fb])
    hidden_pre = params.dense_w @ z + params.dense_b
    hidden = np.maximum(hidden_pre, 0.0)
    logit = float(params.out_w @ hidden + params.out_b)
    return {
        "conv_a": conv_a, "conv_b": conv_b, "z": z,
        "hidden_pre": hidden_pre, "hidden": hidden, "logit": logit,
    }


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _bce_from_logit(logit: float, label: float) -> float:
    # softplus(logit) - label*logit, evaluated stably
    softplus = max(logit, 0.0) + math.log1p(math.exp(-abs(logit)))
    return softplus - label * logit


def cnn_forward(params: CnnParams, a: SentenceMatrix, b: SentenceMatrix) -> float:
    """Similarity score in (0, 1); exactly symmetric in its two inputs."""
    return _sigmoid(_forward(params, a, b)["logit"])


def _conv_backward(params: CnnParams, conv: dict, dfeats: np.ndarray,
                   grads: dict) -> None:
    n_filters = params.n_filters
    dact = np.zeros_like(conv["pre"])
    dact[conv["best"], np.arange(n_filters)] = dfeats
    dpre = dact * (conv["pre"] > 0.0)
    grads["filters"] += (dpre.T @ conv["windows"]).reshape(params.filters.shape)
    grads["filter_bias"] += dpre.sum(axis=0)


def loss_and_gradients(params: CnnParams, a: SentenceMatrix, b: SentenceMatrix,
                       label: float) -> tuple[float, dict]:
    """Cross-entropy loss for one pair and its analytic parameter gradients."""
    cache = _forward(params, a, b)
    loss = _bce_from_logit(cache["logit"], label)
    dlogit = _sigmoid(cache["logit"]) - label

    dhidden = dlogit * params.out_w
    dhidden_pre = dhidden * (cache["hidden_pre"] > 0.0)
    dz = params.dense_w.T @ dhidden_pre
    grads = {
        "filters": np.zeros_like(params.filters),
        "filter_bias": np.zeros_like(params.filter_bias),
        "dense_w": np.outer(dhidden_pre, cache["z"]),
        "dense_b": dhidden_pre,
        "out_w": dlogit * cache["hidden"],
        "out_b": dlogit,
    }

    n_filters = params.n_filters
    dabs, dprod = dz[:n_filters], dz[n_filters:]
    fa, fb = cache["conv_a"]["feats"], cache["conv_b"]["feats"]
    sign = np.sign(fa - fb)
    _conv_backward(params, cache["conv_a"], dabs * sign + dprod * fb, grads)
    _conv_backward(params, cache["conv_b"], -dabs * sign + dprod * fa, grads)
    return loss, grads


def _apply_update(params: CnnParams, grads: dict, lr: float) -> CnnParams:
    return replace(
        params,
        filters=params.filters - lr * grads["filters"],
        filter_bias=params.filter_bias - lr * grads["filter_bias"],
        dense_w=params.dense_w - lr * grads["dense_w"],
        dense_b=params.dense_b - lr * grads["dense_b"],
        out_w=params.out_w - lr * grads["out_w"],
        out_b=params.out_b - lr * grads["out_b"],
    )


def cnn_train(dataset: Dataset, table: EmbeddingTable, config: TrainConfig,
              n_filters: int = DEFAULT_FILTERS,
              kernel_width: int = DEFAULT_KERNEL_WIDTH,
              hidden: int = DEFAULT_HIDDEN,
              n_max: int = DEFAULT_N_MAX) -> tuple[CnnParams, list[float]]:
    """Mini-batch SGD on binary cross-entropy; deterministic for a seed.

    Attention-weighted inputs are precomputed once (the attention stage
    has no trainable parameters).  Returns the trained parameters and the
    mean training loss per epoch.
    """
    if dataset.label_kind != BINARY:
        raise LabelKindError("CNN training requires a binary-labeled dataset")
    inputs = [
        weighted_pair_matrices(pair.a, pair.b, table, n_max) + (pair.label,)
        for pair in dataset
    ]
    params = init_params(table.dim, n_filters=n_filters, kernel_width=kernel_width,
                         hidden=hidden, seed=config.seed)
    rng = np.random.default_rng(config.seed)
    n = len(inputs)
    epoch_losses: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            summed: dict | None = None
            for idx in batch:
                mat_a, mat_b, label = inputs[idx]
                loss, grads = loss_and_gradients(params, mat_a, mat_b, label)
                total += loss
                if summed is None:
                    summed = grads
                else:
                    for key in summed:
                        summed[key] += grads[key]
            assert summed is not None
            scale = 1.0 / len(batch)
            for key in summed:
                summed[key] *= scale
            params = _apply_update(params, summed, config.learning_rate)
        epoch_losses.append(total / n)
    return params, epoch_losses


def _param_items(params: CnnParams) -> list[tuple[str, np.ndarray]]:
    return [
        ("filters", params.filters),
        ("filter_bias", params.filter_bias),
        ("dense_w", params.dense_w),
        ("dense_b", params.dense_b),
        ("out_w", params.out_w),
        ("out_b", np.array([params.out_b])),
    ]


def _with_tensor(params: CnnParams, name: str, tensor: np.ndarray) -> CnnParams:
    if name == "out_b":
        return replace(params, out_b=float(tensor[0]))
    return replace(params, **{name: tensor})


def numeric_gradients(params: CnnParams, a: SentenceMatrix, b: SentenceMatrix,
                      label: float, epsilon: float) -> dict:
    """Central-difference gradients of the cross-entropy loss."""
    grads = {}
    for name, tensor in _param_items(params):
        grad = np.zeros_like(tensor)
        flat = tensor.ravel()
        for i in range(flat.size):
            bumped = tensor.copy()
            bumped.ravel()[i] = flat[i] + epsilon
            loss_hi = _bce_from_logit(
                _forward(_with_tensor(params, name, bumped), a, b)["logit"], label)
            bumped.ravel()[i] = flat[i] - epsilon
            loss_lo = _bce_from_logit(
                _forward(_with_tensor(params, name, bumped), a, b)["logit"], label)
            grad.ravel()[i] = (loss_hi - loss_lo) / (2.0 * epsilon)
        grads[name] = grad
    return grads


def max_relative_error(analytic: dict, numeric: dict) -> float:
    """Largest elementwise |ga - gn| / max(|ga|, |gn|, 1e-12) across tensors."""
    worst = 0.0
    for name, num in numeric.items():
        ana = np.asarray(analytic[name], dtype=np.float64).reshape(num.shape)
        denom = np.maximum(np.maximum(np.abs(ana), np.abs(num)), 1e-12)
        worst = max(worst, float(np.max(np.abs(ana - num) / denom)))
    return worst


def gradient_check(params: CnnParams, example: tuple[SentenceMatrix, SentenceMatrix, float],
                   epsilon: float = 1e-4) -> float:
    """Worst-case relative error between analytic and numeric gradients."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    mat_a, mat_b, label = example
    _, analytic = loss_and_gradients(params, mat_a, mat_b, label)
    analytic = dict(analytic)
    analytic["out_b"] = np.array([analytic["out_b"]])
    numeric = numeric_gradients(params, mat_a, mat_b, label, epsilon)
    return max_relative_error(analytic, numeric)


def save_cnn_params(params: CnnParams, stream: IO[str]) -> None:
    """Versioned text serialization; round-trips float64 bitwise."""
    header = (
        f"{_CNN_MAGIC} {_FORMAT_VERSION} {params.n_filters} "
        f"{params.kernel_width} {params.dim} {params.hidden}"
    )
    stream.write(header + "\n")
    stream.write(f"rng_seed {params.rng_seed}\n")
    for name, tensor in _param_items(params):
        values = " ".join(format(x, ".17g") for x in tensor.ravel())
        stream.write(f"{name} {values}\n")


def load_cnn_params(stream: IO[str]) -> CnnParams:
    lines = [line.rstrip("\n") for line in stream if line.strip()]
    if not lines:
        raise FormatError("empty CNN parameter file")
    header = lines[0].split()
    if len(header) != 6 or header[0] != _CNN_MAGIC or header[1] != _FORMAT_VERSION:
        raise FormatError(f"bad CNN parameter header: {lines[0]!r}")
    n_filters, kernel_width, dim, hidden = (int(x) for x in header[2:])
    shapes = {
        "filters": (n_filters, kernel_width, dim),
        "filter_bias": (n_filters,),
        "dense_w": (hidden, 2 * n_filters),
        "dense_b": (hidden,),
        "out_w": (hidden,),
        "out_b": (1,),
    }
    seed = 0
    tensors: dict[str, np.ndarray] = {}
    for line in lines[1:]:
        name, _, rest = line.partition(" ")
        if name == "rng_seed":
            seed = int(rest)
            continue
        if name not in shapes:
            raise FormatError(f"unknown CNN parameter section {name!r}")
        values = np.array([float(x) for x in rest.split()], dtype=np.float64)
        expected = int(np.prod(shapes[name]))
        if values.size != expected:
            raise FormatError(f"section {name!r} has {values.size} values, expected {expected}")
        tensors[name] = values.reshape(shapes[name])
    missing = set(shapes) - set(tensors)
    if missing:
        raise FormatError(f"missing CNN parameter sections: {sorted(missing)}")
    return CnnParams(
        filters=tensors["filters"],
        filter_bias=tensors["filter_bias"],
        dense_w=tensors["dense_w"],
        dense_b=tensors["dense_b"],
        out_w=tensors["out_w"],
        out_b=float(tensors["out_b"][0]),
        rng_seed=seed,
    )
