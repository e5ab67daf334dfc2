"""Command-line surface: train a model bundle, score pair files, evaluate.

Exit codes: 0 success, 1 data/model error, 2 usage error.  All commands
are deterministic for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import pipeline
from .cnn import DEFAULT_N_MAX, TrainConfig, cnn_train
from .corpus import (BINARY, GRADED, ONE_IS_SIMILAR, ZERO_IS_SIMILAR, Dataset,
                     parse_pair_file)
from .embedding import load_text_embeddings
from .errors import ConfigError, FormatError, SimfuseError
from .fusion import (DEFAULT_WEIGHTS, LEARNED, WEIGHTED_SUM, FusionParams,
                     train_fusion)
from .metrics import MetricReport
from .tfidf import build_stats

EMBEDDINGS_ENV_VAR = "SIMFUSE_EMBEDDINGS"


@dataclass
class CliConfig:
    """Flat key=value configuration; command-line flags take precedence."""

    embedding_path: str | None = None
    n_max: int = DEFAULT_N_MAX
    seed: int = 0
    learning_rate: float = 0.05
    epochs: int = 50
    batch_size: int = 16
    label_convention: str = ONE_IS_SIMILAR
    fusion_mode: str = LEARNED
    weighting_factor: str = "accuracy"

    def __post_init__(self):
        if self.n_max < 1:
            raise ConfigError("n_max must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.label_convention not in (ONE_IS_SIMILAR, ZERO_IS_SIMILAR):
            raise ConfigError(f"unknown label_convention {self.label_convention!r}")
        if self.fusion_mode not in (WEIGHTED_SUM, LEARNED):
            raise ConfigError(f"unknown fusion_mode {self.fusion_mode!r}")
        if self.weighting_factor not in pipeline.CALIBRATION_FACTORS:
            raise ConfigError(f"unknown weighting_factor {self.weighting_factor!r}")


_CONFIG_PARSERS = {
    "embedding_path": str,
    "n_max": int,
    "seed": int,
    "learning_rate": float,
    "epochs": int,
    "batch_size": int,
    "label_convention": str,
    "fusion_mode": str,
    "weighting_factor": str,
}


def parse_config_file(path: str) -> CliConfig:
    overrides = {}
    with open(path, encoding="utf-8") as stream:
        for lineno, line in enumerate(stream, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"config line {lineno}: expected key = value")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_PARSERS:
                raise ConfigError(f"config line {lineno}: unknown key {key!r}")
            try:
                overrides[key] = _CONFIG_PARSERS[key](value)
            except ValueError:
                raise ConfigError(f"config line {lineno}: bad value for {key!r}") from None
    return CliConfig(**overrides)


def _resolve_config(args: argparse.Namespace) -> CliConfig:
    if getattr(args, "config", None):
        return parse_config_file(args.config)
    return CliConfig()


def _resolve_embeddings(args: argparse.Namespace, config: CliConfig) -> str:
    # Precedence: flag, then config file, then environment variable.
    path = getattr(args, "embeddings", None) or config.embedding_path \
        or os.environ.get(EMBEDDINGS_ENV_VAR)
    if not path:
        raise ConfigError(
            "no embeddings given (use --embeddings, embedding_path in the "
            f"config file, or {EMBEDDINGS_ENV_VAR})"
        )
    return path


def _load_pairs(path: str, label_kind: str, convention: str) -> Dataset:
    with open(path, encoding="utf-8") as stream:
        return parse_pair_file(stream, label_kind, convention)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def cmd_train(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    embeddings_path = _resolve_embeddings(args, config)
    dataset = _load_pairs(args.pairs, BINARY, config.label_convention)
    stats = build_stats(dataset)
    with open(embeddings_path, encoding="utf-8") as stream:
        table = load_text_embeddings(stream)
    train_config = TrainConfig(
        learning_rate=config.learning_rate, epochs=config.epochs,
        batch_size=config.batch_size, seed=config.seed,
    )
    cnn_params, cnn_losses = cnn_train(dataset, table, train_config, n_max=config.n_max)
    for epoch, loss in enumerate(cnn_losses, start=1):
        print(f"cnn_epoch\t{epoch}\t{_fmt(loss)}")

    triples = [
        pipeline.component_scores(pair, stats, table, cnn_params, config.n_max)
        for pair in dataset
    ]
    gold = [pair.label >= 0.5 for pair in dataset]
    weights = pipeline.weights_from_scores(triples, gold, config.weighting_factor)

    fusion_params, fusion_losses = train_fusion(
        triples, [pair.label for pair in dataset], weights, train_config)
    for epoch, loss in enumerate(fusion_losses, start=1):
        print(f"fusion_epoch\t{epoch}\t{_fmt(loss)}")
    if config.fusion_mode == WEIGHTED_SUM:
        fusion_params = FusionParams(mode=WEIGHTED_SUM, net=None)

    print(f"weights\t{_fmt(weights.alpha)}\t{_fmt(weights.beta)}\t{_fmt(weights.gamma)}")
    bundle = pipeline.ModelBundle(
        stats=stats, table=table, cnn_params=cnn_params, weights=weights,
        fusion_params=fusion_params, n_max=config.n_max,
    )
    pipeline.save_bundle(bundle, args.out)
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    bundle = pipeline.load_bundle(args.model, n_max=config.n_max)
    dataset = _load_pairs(args.pairs, BINARY, config.label_convention)
    for pair in dataset:
        scores = pipeline.score_with_bundle(bundle, pair)
        if args.format == "json":
            record = {
                "id": pair.id,
                "jaccard": scores.jaccard,
                "w2vcnn": scores.w2vcnn,
                "tfidf": scores.tfidf,
                "fused": scores.fused,
                "predicted": scores.predicted,
            }
            print(json.dumps(record))
        else:
            print("\t".join([
                pair.id, _fmt(scores.jaccard), _fmt(scores.w2vcnn),
                _fmt(scores.tfidf), _fmt(scores.fused), scores.predicted,
            ]))
    return 0


def _check_not_binary_shaped(dataset: Dataset) -> None:
    # A "graded" file whose every label is exactly 0 or 1 is almost
    # certainly a binary file passed with --graded; refuse rather than
    # report meaningless correlations.
    if dataset.pairs and all(pair.label in (0.0, 1.0) for pair in dataset):
        raise FormatError(
            "all labels are 0/1; this looks like a binary pair file "
            "(drop --graded to evaluate it)"
        )


def _print_report(report: MetricReport, graded: bool) -> None:
    if graded:
        assert report.pearson is not None and report.spearman is not None
        print(f"{report.pearson * 100:.1f} / {report.spearman * 100:.1f}")
        return
    for name in ("accuracy", "precision", "recall", "f1"):
        print(f"{name}\t{getattr(report, name):.4f}")


def cmd_eval(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    bundle = pipeline.load_bundle(args.model, n_max=config.n_max)
    kind = GRADED if args.graded else BINARY
    dataset = _load_pairs(args.pairs, kind, config.label_convention)
    if args.graded:
        _check_not_binary_shaped(dataset)
    report = pipeline.evaluate(dataset, bundle)
    _print_report(report, graded=args.graded)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simfuse",
        description="Sentence-pair similarity: train, score and evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a model bundle from a pair file")
    train.add_argument("--pairs", required=True, help="training TSV pair file")
    train.add_argument("--embeddings", help="word2vec-format text embeddings "
                       f"(falls back to config, then ${EMBEDDINGS_ENV_VAR})")
    train.add_argument("--out", required=True, help="bundle output directory")
    train.add_argument("--config", help="flat key = value config file")
    train.set_defaults(func=cmd_train)

    score = sub.add_parser("score", help="score pairs with a trained bundle")
    score.add_argument("--model", required=True, help="bundle directory")
    score.add_argument("--pairs", required=True, help="TSV pair file")
    score.add_argument("--format", choices=("tsv", "json"), default="tsv")
    score.add_argument("--config", help="flat key = value config file")
    score.set_defaults(func=cmd_score)

    evaluate = sub.add_parser("eval", help="evaluate a bundle on labeled pairs")
    evaluate.add_argument("--model", required=True, help="bundle directory")
    evaluate.add_argument("--pairs", required=True, help="TSV pair file")
    evaluate.add_argument("--graded", action="store_true",
                          help="treat labels as graded 0..5 scores")
    evaluate.add_argument("--config", help="flat key = value config file")
    evaluate.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SimfuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
