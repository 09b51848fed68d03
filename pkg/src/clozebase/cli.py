"""Command-line interface.

Subcommands cover the full pipeline: generate training data from
five-sentence stories, extract features, train/evaluate the linear and LSTM
classifiers, run the ablation grid, and consensus-filter generated data.
Errors exit nonzero with a one-line diagnostic on stderr.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from .annotate import Annotator, SidecarAnnotations, heuristic_tag
from .corpus import (augment_swap, parse_cloze_csv, parse_roc_csv, split_dev,
                     write_cloze_csv)
from .datagen import (build_ending_index, consensus_filter, gen_random,
                      gen_random_coherent, gen_shared_args)
from .embeddings import EmbeddingFormat, load_embeddings
from .features import (FeatureConfig, apply_scaler, config_from_names,
                       extract, fit_scaler, load_features, save_features)
from .harness import (evaluate_linear, linear_predictor, neural_predictor,
                      run_ablation, save_ablation_report)
from .linear import (DEFAULT_C_GRID, cv_tune_c, load_model, save_model,
                     train_logreg)
from .neural import (TrainConfig, Variant, embed_instance, evaluate_model,
                     load_checkpoint, save_checkpoint, train_model)

_FORMATS = {f.value: f for f in EmbeddingFormat}
_CONFIGS = {c.value: c for c in FeatureConfig}
_VARIANTS = {v.value: v for v in Variant}


def _annotator_arg(value: str) -> Annotator:
    if value == "heuristic":
        return heuristic_tag
    return SidecarAnnotations.load(value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clozebase",
        description="Two-ending story classification baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate labeled instances from stories")
    p.add_argument("--roc", required=True, help="five-sentence story CSV")
    p.add_argument("--strategy", required=True,
                   choices=["random", "shared", "coherent"])
    p.add_argument("--k", type=int, default=10,
                   help="wrong endings per story (default 10)")
    p.add_argument("--pool", type=int, default=500,
                   help="candidate pool for the coherent strategy (default 500)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--annotations", default="heuristic",
                   help="'heuristic' or a sidecar annotation file")
    p.add_argument("--out", required=True)

    p = sub.add_parser("extract", help="compute feature vectors for instances")
    p.add_argument("--data", required=True, help="labeled instance CSV")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--format", required=True, choices=sorted(_FORMATS))
    p.add_argument("--config", default="all", choices=sorted(_CONFIGS))
    p.add_argument("--annotations", default="heuristic",
                   help="'heuristic' or a sidecar annotation file")
    p.add_argument("--swap-augment", action="store_true",
                   help="add ending-swapped copies before extraction")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train-linear", help="train the linear classifier")
    p.add_argument("--features", required=True, help="feature CSV from extract")
    p.add_argument("--cv-folds", type=int, default=5)
    p.add_argument("--c-grid", default=",".join(str(c) for c in DEFAULT_C_GRID),
                   help="comma-separated C values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-out", required=True)

    p = sub.add_parser("eval", help="evaluate a saved model on labeled data")
    p.add_argument("--model", required=True,
                   help="linear model file or LSTM checkpoint")
    p.add_argument("--data", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--format", required=True, choices=sorted(_FORMATS))
    p.add_argument("--annotations", default="heuristic",
                   help="'heuristic' or a sidecar annotation file")

    p = sub.add_parser("train-lstm", help="train an LSTM ending classifier")
    p.add_argument("--dev", required=True, help="labeled instance CSV")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--format", required=True, choices=sorted(_FORMATS))
    p.add_argument("--variant", default="raw", choices=sorted(_VARIANTS))
    p.add_argument("--hidden", type=int, default=384)
    p.add_argument("--batch", type=int, default=500)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-ratio", type=float, default=0.9,
                   help="fraction of --dev used for training (default 0.9)")
    p.add_argument("--model-out", help="checkpoint path for the best model")

    p = sub.add_parser("ablate", help="accuracy grid over embeddings x configs")
    p.add_argument("--dev", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--embeddings", required=True, nargs="+",
                   metavar="NAME=PATH:FORMAT",
                   help="e.g. word2vec=vecs.bin:w2v-bin glove=glove.txt:glove-txt")
    p.add_argument("--configs", nargs="+", choices=sorted(_CONFIGS),
                   default=sorted(_CONFIGS))
    p.add_argument("--annotations", default="heuristic",
                   help="'heuristic' or a sidecar annotation file")
    p.add_argument("--cv-folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("filter", help="keep instances all models get right")
    p.add_argument("--data", required=True)
    p.add_argument("--models", required=True, nargs="+")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--format", required=True, choices=sorted(_FORMATS))
    p.add_argument("--annotations", default="heuristic",
                   help="'heuristic' or a sidecar annotation file")
    p.add_argument("--out", required=True)
    return parser


def _load_any_model(path: str):
    """A linear model file is text with a magic first line; else a checkpoint."""
    try:
        with open(path, "rb") as handle:
            head = handle.read(4)
    except OSError as exc:
        raise ValueError(f"cannot read model {path}: {exc}") from None
    if head.startswith(b"PK"):          # zip container -> LSTM checkpoint
        return load_checkpoint(path)
    return load_model(path)


def _cmd_gen_data(args: argparse.Namespace) -> None:
    stories = parse_roc_csv(args.roc)
    if args.strategy == "random":
        instances = gen_random(stories, k=args.k, seed=args.seed)
    else:
        annotator = _annotator_arg(args.annotations)
        index = build_ending_index(stories, annotator)
        if args.strategy == "shared":
            instances = gen_shared_args(stories, index, k=args.k)
        else:
            instances = gen_random_coherent(stories, index, pool=args.pool,
                                            k=args.k, seed=args.seed)
    write_cloze_csv(args.out, instances)
    print(f"wrote {len(instances)} instances to {args.out}")


def _cmd_extract(args: argparse.Namespace) -> None:
    instances = parse_cloze_csv(args.data)
    if any(inst.gold is None for inst in instances):
        raise ValueError("extraction requires labeled instances")
    if args.swap_augment:
        instances = augment_swap(instances)
    table = load_embeddings(args.embeddings, _FORMATS[args.format])
    config = _CONFIGS[args.config]
    annotator = _annotator_arg(args.annotations)
    vectors = [extract(inst, table, annotator, config) for inst in instances]
    labels = [inst.gold for inst in instances]
    save_features(args.out, vectors, labels)
    print(f"wrote {len(vectors)} x {len(vectors[0].names)} features to {args.out}")


def _cmd_train_linear(args: argparse.Namespace) -> None:
    vectors, labels = load_features(args.features)
    config = config_from_names(vectors[0].names)
    grid = [float(c) for c in args.c_grid.split(",") if c]
    if not grid:
        raise ValueError("empty C grid")
    scaler = fit_scaler(vectors)
    x = np.stack([apply_scaler(scaler, v).values for v in vectors])
    report = cv_tune_c(x, labels, folds=args.cv_folds, grid=grid,
                       seed=args.seed)
    for c, mean, _ in report.grid:
        print(f"C={c:g}: mean fold accuracy {mean:.4f}")
    model = train_logreg(x, labels, report.best_c, names=vectors[0].names,
                         config=config, scaler=scaler)
    save_model(args.model_out, model)
    print(f"best C {report.best_c:g}; model saved to {args.model_out}")


def _cmd_eval(args: argparse.Namespace) -> None:
    instances = parse_cloze_csv(args.data)
    if any(inst.gold is None for inst in instances):
        raise ValueError("evaluation requires labeled instances")
    table = load_embeddings(args.embeddings, _FORMATS[args.format])
    model = _load_any_model(args.model)
    if hasattr(model, "weights"):
        annotator = _annotator_arg(args.annotations)
        result = evaluate_linear(model, instances, table, annotator)
        acc, n = result.accuracy, result.n
    else:
        embedded = [embed_instance(inst, table) for inst in instances]
        acc, n = evaluate_model(embedded, model), len(instances)
    print(f"accuracy {acc:.4f} on {n} instances")


def _cmd_train_lstm(args: argparse.Namespace) -> None:
    instances = parse_cloze_csv(args.dev)
    if any(inst.gold is None for inst in instances):
        raise ValueError("training requires labeled instances")
    split = split_dev(instances, ratio=args.split_ratio, seed=args.seed)
    train_set = augment_swap(split.dev_train)
    table = load_embeddings(args.embeddings, _FORMATS[args.format])
    emb_train = [embed_instance(inst, table) for inst in train_set]
    emb_dev = [embed_instance(inst, table) for inst in split.dev_dev]
    best = None
    for restart in range(args.restarts):
        config = TrainConfig(hidden_size=args.hidden, batch_size=args.batch,
                             epochs=args.epochs, learning_rate=args.lr,
                             seed=args.seed * args.restarts + restart,
                             variant=_VARIANTS[args.variant],
                             restarts=args.restarts)
        result = train_model(emb_train, emb_dev, config)
        print(f"restart {restart}: best epoch {result.best_epoch}, "
              f"validation accuracy {result.best_dev_accuracy:.4f}")
        if best is None or result.best_dev_accuracy > best.best_dev_accuracy:
            best = result
    assert best is not None
    print(f"best validation accuracy {best.best_dev_accuracy:.4f} "
          f"(epoch {best.best_epoch})")
    if args.model_out:
        save_checkpoint(args.model_out, best.params)
        print(f"checkpoint saved to {args.model_out}")


def _parse_embedding_specs(specs: Sequence[str]):
    tables = {}
    for spec in specs:
        if "=" not in spec:
            raise ValueError(f"embedding spec {spec!r} is not NAME=PATH:FORMAT")
        name, rest = spec.split("=", 1)
        path, sep, fmt = rest.rpartition(":")
        if not sep or fmt not in _FORMATS:
            raise ValueError(f"embedding spec {spec!r} needs a format suffix "
                             f"(one of {', '.join(sorted(_FORMATS))})")
        tables[name] = load_embeddings(path, _FORMATS[fmt])
    return tables


def _cmd_ablate(args: argparse.Namespace) -> None:
    dev = parse_cloze_csv(args.dev)
    test = parse_cloze_csv(args.test)
    tables = _parse_embedding_specs(args.embeddings)
    annotator = _annotator_arg(args.annotations)
    configs = [_CONFIGS[c] for c in args.configs]
    report = run_ablation(dev, test, tables, configs=configs,
                          annotator=annotator, folds=args.cv_folds,
                          seed=args.seed)
    save_ablation_report(args.out, report)
    for name, row in report.rows.items():
        cells = ", ".join(f"{c.value}={row[c]:.4f}" for c in report.configs)
        print(f"{name}: {cells}")
    print(f"report saved to {args.out}")


def _cmd_filter(args: argparse.Namespace) -> None:
    instances = parse_cloze_csv(args.data)
    table = load_embeddings(args.embeddings, _FORMATS[args.format])
    annotator = _annotator_arg(args.annotations)
    predictors = []
    for path in args.models:
        model = _load_any_model(path)
        if hasattr(model, "weights"):
            predictors.append(linear_predictor(model, table, annotator))
        else:
            predictors.append(neural_predictor(model, table))
    kept = consensus_filter(instances, predictors)
    write_cloze_csv(args.out, kept)
    print(f"kept {len(kept)} of {len(instances)} instances -> {args.out}")


_COMMANDS = {
    "gen-data": _cmd_gen_data,
    "extract": _cmd_extract,
    "train-linear": _cmd_train_linear,
    "eval": _cmd_eval,
    "train-lstm": _cmd_train_lstm,
    "ablate": _cmd_ablate,
    "filter": _cmd_filter,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
