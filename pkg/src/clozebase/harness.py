"""Experiment harness: accuracy metrics, ablation grids, model comparisons.

`run_ablation` fills an (embedding table x feature config) accuracy grid:
swap-augment the training set, extract features, tune C by cross-validation,
retrain on everything, score the test set. `run_neural_comparison` does the
analogous sweep over LSTM variants with a train/validation/test split.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .annotate import Annotator
from .corpus import ClozeInstance, augment_swap
from .datagen import Predictor
from .embeddings import EmbeddingTable
from .errors import ParseError
from .features import FeatureConfig, apply_scaler, extract, fit_scaler
from .linear import (DEFAULT_C_GRID, LinearModel, cv_tune_c, predict,
                     train_logreg)
from .neural import (EmbeddedInstance, ModelParams, TrainConfig, Variant,
                     embed_instance, evaluate_model, predict_neural,
                     train_model)


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    n: int
    predictions: tuple[int, ...]


def accuracy(predictions: Sequence[int], gold: Sequence[int]) -> EvalResult:
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions for "
                         f"{len(gold)} gold labels")
    if not predictions:
        raise ValueError("nothing to score")
    correct = sum(p == g for p, g in zip(predictions, gold))
    return EvalResult(accuracy=correct / len(gold), n=len(gold),
                      predictions=tuple(predictions))


def majority_baseline(train_gold: Sequence[int], test_gold: Sequence[int]) -> EvalResult:
    """Predict the most frequent training label everywhere (ties -> label 1)."""
    if not train_gold:
        raise ValueError("empty training labels")
    ones = sum(1 for g in train_gold if g == 1)
    majority = 1 if ones >= len(train_gold) - ones else 2
    return accuracy([majority] * len(test_gold), test_gold)


ALL_CONFIGS = tuple(FeatureConfig)


@dataclass(frozen=True)
class AblationReport:
    configs: tuple[FeatureConfig, ...]
    rows: Mapping[str, Mapping[FeatureConfig, float]]


def save_ablation_report(path: str | Path, report: AblationReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["embeddings"] + [c.value for c in report.configs])
        for name in report.rows:
            row = report.rows[name]
            writer.writerow([name] + [repr(row[c]) for c in report.configs])


def load_ablation_report(path: str | Path) -> AblationReport:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty report") from None
        if not header or header[0] != "embeddings":
            raise ParseError(f"{path}: malformed report header")
        try:
            configs = tuple(FeatureConfig(v) for v in header[1:])
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
        rows: dict[str, dict[FeatureConfig, float]] = {}
        for lineno, fields in enumerate(reader, start=2):
            if len(fields) != len(configs) + 1:
                raise ParseError(f"{path}: line {lineno}: expected "
                                 f"{len(configs) + 1} columns, got {len(fields)}")
            try:
                rows[fields[0]] = {c: float(v)
                                   for c, v in zip(configs, fields[1:])}
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
    return AblationReport(configs=configs, rows=rows)


def train_linear_cell(train: Sequence[ClozeInstance], table: EmbeddingTable,
                      config: FeatureConfig, annotator: Annotator | None,
                      folds: int = 5,
                      c_grid: Sequence[float] = DEFAULT_C_GRID,
                      seed: int = 0, augment: bool = True) -> LinearModel:
    """Swap-augment, extract, scale, tune C, retrain on everything."""
    instances = augment_swap(train) if augment else list(train)
    vectors = [extract(inst, table, annotator, config) for inst in instances]
    labels = [inst.gold for inst in instances]
    if any(label is None for label in labels):
        raise ValueError("training instances must be labeled")
    scaler = fit_scaler(vectors)
    x = np.stack([apply_scaler(scaler, v).values for v in vectors])
    report = cv_tune_c(x, labels, folds=folds, grid=c_grid, seed=seed)
    return train_logreg(x, labels, report.best_c, names=vectors[0].names,
                        config=config, scaler=scaler)


def evaluate_linear(model: LinearModel, test: Sequence[ClozeInstance],
                    table: EmbeddingTable,
                    annotator: Annotator | None) -> EvalResult:
    predictions = []
    gold = []
    for inst in test:
        if inst.gold is None:
            raise ValueError(f"instance {inst.id} is unlabeled")
        assert model.config is not None
        vector = extract(inst, table, annotator, model.config)
        predictions.append(predict(model, vector)[0])
        gold.append(inst.gold)
    return accuracy(predictions, gold)


def run_ablation(dev: Sequence[ClozeInstance], test: Sequence[ClozeInstance],
                 tables: Mapping[str, EmbeddingTable],
                 configs: Sequence[FeatureConfig] = ALL_CONFIGS,
                 annotator: Annotator | None = None, folds: int = 5,
                 c_grid: Sequence[float] = DEFAULT_C_GRID,
                 seed: int = 0) -> AblationReport:
    rows: dict[str, dict[FeatureConfig, float]] = {}
    for name, table in tables.items():
        row: dict[FeatureConfig, float] = {}
        for config in configs:
            model = train_linear_cell(dev, table, config, annotator,
                                      folds=folds, c_grid=c_grid, seed=seed)
            row[config] = evaluate_linear(model, test, table, annotator).accuracy
        rows[name] = row
    return AblationReport(configs=tuple(configs), rows=rows)


@dataclass(frozen=True)
class NeuralComparisonRow:
    variant: Variant
    best_epoch: int
    dev_accuracy: float
    test_accuracy: float


def run_neural_comparison(dev_train: Sequence[ClozeInstance],
                          dev_dev: Sequence[ClozeInstance],
                          test: Sequence[ClozeInstance],
                          variants: Sequence[Variant],
                          table: EmbeddingTable,
                          hidden_size: int = 384, batch_size: int = 500,
                          epochs: int = 10, learning_rate: float = 0.001,
                          seed: int = 0) -> tuple[NeuralComparisonRow, ...]:
    """Train each variant, select the best epoch on dev_dev, score on test."""
    emb_train = [embed_instance(i, table) for i in dev_train]
    emb_dev = [embed_instance(i, table) for i in dev_dev]
    emb_test = [embed_instance(i, table) for i in test]
    rows = []
    for variant in variants:
        config = TrainConfig(hidden_size=hidden_size, batch_size=batch_size,
                             epochs=epochs, learning_rate=learning_rate,
                             seed=seed, variant=variant)
        result = train_model(emb_train, emb_dev, config)
        rows.append(NeuralComparisonRow(
            variant=variant,
            best_epoch=result.best_epoch,
            dev_accuracy=result.best_dev_accuracy,
            test_accuracy=evaluate_model(emb_test, result.params),
        ))
    return tuple(rows)


def save_neural_report(path: str | Path,
                       rows: Sequence[NeuralComparisonRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["variant", "best_epoch", "dev_accuracy",
                         "test_accuracy"])
        for row in rows:
            writer.writerow([row.variant.value, row.best_epoch,
                             repr(row.dev_accuracy), repr(row.test_accuracy)])


def linear_predictor(model: LinearModel, table: EmbeddingTable,
                     annotator: Annotator | None = None) -> Predictor:
    """Wrap a linear model as an instance -> label callable (for filtering)."""
    if model.config is None:
        raise ValueError("model carries no feature configuration")

    def predictor(instance: ClozeInstance) -> int:
        vector = extract(instance, table, annotator, model.config)
        return predict(model, vector)[0]

    return predictor


def neural_predictor(params: ModelParams, table: EmbeddingTable) -> Predictor:
    def predictor(instance: ClozeInstance) -> int:
        return predict_neural(embed_instance(instance, table), params)[0]

    return predictor
