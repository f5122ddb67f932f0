"""Ordered-rule-list classifier and stratified k-fold evaluation.

Rules sort by confidence, then support, then antecedent length, then rule
text. Prediction discretizes the raw row through the model's stored cut
points, walks the ordered list, and answers with the first match (or the
training majority class when nothing matches).
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import asdict, dataclass, field, replace

from .dataset import (
    Attribute,
    Dataset,
    discretize,
    interval_label,
    schema_from_json,
    schema_to_json,
    subset,
)
from .evolution import GAConfig, RulePool, derive_seed, evolve
from .gini import select_anchor
from .rules import (
    ClassAssociationRule,
    generate_initial_rules,
    rule_from_dict,
    rule_text,
    rule_to_dict,
)
from .ztest import ZTestConfig

MODEL_FORMAT_VERSION = 1


def rule_order_key(rule: ClassAssociationRule, class_attribute: str):
    return (-rule.confidence, -rule.support, len(rule.antecedent),
            rule_text(rule, class_attribute))


@dataclass(frozen=True)
class ClassifierModel:
    schema: tuple[Attribute, ...]  # discretized training schema
    cuts: dict[str, tuple[float, ...]]
    rules: tuple[ClassAssociationRule, ...]
    default_class: str
    anchor: str
    provenance: dict = field(default_factory=dict)

    @property
    def class_attribute(self) -> str:
        return next(a.name for a in self.schema if a.is_class)

    def to_json_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "class_attribute": self.class_attribute,
            "default_class": self.default_class,
            "anchor": self.anchor,
            "schema": schema_to_json(self.schema),
            "cuts": {name: list(c) for name, c in self.cuts.items()},
            "rules": [rule_to_dict(r) for r in self.rules],
            "provenance": self.provenance,
        }


def model_from_json_dict(data: dict) -> ClassifierModel:
    version = data.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version!r}")
    return ClassifierModel(
        schema=schema_from_json(data["schema"]),
        cuts={name: tuple(c) for name, c in data["cuts"].items()},
        rules=tuple(rule_from_dict(r) for r in data["rules"]),
        default_class=data["default_class"],
        anchor=data["anchor"],
        provenance=data.get("provenance", {}),
    )


def load_model(path) -> ClassifierModel:
    with open(path, encoding="utf-8") as handle:
        return model_from_json_dict(json.load(handle))


def build(pool, train: Dataset, anchor: str, config: dict | None = None) -> ClassifierModel:
    """Order the pooled rules into a classifier over discretized training data.

    An empty pool is legal and produces a default-class-only model (with a
    warning); the default class is the training majority, first-declared
    value winning ties.
    """
    if train.n == 0:
        raise ValueError("cannot build a classifier from an empty training set")
    rules = tuple(pool.rules) if isinstance(pool, RulePool) else tuple(pool)
    class_attr = train.class_attribute.name
    ordered = tuple(sorted(rules, key=lambda r: rule_order_key(r, class_attr)))
    counts = train.class_counts()
    top = max(counts.values())
    default = next(v for v in train.class_attribute.values if counts[v] == top)
    if not ordered:
        warnings.warn("empty rule pool: classifier will always predict the default class")
    return ClassifierModel(
        schema=train.schema,
        cuts=dict(train.cuts),
        rules=ordered,
        default_class=default,
        anchor=anchor,
        provenance=dict(config or {}),
    )


def _discretize_row(model: ClassifierModel, row) -> dict[str, str]:
    """Map a raw row (mapping attribute -> value) through the model's cuts."""
    values = {}
    for attr in model.schema:
        if attr.is_class:
            continue
        if attr.name not in row:
            raise ValueError(f"input is missing attribute column {attr.name!r}")
        raw = row[attr.name]
        if attr.name in model.cuts:
            try:
                numeric = float(raw)
            except (TypeError, ValueError):
                raise ValueError(
                    f"attribute {attr.name!r}: value {raw!r} is not numeric"
                ) from None
            values[attr.name] = interval_label(model.cuts[attr.name], numeric)
        else:
            values[attr.name] = str(raw)
    return values


def predict(model: ClassifierModel, row) -> str:
    """Consequent of the first rule matching the (raw) row, else the default."""
    values = _discretize_row(model, row)
    for rule in model.rules:
        if all(values.get(i.attribute) == i.value for i in rule.antecedent):
            return rule.consequent
    return model.default_class


def accuracy(model: ClassifierModel, test: Dataset) -> float:
    """Fraction of test rows whose prediction matches the labelled class."""
    if test.n == 0:
        raise ValueError("cannot score an empty test set")
    names = [a.name for a in test.schema]
    class_attr = model.class_attribute
    correct = 0
    for row in test.instances:
        values = dict(zip(names, row))
        if predict(model, values) == values[class_attr]:
            correct += 1
    return correct / test.n


@dataclass(frozen=True)
class FoldResult:
    fold: int
    test_size: int
    correct: int
    accuracy: float
    rule_count: int
    anchor: str


@dataclass(frozen=True)
class EvaluationReport:
    per_fold: tuple[FoldResult, ...]
    overall_accuracy: float
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "folds": [asdict(f) for f in self.per_fold],
            "overall_accuracy": self.overall_accuracy,
            "total_correct": sum(f.correct for f in self.per_fold),
            "total_size": sum(f.test_size for f in self.per_fold),
        }


def stratified_folds(ds: Dataset, k: int, seed: int) -> list[list[int]]:
    """Disjoint test folds covering every row.

    Indices are shuffled per class (seeded) and dealt round-robin with one
    cursor shared across classes, so fold sizes differ by at most one both
    overall and within every class.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    for label, count in ds.class_counts().items():
        if count < k:
            raise ValueError(
                f"class {label!r} has only {count} instances; choose k <= {count}"
            )
    rng = random.Random(f"{seed}/folds")
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    class_col = ds.class_col
    for label in ds.class_attribute.values:
        indices = [i for i, row in enumerate(ds.instances) if row[class_col] == label]
        rng.shuffle(indices)
        for index in indices:
            folds[cursor % k].append(index)
            cursor += 1
    return [sorted(fold) for fold in folds]


def cross_validate(ds: Dataset, k: int, *, bins: int = 3, max_len: int = 4,
                   ga: GAConfig | None = None, ztest: ZTestConfig | None = None,
                   config: dict | None = None) -> EvaluationReport:
    """Stratified k-fold evaluation of the full mining pipeline.

    Every fold recomputes discretization, anchor, rule generation, and
    evolution from its training portion alone; test rows only ever pass
    through the trained model. Each fold's GA runs on its own rng stream
    derived from (seed, fold), so reports are reproducible. The overall
    accuracy is the micro average: total correct over total test size.
    """
    ga = ga if ga is not None else GAConfig()
    ztest = ztest if ztest is not None else ZTestConfig()
    folds = stratified_folds(ds, k, ga.rng_seed)
    names = [a.name for a in ds.schema]
    class_attr = ds.class_attribute.name
    snapshot = dict(config) if config is not None else {
        "k": k, "bins": bins, "max_len": max_len,
        "ga": asdict(ga), "ztest": asdict(ztest),
    }
    results = []
    total_correct = 0
    total_size = 0
    for f, test_indices in enumerate(folds):
        in_test = set(test_indices)
        train_raw = subset(ds, [i for i in range(ds.n) if i not in in_test])
        train = discretize(train_raw, bins)
        anchor = select_anchor(train)
        initial = generate_initial_rules(train, anchor, max_len=max_len, minsup=ztest.minsup)
        fold_ga = replace(ga, rng_seed=derive_seed(ga.rng_seed, f"fold{f}"))
        pool = evolve(initial, train, anchor, fold_ga, ztest)
        model = build(pool, train, anchor, {**snapshot, "fold": f})
        correct = 0
        for i in test_indices:
            row = dict(zip(names, ds.instances[i]))
            if predict(model, row) == row[class_attr]:
                correct += 1
        size = len(test_indices)
        results.append(FoldResult(f, size, correct, correct / size, len(model.rules), anchor))
        total_correct += correct
        total_size += size
    return EvaluationReport(tuple(results), total_correct / total_size, snapshot)
