"""Gini impurity scoring of attributes.

The attribute with the minimum size-weighted impurity over its value
partitions becomes the anchor around which all rules are generated.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from .dataset import NUMERIC, Dataset


def partition_gini(class_counts) -> float:
    """Impurity 1 - sum(p_i^2) of a single partition.

    Accepts a mapping class -> count or a plain iterable of counts.
    """
    if isinstance(class_counts, Mapping):
        counts = list(class_counts.values())
    else:
        counts = list(class_counts)
    if any(c < 0 for c in counts):
        raise ValueError("class counts must be non-negative")
    total = sum(counts)
    if total == 0:
        raise ValueError("all class counts are zero")
    return 1.0 - sum((c / total) ** 2 for c in counts)


@dataclass(frozen=True)
class AttributeScore:
    attribute: str
    gini: float
    per_value: tuple[tuple[str, int, float], ...]  # (value, partition size, impurity)


def attribute_gini(ds: Dataset, attribute: str) -> AttributeScore:
    """Size-weighted mean impurity over the attribute's value partitions.

    Declared values that cover no instance carry no weight and are left
    out of the per-value breakdown.
    """
    attr = ds.attribute(attribute)
    if attr.is_class:
        raise ValueError(f"{attribute!r} is the class attribute")
    if attr.kind == NUMERIC:
        raise ValueError(f"{attribute!r} is numeric; discretize the dataset first")
    j = ds.col(attribute)
    class_col = ds.class_col
    buckets: dict[str, dict[str, int]] = {v: {} for v in attr.values}
    for row in ds.instances:
        bucket = buckets[row[j]]
        bucket[row[class_col]] = bucket.get(row[class_col], 0) + 1
    per_value = []
    weighted = 0.0
    for value in attr.values:
        bucket = buckets[value]
        size = sum(bucket.values())
        if size == 0:
            continue
        impurity = partition_gini(bucket)
        per_value.append((value, size, impurity))
        weighted += (size / ds.n) * impurity
    return AttributeScore(attribute, weighted, tuple(per_value))


def score_attributes(ds: Dataset) -> list[AttributeScore]:
    """Scores for every non-class attribute, ascending by gini.

    The sort is stable, so equal scores keep schema order and the first
    entry is always the tie-broken anchor.
    """
    scores = [attribute_gini(ds, a.name) for a in ds.schema if not a.is_class]
    scores.sort(key=lambda s: s.gini)
    return scores


def select_anchor(ds: Dataset) -> str:
    """Name of the minimum-gini non-class attribute (schema order on ties)."""
    scores = score_attributes(ds)
    if not scores:
        raise ValueError("dataset has no non-class attributes to score")
    return scores[0].attribute
