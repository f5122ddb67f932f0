"""Class association rules and anchored level-wise rule generation.

A rule is a conjunction of attribute=value items implying a class label.
Rule text follows the form  attr='value' attr='value' ==> class=label.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .dataset import Dataset


@dataclass(frozen=True)
class Item:
    """One antecedent condition: attribute equals value (a judgment node)."""

    attribute: str
    value: str


@dataclass(frozen=True)
class ClassAssociationRule:
    antecedent: tuple[Item, ...]  # schema order, at most one item per attribute
    consequent: str
    support: float = 0.0
    confidence: float = 0.0
    fitness: float = 0.0  # Z statistic of support against minsup


def rule_key(rule: ClassAssociationRule):
    """Canonical ordering key: antecedent items, then consequent."""
    return (tuple((i.attribute, i.value) for i in rule.antecedent), rule.consequent)


def rule_text(rule: ClassAssociationRule, class_attribute: str) -> str:
    items = " ".join(f"{i.attribute}='{i.value}'" for i in rule.antecedent)
    return f"{items} ==> {class_attribute}={rule.consequent}"


def rule_to_dict(rule: ClassAssociationRule) -> dict:
    return {
        "antecedent": [{"attribute": i.attribute, "value": i.value} for i in rule.antecedent],
        "consequent": rule.consequent,
        "support": rule.support,
        "confidence": rule.confidence,
        "z": rule.fitness,
    }


def rule_from_dict(data: dict) -> ClassAssociationRule:
    items = tuple(Item(d["attribute"], d["value"]) for d in data["antecedent"])
    return ClassAssociationRule(
        items,
        data["consequent"],
        support=data.get("support", 0.0),
        confidence=data.get("confidence", 0.0),
        fitness=data.get("z", 0.0),
    )


def matches(rule: ClassAssociationRule, row, ds: Dataset) -> bool:
    """True iff every antecedent item equals the row's value for its attribute."""
    return all(row[ds.col(i.attribute)] == i.value for i in rule.antecedent)


def measure(rule: ClassAssociationRule, ds: Dataset) -> tuple[float, float]:
    """(support, confidence) of the rule on ds; (0, 0) when nothing matches."""
    cols = [(ds.col(i.attribute), i.value) for i in rule.antecedent]
    class_col = ds.class_col
    matched = 0
    hits = 0
    for row in ds.instances:
        if all(row[j] == v for j, v in cols):
            matched += 1
            if row[class_col] == rule.consequent:
                hits += 1
    if matched == 0:
        return 0.0, 0.0
    return hits / ds.n, hits / matched


def new_rule(ds: Dataset, items, consequent: str, fitness: float = 0.0) -> ClassAssociationRule:
    """Build a measured rule with its antecedent in schema order.

    Enforces the rule invariants: nonempty antecedent, one item per
    attribute, no class-attribute items, declared values and class only.
    """
    items = list(items)
    if not items:
        raise ValueError("rule antecedent may not be empty")
    attrs = [i.attribute for i in items]
    if len(set(attrs)) != len(attrs):
        raise ValueError("antecedent items must use distinct attributes")
    for item in items:
        attr = ds.attribute(item.attribute)
        if attr.is_class:
            raise ValueError(f"antecedent may not use the class attribute {attr.name!r}")
        if item.value not in attr.values:
            raise ValueError(f"value {item.value!r} not declared for attribute {attr.name!r}")
    if consequent not in ds.class_attribute.values:
        raise ValueError(f"consequent {consequent!r} is not a declared class value")
    antecedent = tuple(sorted(items, key=lambda i: ds.col(i.attribute)))
    rule = ClassAssociationRule(antecedent, consequent, fitness=fitness)
    support, confidence = measure(rule, ds)
    return replace(rule, support=support, confidence=confidence)


def generate_initial_rules(ds: Dataset, anchor: str, max_len: int = 4,
                           minsup: float = 0.1) -> list[ClassAssociationRule]:
    """Every frequent rule whose antecedent contains the anchor attribute.

    Level-wise enumeration from single-item antecedents upward. Because a
    superset can never match more rows, an antecedent is only extended
    while its match fraction stays >= minsup; each surviving antecedent is
    paired with every class value and the rules with support >= minsup are
    kept. Output is sorted canonically (antecedent, then consequent).
    """
    if not 0 < minsup < 1:
        raise ValueError("minsup must be in (0, 1)")
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    anchor_attr = ds.attribute(anchor)
    if anchor_attr.is_class:
        raise ValueError("anchor may not be the class attribute")
    if ds.has_numeric:
        raise ValueError("dataset must be discretized before rule generation")

    others = [a for a in ds.schema if not a.is_class and a.name != anchor]
    class_values = ds.class_attribute.values
    class_col = ds.class_col
    rules: list[ClassAssociationRule] = []

    def emit(items: tuple[Item, ...], rows: list[int]) -> None:
        by_class: dict[str, int] = {}
        for r in rows:
            label = ds.instances[r][class_col]
            by_class[label] = by_class.get(label, 0) + 1
        for label in class_values:
            hits = by_class.get(label, 0)
            support = hits / ds.n
            if support >= minsup:
                antecedent = tuple(sorted(items, key=lambda i: ds.col(i.attribute)))
                rules.append(
                    ClassAssociationRule(antecedent, label, support, hits / len(rows))
                )

    # frontier entries: (items, index of last non-anchor attribute used, matching rows)
    frontier: list[tuple[tuple[Item, ...], int, list[int]]] = []
    anchor_col = ds.col(anchor)
    for value in anchor_attr.values:
        rows = [r for r, row in enumerate(ds.instances) if row[anchor_col] == value]
        if rows and len(rows) / ds.n >= minsup:
            items = (Item(anchor, value),)
            emit(items, rows)
            frontier.append((items, -1, rows))
    for _level in range(2, max_len + 1):
        grown: list[tuple[tuple[Item, ...], int, list[int]]] = []
        for items, last, rows in frontier:
            for oi in range(last + 1, len(others)):
                attr = others[oi]
                j = ds.col(attr.name)
                for value in attr.values:
                    candidate_rows = [r for r in rows if ds.instances[r][j] == value]
                    if candidate_rows and len(candidate_rows) / ds.n >= minsup:
                        candidate = items + (Item(attr.name, value),)
                        emit(candidate, candidate_rows)
                        grown.append((candidate, oi, candidate_rows))
        frontier = grown
    rules.sort(key=rule_key)
    return rules
