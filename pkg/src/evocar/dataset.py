"""Tabular datasets: CSV loading, schema inference, equal-width discretization.

A Dataset is immutable once built. Numeric attributes are rewritten as
labelled half-open intervals "(lower-upper]" whose outermost bounds are
-inf/+inf, so every real value falls in exactly one interval. The cut
points used for that rewrite are kept on the dataset and can be replayed
onto held-out data, which keeps train/test mappings identical.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path

CATEGORICAL = "categorical"
NUMERIC = "numeric"


def _is_real(text: str) -> bool:
    try:
        return math.isfinite(float(text))
    except ValueError:
        return False


def _bound_text(x: float) -> str:
    if x == -math.inf:
        return "-inf"
    if x == math.inf:
        return "+inf"
    rounded = round(x, 6)  # labels only; interval membership keeps full precision
    if rounded == int(rounded):
        return str(int(rounded))
    return repr(rounded)


@dataclass(frozen=True)
class Interval:
    """Half-open interval (lower, upper] with the label used in rule text."""

    lower: float
    upper: float

    @property
    def label(self) -> str:
        return f"({_bound_text(self.lower)}-{_bound_text(self.upper)}]"

    def contains(self, value: float) -> bool:
        return self.lower < value <= self.upper


def intervals_from_cuts(cuts: tuple[float, ...]) -> tuple[Interval, ...]:
    bounds = (-math.inf, *cuts, math.inf)
    return tuple(Interval(lo, hi) for lo, hi in zip(bounds, bounds[1:]))


def interval_label(cuts: tuple[float, ...], value: float) -> str:
    """Label of the unique interval holding `value` under these cut points."""
    i = bisect_left(cuts, value)
    lo = cuts[i - 1] if i > 0 else -math.inf
    hi = cuts[i] if i < len(cuts) else math.inf
    return f"({_bound_text(lo)}-{_bound_text(hi)}]"


@dataclass(frozen=True)
class Attribute:
    """One column of a dataset schema."""

    name: str
    kind: str  # CATEGORICAL or NUMERIC
    values: tuple[str, ...] = ()  # declared labels; empty for raw numeric columns
    is_class: bool = False


@dataclass(frozen=True)
class Dataset:
    schema: tuple[Attribute, ...]
    instances: tuple[tuple[str, ...], ...]
    # Cut points, unrounded, for every attribute that was numeric before
    # discretization. An empty tuple means the degenerate single interval.
    cuts: dict[str, tuple[float, ...]] = field(default_factory=dict)
    # (row, attribute, value) triples recorded by apply_discretization for
    # categorical values never seen in the reference data.
    unseen: tuple[tuple[int, str, str], ...] = ()

    @property
    def n(self) -> int:
        return len(self.instances)

    def col(self, name: str) -> int:
        for i, attr in enumerate(self.schema):
            if attr.name == name:
                return i
        raise KeyError(f"unknown attribute {name!r}")

    def attribute(self, name: str) -> Attribute:
        return self.schema[self.col(name)]

    @property
    def class_col(self) -> int:
        for i, attr in enumerate(self.schema):
            if attr.is_class:
                return i
        raise ValueError("schema has no class attribute")

    @property
    def class_attribute(self) -> Attribute:
        return self.schema[self.class_col]

    def column(self, name: str) -> list[str]:
        j = self.col(name)
        return [row[j] for row in self.instances]

    def class_counts(self) -> dict[str, int]:
        """Instance count per declared class value, in declared order."""
        j = self.class_col
        counts = {v: 0 for v in self.schema[j].values}
        for row in self.instances:
            counts[row[j]] = counts.get(row[j], 0) + 1
        return counts

    @property
    def has_numeric(self) -> bool:
        return any(a.kind == NUMERIC for a in self.schema)

    def to_json_dict(self) -> dict:
        return {
            "schema": schema_to_json(self.schema),
            "cuts": {name: list(c) for name, c in self.cuts.items()},
            "instances": [list(row) for row in self.instances],
        }


def schema_to_json(schema) -> list[dict]:
    return [
        {"name": a.name, "kind": a.kind, "values": list(a.values), "is_class": a.is_class}
        for a in schema
    ]


def schema_from_json(entries) -> tuple[Attribute, ...]:
    return tuple(
        Attribute(e["name"], e["kind"], tuple(e["values"]), bool(e["is_class"]))
        for e in entries
    )


def validate(ds: Dataset) -> Dataset:
    """Check structural invariants; returns the dataset for chaining."""
    names = [a.name for a in ds.schema]
    if len(set(names)) != len(names):
        raise ValueError("duplicate attribute names in schema")
    class_attrs = [a for a in ds.schema if a.is_class]
    if len(class_attrs) != 1:
        raise ValueError("schema must declare exactly one class attribute")
    if class_attrs[0].kind != CATEGORICAL:
        raise ValueError("class attribute must be categorical")
    if ds.n < 1:
        raise ValueError("dataset has no instances")
    for r, row in enumerate(ds.instances):
        if len(row) != len(ds.schema):
            raise ValueError(f"row {r}: expected {len(ds.schema)} values, got {len(row)}")
        for attr, value in zip(ds.schema, row):
            if attr.kind == CATEGORICAL and value not in attr.values:
                raise ValueError(f"row {r}: value {value!r} not declared for {attr.name!r}")
            if attr.kind == NUMERIC and not _is_real(value):
                raise ValueError(f"row {r}: non-numeric value {value!r} in {attr.name!r}")
    return ds


def _first_seen(cells) -> tuple[str, ...]:
    return tuple(dict.fromkeys(cells))


def load_csv(path, class_column: str) -> Dataset:
    """Load a headered CSV into an undiscretized dataset.

    A column is numeric iff every cell parses as a finite real; otherwise
    it is categorical with values in first-appearance order. The named
    class column is categorical regardless of content. Missing cells are
    rejected outright.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        records = list(csv.reader(handle))
    if not records:
        raise ValueError(f"{path}: empty file (header row required)")
    header = records[0]
    if len(set(header)) != len(header):
        raise ValueError(f"{path}: duplicate column names in header")
    if class_column not in header:
        raise ValueError(f"{path}: class column {class_column!r} not found in header {header}")
    body = records[1:]
    if not body:
        raise ValueError(f"{path}: no data rows after the header")
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValueError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        for name, cell in zip(header, row):
            if cell == "":
                raise ValueError(f"{path}: line {lineno}: missing value in column {name!r}")
    schema = []
    for j, name in enumerate(header):
        cells = [row[j] for row in body]
        is_class = name == class_column
        if not is_class and all(_is_real(c) for c in cells):
            schema.append(Attribute(name, NUMERIC))
        else:
            schema.append(Attribute(name, CATEGORICAL, values=_first_seen(cells), is_class=is_class))
    return validate(Dataset(tuple(schema), tuple(tuple(row) for row in body)))


def discretize(ds: Dataset, bins: int) -> Dataset:
    """Equal-width binning of every numeric non-class attribute.

    Interior cut points sit at min + i*(max-min)/bins over the observed
    range; the first interval is open below and the last open above, so
    any later value still maps somewhere. A constant column collapses to
    the single interval (-inf-+inf].
    """
    if bins < 2:
        raise ValueError("bins must be at least 2")
    if ds.n < 1:
        raise ValueError("cannot discretize an empty dataset")
    schema = list(ds.schema)
    mapped_columns: dict[int, list[str]] = {}
    cuts = dict(ds.cuts)
    for j, attr in enumerate(ds.schema):
        if attr.kind != NUMERIC or attr.is_class:
            continue
        values = [float(row[j]) for row in ds.instances]
        lo, hi = min(values), max(values)
        if lo == hi:
            attr_cuts: tuple[float, ...] = ()
        else:
            raw = (lo + i * (hi - lo) / bins for i in range(1, bins))
            attr_cuts = tuple(dict.fromkeys(c for c in raw if lo < c < hi))
        labels = tuple(iv.label for iv in intervals_from_cuts(attr_cuts))
        schema[j] = Attribute(attr.name, CATEGORICAL, values=labels)
        mapped_columns[j] = [interval_label(attr_cuts, v) for v in values]
        cuts[attr.name] = attr_cuts
    instances = tuple(
        tuple(mapped_columns[j][r] if j in mapped_columns else cell for j, cell in enumerate(row))
        for r, row in enumerate(ds.instances)
    )
    return Dataset(tuple(schema), instances, cuts=cuts, unseen=ds.unseen)


def apply_discretization(ds: Dataset, reference: Dataset) -> Dataset:
    """Map a raw dataset through the cut points of an already-discretized one.

    No new intervals are invented: out-of-range numerics land in the
    unbounded outer intervals. Categorical values absent from the
    reference vocabulary are kept in place and recorded in `unseen`; such
    a value simply matches no rule.
    """
    if [a.name for a in ds.schema] != [a.name for a in reference.schema]:
        raise ValueError("schema mismatch: attribute names differ")
    if ds.class_attribute.name != reference.class_attribute.name:
        raise ValueError("schema mismatch: class attribute differs")
    for attr, ref in zip(ds.schema, reference.schema):
        expected = NUMERIC if ref.name in reference.cuts else CATEGORICAL
        if attr.kind != expected:
            raise ValueError(
                f"schema mismatch: attribute {attr.name!r} is {attr.kind}, expected {expected}"
            )
    rows = []
    unseen = []
    for r, row in enumerate(ds.instances):
        out = []
        for j, ref in enumerate(reference.schema):
            cell = row[j]
            if ref.name in reference.cuts:
                out.append(interval_label(reference.cuts[ref.name], float(cell)))
            else:
                if cell not in ref.values:
                    unseen.append((r, ref.name, cell))
                out.append(cell)
        rows.append(tuple(out))
    return Dataset(reference.schema, tuple(rows), cuts=dict(reference.cuts), unseen=tuple(unseen))


def subset(ds: Dataset, indices) -> Dataset:
    """Rows `indices` of a raw dataset, with categorical vocabularies
    rebuilt from the selected rows only (no peeking at the rest)."""
    rows = tuple(ds.instances[i] for i in indices)
    if not rows:
        raise ValueError("subset selects no rows")
    schema = []
    for j, attr in enumerate(ds.schema):
        if attr.kind == CATEGORICAL:
            schema.append(
                Attribute(attr.name, CATEGORICAL, values=_first_seen(r[j] for r in rows),
                          is_class=attr.is_class)
            )
        else:
            schema.append(attr)
    return Dataset(tuple(schema), rows, cuts=dict(ds.cuts))
