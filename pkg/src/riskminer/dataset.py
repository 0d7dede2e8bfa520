"""Encoded datasets: CSV ingestion, validation, and the three-way split.

A dataset is an ordered list of integer-coded records plus a parallel list of
binary victim labels. The only ingest format is UTF-8 comma-separated text
with a mandatory header: the schema's feature names, in order, followed by
the goal column.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field

from .errors import (
    DataError,
    EmptyClassError,
    HeaderMismatchError,
    IllegalValueError,
    MissingColumnError,
    RaggedRowError,
    RatioSumError,
)
from .schema import Schema


@dataclass(frozen=True)
class Dataset:
    """Validated, immutable collection of records and labels.

    Safe for concurrent reads; all mutation happens before construction.
    """

    schema: Schema
    records: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        nfeat = len(self.schema.features)
        if len(self.records) != len(self.labels):
            raise DataError(
                f"{len(self.records)} records but {len(self.labels)} labels"
            )
        for r, (rec, lab) in enumerate(zip(self.records, self.labels), start=1):
            if len(rec) != nfeat:
                raise RaggedRowError(r, nfeat, len(rec))
            for spec, value in zip(self.schema.features, rec):
                if value not in spec.values:
                    raise IllegalValueError(r, spec.name, value)
            if lab not in (0, 1):
                raise IllegalValueError(r, self.schema.goal_name, lab)

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> tuple[int, ...]:
        j = self.schema.index_of(name)
        return tuple(rec[j] for rec in self.records)

    def class_counts(self) -> dict[int, int]:
        counts = {0: 0, 1: 0}
        for lab in self.labels:
            counts[lab] += 1
        return counts

    def subset(self, indices) -> "Dataset":
        return Dataset(
            schema=self.schema,
            records=tuple(self.records[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
        )


@dataclass(frozen=True)
class SplitBundle:
    """Train / test / validation partition of a dataset."""

    train: Dataset
    test: Dataset
    validation: Dataset
    seed: int = 0

    parts: tuple[str, ...] = field(default=("train", "test", "validation"), repr=False)


def load_dataset(path, schema: Schema) -> Dataset:
    """Load and validate a CSV file against *schema*.

    The header must be the schema's feature names plus the goal column,
    exactly and in order. Cells must be integers within each feature's
    legal codes. Row order is preserved.
    """
    expected = list(schema.feature_names) + [schema.goal_name]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumnError(expected[0]) from None
        for name in expected:
            if name not in header:
                raise MissingColumnError(name)
        if header != expected:
            raise HeaderMismatchError(
                f"header must be exactly {expected!r} in order, got {header!r}"
            )
        records: list[tuple[int, ...]] = []
        labels: list[int] = []
        for r, row in enumerate(reader, start=1):
            if len(row) != len(expected):
                raise RaggedRowError(r, len(expected), len(row))
            values = []
            for name, cell in zip(expected, row):
                try:
                    values.append(int(cell))
                except ValueError:
                    raise IllegalValueError(r, name, cell) from None
            for spec, value in zip(schema.features, values):
                if value not in spec.values:
                    raise IllegalValueError(r, spec.name, value)
            if values[-1] not in (0, 1):
                raise IllegalValueError(r, schema.goal_name, values[-1])
            records.append(tuple(values[:-1]))
            labels.append(values[-1])
    return Dataset(schema=schema, records=tuple(records), labels=tuple(labels))


def write_csv(ds: Dataset, path) -> None:
    """Write *ds* back to CSV; load_dataset(write_csv(ds)) round-trips."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(ds.schema.feature_names) + [ds.schema.goal_name])
        for rec, lab in zip(ds.records, ds.labels):
            writer.writerow(list(rec) + [lab])


def _part_sizes(n: int, ratios) -> tuple[int, int, int]:
    r_train, r_test, r_val = ratios
    if min(r_train, r_test, r_val) <= 0 or abs(r_train + r_test + r_val - 1.0) > 1e-9:
        raise RatioSumError(ratios)
    n_train = int(n * r_train)
    n_test = int(n * r_test)
    return n_train, n_test, n - n_train - n_test


def _apportion(counts: dict[int, int], total: int) -> dict[int, int]:
    # Largest-remainder allocation of `total` seats proportional to counts.
    pool = sum(counts.values())
    quotas = {c: total * counts[c] / pool for c in counts}
    alloc = {c: int(quotas[c]) for c in counts}
    leftover = total - sum(alloc.values())
    by_remainder = sorted(counts, key=lambda c: (alloc[c] - quotas[c], c))
    for c in by_remainder[:leftover]:
        alloc[c] += 1
    return alloc


def split_dataset(ds: Dataset, ratios, seed: int, stratified: bool = True) -> SplitBundle:
    """Deterministic three-way split.

    Part sizes are always (floor(n*r_train), floor(n*r_test), remainder).
    The shuffle is a seeded permutation; with ``stratified`` the permutation
    and allocation happen per class, keeping every part's class ratio within
    one record per class of the whole-dataset ratio.
    """
    n = len(ds)
    n_train, n_test, n_val = _part_sizes(n, ratios)
    rng = random.Random(seed)

    if not stratified:
        order = list(range(n))
        rng.shuffle(order)
        train_idx = order[:n_train]
        test_idx = order[n_train:n_train + n_test]
        val_idx = order[n_train + n_test:]
    else:
        by_class: dict[int, list[int]] = {0: [], 1: []}
        for i, lab in enumerate(ds.labels):
            by_class[lab].append(i)
        for lab, members in by_class.items():
            if not members:
                raise EmptyClassError(lab)
        for members in by_class.values():
            rng.shuffle(members)
        counts = {c: len(m) for c, m in by_class.items()}
        train_alloc = _apportion(counts, n_train)
        rest = {c: counts[c] - train_alloc[c] for c in counts}
        test_alloc = _apportion(rest, n_test)
        train_idx, test_idx, val_idx = [], [], []
        for c in sorted(by_class):
            members = by_class[c]
            t, e = train_alloc[c], test_alloc[c]
            train_idx.extend(members[:t])
            test_idx.extend(members[t:t + e])
            val_idx.extend(members[t + e:])
        train_idx.sort()
        test_idx.sort()
        val_idx.sort()

    return SplitBundle(
        train=ds.subset(train_idx),
        test=ds.subset(test_idx),
        validation=ds.subset(val_idx),
        seed=seed,
    )
