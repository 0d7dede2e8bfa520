"""Categorical SMOTE: grow a dataset to per-class targets.

Classic SMOTE interpolates real-valued vectors; survey answers are integer
codes, so this is the nominal variant: neighbours are found by Hamming
distance and each synthetic attribute is copied from either the seed record
or one of its k same-class neighbours with a fair coin. Synthetic values
therefore always stay inside the legal code set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ClassTooSmallError, PoolTooSmallError, TargetBelowCurrentError


@dataclass(frozen=True)
class SmoteConfig:
    target_per_class: dict  # label -> desired output count
    k: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


def knn_categorical(ds: Dataset, index: int, k: int, same_class_only: bool = True) -> list[int]:
    """Positions of the k records closest to ``ds.records[index]`` by Hamming
    distance, excluding *index*; ties break toward the lower position."""
    matrix = np.asarray(ds.records, dtype=np.int16)
    query = matrix[index]
    if same_class_only:
        pool = [i for i, lab in enumerate(ds.labels) if lab == ds.labels[index] and i != index]
    else:
        pool = [i for i in range(len(ds)) if i != index]
    if len(pool) < k:
        raise PoolTooSmallError(k, len(pool))
    dists = (matrix[pool] != query).sum(axis=1)
    order = np.argsort(dists, kind="stable")  # pool is ascending, so ties stay ascending
    return [pool[i] for i in order[:k]]


def smote_n(ds: Dataset, cfg: SmoteConfig) -> Dataset:
    """Return *ds* with synthetic records appended until each class reaches
    its configured target count. Original records come first, untouched."""
    counts = ds.class_counts()
    grow: dict[int, int] = {}
    for label, target in sorted(cfg.target_per_class.items()):
        current = counts.get(label, 0)
        if target < current:
            raise TargetBelowCurrentError(label, target, current)
        if target > current:
            if current < cfg.k + 1:
                raise ClassTooSmallError(label, current, cfg.k)
            grow[label] = target - current

    rng = random.Random(cfg.seed)
    positions = {label: [i for i, lab in enumerate(ds.labels) if lab == label] for label in grow}
    neighbour_cache: dict[int, list[int]] = {}

    new_records: list[tuple[int, ...]] = []
    new_labels: list[int] = []
    for label in sorted(grow):
        members = positions[label]
        for _ in range(grow[label]):
            seed_pos = members[rng.randrange(len(members))]
            if seed_pos not in neighbour_cache:
                neighbour_cache[seed_pos] = knn_categorical(ds, seed_pos, cfg.k, same_class_only=True)
            donor_pos = neighbour_cache[seed_pos][rng.randrange(cfg.k)]
            seed_rec = ds.records[seed_pos]
            donor_rec = ds.records[donor_pos]
            synthetic = tuple(
                s if rng.random() < 0.5 else d for s, d in zip(seed_rec, donor_rec)
            )
            new_records.append(synthetic)
            new_labels.append(label)

    return Dataset(
        schema=ds.schema,
        records=ds.records + tuple(new_records),
        labels=ds.labels + tuple(new_labels),
    )


def balanced_targets(ds: Dataset, total: int | None = None) -> dict[int, int]:
    """Per-class targets that balance the classes.

    Without *total*, every class grows to the current majority size. With
    *total*, the classes split it as evenly as the arithmetic allows (the
    victim class takes any odd remainder), provided no class shrinks.
    """
    counts = ds.class_counts()
    if total is None:
        top = max(counts.values())
        return {label: top for label in counts}
    base = total // len(counts)
    targets = {label: base for label in counts}
    leftover = total - base * len(counts)
    for label in sorted(counts, reverse=True)[:leftover]:
        targets[label] += 1
    return targets


def proportional_targets(ds: Dataset, total: int) -> dict[int, int]:
    """Grow every class along its current share until *total* records."""
    counts = ds.class_counts()
    if total < len(ds):
        raise TargetBelowCurrentError(-1, total, len(ds))
    quotas = {label: total * counts[label] / len(ds) for label in counts}
    targets = {label: int(quotas[label]) for label in counts}
    leftover = total - sum(targets.values())
    by_remainder = sorted(counts, key=lambda c: (targets[c] - quotas[c], c))
    for label in by_remainder[:leftover]:
        targets[label] += 1
    return targets


def resolve_targets(ds: Dataset, balance: bool, target_total: int | None) -> dict[int, int]:
    """Shared target semantics for the CLI and the pipeline: balancing grows
    toward equal classes, otherwise a target total grows proportionally, and
    with neither the targets equal the current counts (a no-op)."""
    if balance:
        return balanced_targets(ds, target_total)
    if target_total is not None:
        return proportional_targets(ds, target_total)
    return ds.class_counts()
