from __future__ import annotations

import pytest

from riskminer.dataset import Dataset
from riskminer.schema import FeatureSpec, Schema


def toy_schema(n_features: int, values=(0, 1), prefix: str = "f") -> Schema:
    kind = "binary" if tuple(sorted(values)) == (0, 1) else "discrete"
    return Schema(
        features=tuple(
            FeatureSpec(name=f"{prefix}{i}", kind=kind, values=tuple(values))
            for i in range(n_features)
        )
    )


def toy_dataset(records, labels, schema: Schema | None = None) -> Dataset:
    if schema is None:
        width = len(records[0])
        codes = sorted({v for rec in records for v in rec} | {0, 1})
        schema = toy_schema(width, values=tuple(codes))
    return Dataset(schema=schema, records=tuple(map(tuple, records)), labels=tuple(labels))


@pytest.fixture
def schema3() -> Schema:
    return toy_schema(3)
