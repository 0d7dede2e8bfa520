"""Greedy backward elimination wrapper search.

Each step trains every configured learner on every candidate set obtained by
dropping one active feature, scores accuracy on the test split, and removes
the feature whose removal gives the highest best-learner accuracy (ties drop
the lowest-schema-index feature). Training is a pure function of
(spec, data, features), so candidate evaluations are order-independent and
could run in parallel without changing the trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import design_matrix, score_rows, train
from .dataset import SplitBundle
from .errors import ConfigError
from .metrics import roc_auc


@dataclass(frozen=True)
class StepRecord:
    features: tuple[str, ...]  # active set, schema order
    accuracies: dict  # learner kind -> test accuracy
    aucs: dict  # learner kind -> test AUC (used only for tie-breaks downstream)
    removed: str | None  # feature removed to reach the next step


@dataclass(frozen=True)
class EliminationTrace:
    steps: tuple[StepRecord, ...]
    final_selection: tuple[str, ...]


def evaluate_learners(
    splits: SplitBundle,
    learners,
    features,
    eval_part: str = "test",
    positive: int = 0,
) -> tuple[dict, dict, dict]:
    """Train each learner on splits.train over *features*; return
    (accuracy, auc, model) maps keyed by learner kind, scored on *eval_part*."""
    part = getattr(splits, eval_part)
    X_eval, y_eval = design_matrix(part, features)
    accuracies, aucs, models = {}, {}, {}
    for spec in learners:
        model = train(spec, splits.train, features)
        scores = score_rows(model, X_eval)
        predictions = (scores >= 0.5).astype(np.int64)
        accuracies[spec.kind] = float((predictions == y_eval).mean())
        oriented = scores if positive == 1 else 1.0 - scores
        aucs[spec.kind] = roc_auc(y_eval, oriented, positive)
        models[spec.kind] = model
    return accuracies, aucs, models


def backward_eliminate(
    splits: SplitBundle,
    learners,
    min_size: int,
    features=None,
    positive: int = 0,
) -> EliminationTrace:
    """Run the wrapper search from *features* (default: the full schema)
    down to *min_size* active features.

    The trace records one step per visited active set; the last step has
    ``removed=None``. ``final_selection`` is the visited set whose best
    learner scored highest on the test split, ties going to the smaller set.
    """
    if min_size < 1:
        raise ConfigError("min_size must be >= 1")
    kinds = [spec.kind for spec in learners]
    if len(set(kinds)) != len(kinds):
        raise ConfigError("duplicate learner kinds in the elimination roster")
    schema = splits.train.schema
    if features is None:
        active = list(schema.feature_names)
    else:
        active = sorted(features, key=schema.index_of)

    accuracies, aucs, _ = evaluate_learners(splits, learners, tuple(active), positive=positive)
    steps: list[StepRecord] = []
    while len(active) > min_size:
        best_removal = None  # (best-learner accuracy, -schema index) to maximize
        best_payload = None
        for feature in active:
            candidate = tuple(f for f in active if f != feature)
            cand_acc, cand_auc, _ = evaluate_learners(splits, learners, candidate, positive=positive)
            key = (max(cand_acc.values()), -schema.index_of(feature))
            if best_removal is None or key > best_removal:
                best_removal = key
                best_payload = (feature, candidate, cand_acc, cand_auc)
        removed, next_active, next_acc, next_auc = best_payload
        steps.append(StepRecord(tuple(active), accuracies, aucs, removed))
        active = list(next_active)
        accuracies, aucs = next_acc, next_auc
    steps.append(StepRecord(tuple(active), accuracies, aucs, None))

    best_step = max(steps, key=lambda s: (max(s.accuracies.values()), -len(s.features)))
    return EliminationTrace(steps=tuple(steps), final_selection=best_step.features)
