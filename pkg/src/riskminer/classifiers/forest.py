"""Decision-tree and random-forest learners."""

from __future__ import annotations

import numpy as np

from .tree import (
    TreeNode,
    grow_classification_tree,
    tree_from_dict,
    tree_to_dict,
    tree_victim_fraction,
)


class DecisionTreeLearner:
    """Single gini tree, exhaustive best-first splits, unlimited depth.

    The search is deterministic, so the configured seed only exists for
    interface parity with the other learners.
    """

    def __init__(self, min_samples_split: int = 2, seed: int = 22):
        self.min_samples_split = min_samples_split
        self.seed = seed
        self.root: TreeNode | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> None:
        self.root = grow_classification_tree(X, y, min_samples_split=self.min_samples_split)

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        return np.array([tree_victim_fraction(self.root, row) for row in X])

    def to_params(self) -> dict:
        return {"tree": tree_to_dict(self.root)}

    @classmethod
    def from_params(cls, params: dict, hyper: dict) -> "DecisionTreeLearner":
        learner = cls(min_samples_split=hyper["min_samples_split"], seed=hyper["seed"])
        learner.root = tree_from_dict(params["tree"])
        return learner


class RandomForestLearner:
    """Bagged gini trees with sqrt-of-feature-count sampling at every split.

    Each tree draws its bootstrap sample and split-time feature subsets from
    an independent stream derived from (seed, tree index), so trees could be
    fit concurrently without changing the result.
    """

    def __init__(self, n_estimators: int = 10, seed: int = 42, min_samples_split: int = 2):
        self.n_estimators = n_estimators
        self.seed = seed
        self.min_samples_split = min_samples_split
        self.trees: list[TreeNode] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> None:
        n = X.shape[0]
        max_features = max(1, int(np.sqrt(X.shape[1])))
        self.trees = []
        for t in range(self.n_estimators):
            rng = np.random.default_rng([self.seed, t])
            sample = rng.integers(0, n, size=n)
            self.trees.append(
                grow_classification_tree(
                    X[sample],
                    y[sample],
                    min_samples_split=self.min_samples_split,
                    max_features=max_features,
                    rng=rng,
                )
            )

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        # Fraction of trees voting victim; each tree votes its leaf majority
        # with the 0.5 tie going to the victim class.
        votes = np.zeros(X.shape[0])
        for root in self.trees:
            votes += [1.0 if tree_victim_fraction(root, row) >= 0.5 else 0.0 for row in X]
        return votes / len(self.trees)

    def to_params(self) -> dict:
        return {"trees": [tree_to_dict(t) for t in self.trees]}

    @classmethod
    def from_params(cls, params: dict, hyper: dict) -> "RandomForestLearner":
        learner = cls(
            n_estimators=hyper["n_estimators"],
            seed=hyper["seed"],
            min_samples_split=hyper["min_samples_split"],
        )
        learner.trees = [tree_from_dict(doc) for doc in params["trees"]]
        return learner
