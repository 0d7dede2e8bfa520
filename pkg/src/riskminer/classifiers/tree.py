"""Decision-tree machinery shared by the tree, forest, and boosting learners.

Splits are categorical: a node partitions one feature's observed codes into a
left and a right value set. Classification trees grow on the gini criterion,
regression trees (used for boosting) on the Friedman MSE improvement. Nodes
split as long as they are impure and some feature still varies, so a tree can
work through XOR-like interactions whose first split has zero gain; a pure or
constant-featured node becomes a leaf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyNodeError


def gini(counts) -> float:
    """Gini impurity 1 - sum((c_i / n)^2) of a class-count vector."""
    total = float(sum(counts))
    if total <= 0:
        raise EmptyNodeError("gini of an empty count vector")
    return 1.0 - sum((c / total) ** 2 for c in counts)


@dataclass(frozen=True)
class SplitChoice:
    feature: int
    left_values: tuple[int, ...]
    right_values: tuple[int, ...]
    decrease: float


def _partitions(present: list[int]):
    # Non-trivial bipartitions; the left side always holds the smallest code
    # and candidates come out in lexicographic left-tuple order.
    first, rest = present[0], present[1:]
    out = []
    for mask in range(2 ** len(rest) - 1):
        left = [first] + [v for b, v in enumerate(rest) if mask >> b & 1]
        right = [v for b, v in enumerate(rest) if not mask >> b & 1]
        out.append((tuple(left), tuple(right)))
    out.sort(key=lambda lr: lr[0])
    return out


def best_split(records, labels, candidate_features, criterion: str = "gini") -> SplitChoice | None:
    """Best categorical split of a node, or None for pure/unsplittable nodes.

    Ties go to the lowest feature index, then to the partition whose left
    side is lexicographically smallest (it always holds the smallest code).
    """
    X = np.asarray(records)
    if criterion == "gini":
        y = np.asarray(labels, dtype=np.int64)
        if y.size == 0 or np.all(y == y[0]):
            return None
        scorer = _gini_gain
    elif criterion == "friedman-mse":
        y = np.asarray(labels, dtype=np.float64)
        if y.size == 0 or np.all(y == y[0]):
            return None
        scorer = _friedman_gain
    else:
        raise ValueError(f"unknown criterion {criterion!r}")

    best: SplitChoice | None = None
    for f in sorted(int(c) for c in candidate_features):
        codes = X[:, f].astype(np.int64)
        present = sorted(set(codes.tolist()))
        if len(present) < 2:
            continue
        for left, right in _partitions(present):
            decrease = scorer(codes, y, left)
            if decrease is None:
                continue
            if best is None or decrease > best.decrease:
                best = SplitChoice(f, left, right, decrease)
    return best


def _gini_gain(codes, y, left_values):
    width = int(codes.max()) + 1
    hist = np.bincount(codes * 2 + y, minlength=2 * width).reshape(width, 2)
    left = hist[list(left_values)].sum(axis=0)
    total = hist.sum(axis=0)
    right = total - left
    n_l, n_r = int(left.sum()), int(right.sum())
    if n_l == 0 or n_r == 0:
        return None
    n = n_l + n_r
    return gini(total) - (n_l / n) * gini(left) - (n_r / n) * gini(right)


def _friedman_gain(codes, y, left_values):
    width = int(codes.max()) + 1
    cnt = np.bincount(codes, minlength=width)
    sums = np.bincount(codes, weights=y, minlength=width)
    idx = list(left_values)
    n_l = int(cnt[idx].sum())
    n_r = int(cnt.sum()) - n_l
    if n_l == 0 or n_r == 0:
        return None
    s_l = float(sums[idx].sum())
    s_r = float(sums.sum()) - s_l
    diff = s_l / n_l - s_r / n_r
    return (n_l * n_r / (n_l + n_r)) * diff * diff


@dataclass
class TreeNode:
    n: int
    # interior
    feature: int | None = None
    left_values: tuple[int, ...] = ()
    right_values: tuple[int, ...] = ()
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    # leaf payloads
    pos: int = 0  # victim count (classification)
    value: float = 0.0  # leaf output (regression)

    def is_leaf(self) -> bool:
        return self.feature is None


def _descend(node: TreeNode, row) -> TreeNode:
    while not node.is_leaf():
        v = int(row[node.feature])
        if v in node.left_values:
            node = node.left
        elif v in node.right_values:
            node = node.right
        else:  # code unseen at fit time: follow the heavier child
            node = node.left if node.left.n >= node.right.n else node.right
    return node


def grow_classification_tree(
    X: np.ndarray,
    y: np.ndarray,
    min_samples_split: int = 2,
    max_features: int | None = None,
    rng: np.random.Generator | None = None,
) -> TreeNode:
    n_features = X.shape[1]

    def build(idx: np.ndarray) -> TreeNode:
        sub_y = y[idx]
        node = TreeNode(n=int(idx.size), pos=int(sub_y.sum()))
        if idx.size < min_samples_split or node.pos in (0, node.n):
            return node
        if max_features is not None and max_features < n_features:
            feats = rng.choice(n_features, size=max_features, replace=False)
        else:
            feats = range(n_features)
        choice = best_split(X[idx], sub_y, feats, criterion="gini")
        if choice is None:
            return node
        codes = X[idx, choice.feature].astype(np.int64)
        mask = np.isin(codes, choice.left_values)
        node.feature = choice.feature
        node.left_values = choice.left_values
        node.right_values = choice.right_values
        node.left = build(idx[mask])
        node.right = build(idx[~mask])
        return node

    return build(np.arange(X.shape[0]))


def grow_regression_tree(
    X: np.ndarray,
    target: np.ndarray,
    max_depth: int,
    min_samples_split: int = 2,
) -> tuple[TreeNode, list[tuple[TreeNode, np.ndarray]]]:
    """Friedman-MSE regression tree; returns the root and (leaf, indices) pairs
    so the caller can set leaf values from the samples each leaf captured."""
    leaves: list[tuple[TreeNode, np.ndarray]] = []

    def build(idx: np.ndarray, depth: int) -> TreeNode:
        node = TreeNode(n=int(idx.size))
        choice = None
        if depth < max_depth and idx.size >= min_samples_split:
            choice = best_split(X[idx], target[idx], range(X.shape[1]), criterion="friedman-mse")
        if choice is None:
            leaves.append((node, idx))
            return node
        codes = X[idx, choice.feature].astype(np.int64)
        mask = np.isin(codes, choice.left_values)
        node.feature = choice.feature
        node.left_values = choice.left_values
        node.right_values = choice.right_values
        node.left = build(idx[mask], depth + 1)
        node.right = build(idx[~mask], depth + 1)
        return node

    root = build(np.arange(X.shape[0]), 0)
    return root, leaves


def tree_victim_fraction(node: TreeNode, row) -> float:
    leaf = _descend(node, row)
    return leaf.pos / leaf.n


def tree_value(node: TreeNode, row) -> float:
    return _descend(node, row).value


def tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf():
        return {"n": node.n, "pos": node.pos, "value": node.value}
    return {
        "n": node.n,
        "feature": node.feature,
        "left_values": list(node.left_values),
        "right_values": list(node.right_values),
        "left": tree_to_dict(node.left),
        "right": tree_to_dict(node.right),
    }


def tree_from_dict(doc: dict) -> TreeNode:
    if "feature" not in doc:
        return TreeNode(n=doc["n"], pos=doc.get("pos", 0), value=doc.get("value", 0.0))
    node = TreeNode(
        n=doc["n"],
        feature=doc["feature"],
        left_values=tuple(doc["left_values"]),
        right_values=tuple(doc["right_values"]),
    )
    node.left = tree_from_dict(doc["left"])
    node.right = tree_from_dict(doc["right"])
    return node
