"""Single decision tree: exhaustive midpoint splits over sampled features.

Determinism contract: candidate features come from the caller's RNG in
draw order, split search scans boundaries low to high, and a candidate
replaces the incumbent only on strictly greater gain.  Rows with values
<= threshold go left.  Constant features offer no boundary and are
skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64

# Gains at or below this are noise from float accumulation, not structure.
_MIN_GAIN = 1e-12

_LEAF = -1


def entropy_of_rows(counts: np.ndarray, totals: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) for each row of class counts."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / totals[:, None]
        terms = np.where(p > 0.0, p * np.log2(p), 0.0)
    return -terms.sum(axis=1)


def gini_of_rows(counts: np.ndarray, totals: np.ndarray) -> np.ndarray:
    p = counts / totals[:, None]
    return 1.0 - (p * p).sum(axis=1)


_IMPURITY = {"entropy": entropy_of_rows, "gini": gini_of_rows}


@dataclass
class Tree:
    """Flat node arrays; leaves store class-probability rows.

    `feature[i]` is -1 for leaves; `distribution[i]` is all zeros for
    internal nodes.
    """

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    distribution: list[list[float]] = field(default_factory=list)

    def _add_node(self) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.distribution.append([])
        return len(self.feature) - 1

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Leaf class distribution for each row of `x`, shape (rows, classes)."""
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        node = np.zeros(len(x), dtype=np.int64)
        while True:
            internal = feature[node] >= 0
            if not internal.any():
                break
            idx = node[internal]
            goes_left = x[internal, feature[idx]] <= threshold[idx]
            node[internal] = np.where(goes_left, left[idx], right[idx])
        dists = np.array(
            [self.distribution[i] for i in node], dtype=np.float64
        )
        return dists

    def to_dict(self) -> dict:
        return {
            "feature": list(self.feature),
            "threshold": [float(t) for t in self.threshold],
            "left": list(self.left),
            "right": list(self.right),
            "distribution": [[float(v) for v in d] for d in self.distribution],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Tree":
        return cls(
            feature=list(data["feature"]),
            threshold=list(data["threshold"]),
            left=list(data["left"]),
            right=list(data["right"]),
            distribution=[list(d) for d in data["distribution"]],
        )


def _best_split(
    x_col: np.ndarray,
    onehot: np.ndarray,
    parent_impurity: float,
    impurity_rows,
    min_samples_leaf: int,
):
    """Best (gain, threshold) over midpoints of one feature, or None."""
    n = len(x_col)
    order = np.argsort(x_col, kind="stable")
    sv = x_col[order]
    cum = np.cumsum(onehot[order], axis=0)
    n_left = np.arange(1, n)
    n_right = n - n_left
    valid = sv[1:] != sv[:-1]
    valid &= (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    if not valid.any():
        return None
    left_counts = cum[:-1]
    right_counts = cum[-1] - left_counts
    child = (
        n_left * impurity_rows(left_counts, n_left)
        + n_right * impurity_rows(right_counts, n_right)
    ) / n
    gain = np.where(valid, parent_impurity - child, -np.inf)
    best = int(np.argmax(gain))
    if gain[best] <= _MIN_GAIN:
        return None
    return float(gain[best]), float((sv[best] + sv[best + 1]) / 2.0)


def grow_tree(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    features_per_node: int,
    rng: SplitMix64,
    max_depth: int | None = None,
    min_samples_leaf: int = 1,
    criterion: str = "entropy",
) -> Tree:
    """Grow one tree on (x, y); y holds class indices in [0, n_classes).

    Nodes are created in depth-first preorder, left child first, so RNG
    consumption order is a function of the data alone.
    """
    impurity_rows = _IMPURITY[criterion]
    n_features = x.shape[1]
    k = min(features_per_node, n_features)
    onehot = np.zeros((len(y), n_classes), dtype=np.float64)
    onehot[np.arange(len(y)), y] = 1.0

    tree = Tree()
    root = tree._add_node()
    # stack of (node_id, row_indices, depth); preorder via LIFO
    stack: list[tuple[int, np.ndarray, int]] = [(root, np.arange(len(y)), 0)]
    while stack:
        node_id, rows, depth = stack.pop()
        counts = onehot[rows].sum(axis=0)
        total = counts.sum()

        def make_leaf() -> None:
            tree.feature[node_id] = _LEAF
            tree.distribution[node_id] = [float(c / total) for c in counts]

        if (
            len(rows) < 2
            or len(rows) < 2 * min_samples_leaf
            or np.count_nonzero(counts) <= 1
            or (max_depth is not None and depth >= max_depth)
        ):
            make_leaf()
            continue

        parent_impurity = float(
            impurity_rows(counts[None, :], np.array([total]))[0]
        )
        candidates = rng.sample_indices(n_features, k)
        best_gain = -np.inf
        best_feature = _LEAF
        best_threshold = 0.0
        for f in candidates:
            found = _best_split(
                x[rows, f], onehot[rows], parent_impurity, impurity_rows, min_samples_leaf
            )
            if found is None:
                continue
            gain, threshold = found
            if gain > best_gain:
                best_gain = gain
                best_feature = f
                best_threshold = threshold
        if best_feature == _LEAF:
            make_leaf()
            continue

        goes_left = x[rows, best_feature] <= best_threshold
        left_id = tree._add_node()
        right_id = tree._add_node()
        tree.feature[node_id] = best_feature
        tree.threshold[node_id] = best_threshold
        tree.left[node_id] = left_id
        tree.right[node_id] = right_id
        # push right first so the left subtree is grown first
        stack.append((right_id, rows[~goes_left], depth + 1))
        stack.append((left_id, rows[goes_left], depth + 1))
    return tree
