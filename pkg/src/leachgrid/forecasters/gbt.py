"""Gradient boosted regression trees for squared loss.

Splits are found by an exact scan over sorted feature values, maximising
variance reduction. One ensemble is fitted per output step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leachgrid.forecasters.supervised import LagWindowConfig, SupervisedForecaster


@dataclass(frozen=True)
class GbtConfig:
    n_trees: int = 100
    max_depth: int = 3
    learning_rate: float = 0.1
    min_samples_leaf: int = 5

    def __post_init__(self):
        if self.n_trees < 0 or self.max_depth < 1 or self.min_samples_leaf < 1:
            raise ValueError("n_trees >= 0, max_depth >= 1 and min_samples_leaf >= 1 required")
        if not 0 < self.learning_rate <= 1:
            raise ValueError("learning_rate must be in (0, 1]")


@dataclass
class RegressionTree:
    """Flat array layout; ``feature == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] >= 0
        while np.any(active):
            idx = np.nonzero(active)[0]
            f = self.feature[node[idx]]
            go_left = X[idx, f] <= self.threshold[node[idx]]
            node[idx] = np.where(go_left, self.left[node[idx]], self.right[node[idx]])
            active = self.feature[node] >= 0
        return self.value[node]

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "value")}

    @classmethod
    def from_dict(cls, d):
        return cls(
            np.array(d["feature"], dtype=np.int64),
            np.array(d["threshold"], dtype=float),
            np.array(d["left"], dtype=np.int64),
            np.array(d["right"], dtype=np.int64),
            np.array(d["value"], dtype=float),
        )


def _best_split(X, order, r, mask, min_leaf):
    """Best (gain, feature, threshold) over all features for the rows in ``mask``."""
    best = (0.0, -1, 0.0)
    n = int(mask.sum())
    if n < 2 * min_leaf:
        return best
    total = r[mask].sum()
    for f in range(X.shape[1]):
        rows = order[:, f][mask[order[:, f]]]
        xs = X[rows, f]
        cs = np.cumsum(r[rows])
        # candidate cut after position i (left has i+1 rows)
        i = np.arange(min_leaf - 1, n - min_leaf)
        if len(i) == 0:
            continue
        i = i[xs[i] < xs[i + 1]]
        if len(i) == 0:
            continue
        nl = i + 1.0
        nr = n - nl
        sl = cs[i]
        sr = total - sl
        # SSE reduction relative to the unsplit node
        gain = sl * sl / nl + sr * sr / nr - total * total / n
        j = int(np.argmax(gain))
        if gain[j] > best[0] + 1e-12 * abs(best[0]):
            best = (float(gain[j]), f, 0.5 * (xs[i[j]] + xs[i[j] + 1]))
    return best


def fit_tree(X, r, order, max_depth, min_leaf) -> RegressionTree:
    feature, threshold, left, right, value = [], [], [], [], []

    def grow(mask, depth):
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(float(r[mask].mean()))
        if depth >= max_depth:
            return node
        gain, f, thr = _best_split(X, order, r, mask, min_leaf)
        if f < 0 or gain <= 0:
            return node
        feature[node] = f
        threshold[node] = thr
        go_left = mask & (X[:, f] <= thr)
        left[node] = grow(go_left, depth + 1)
        right[node] = grow(mask & ~go_left, depth + 1)
        return node

    grow(np.ones(len(X), dtype=bool), 0)
    return RegressionTree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=float),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(value, dtype=float),
    )


@dataclass
class GbtModel:
    base: np.ndarray  # per-output mean target
    trees: list[list[RegressionTree]]  # trees[output][t]
    learning_rate: float

    def predict(self, design, n_trees: int | None = None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(design, dtype=float))
        out = np.tile(self.base, (len(X), 1))
        for j, ensemble in enumerate(self.trees):
            for tree in ensemble[:n_trees]:
                out[:, j] += self.learning_rate * tree.predict(X)
        return out

    def to_dict(self):
        return {
            "base": self.base.tolist(),
            "learning_rate": self.learning_rate,
            "trees": [[t.to_dict() for t in ens] for ens in self.trees],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            np.array(d["base"], dtype=float),
            [[RegressionTree.from_dict(t) for t in ens] for ens in d["trees"]],
            float(d["learning_rate"]),
        )


def fit_gbt(design, targets, cfg: GbtConfig | None = None) -> GbtModel:
    cfg = cfg or GbtConfig()
    X = np.atleast_2d(np.asarray(design, dtype=float))
    Y = np.asarray(targets, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if len(X) == 0 or len(X) != len(Y):
        raise ValueError("design and targets must be non-empty with matching rows")
    if len(X) < 2 * cfg.min_samples_leaf and cfg.n_trees > 0:
        raise ValueError(f"need at least {2 * cfg.min_samples_leaf} rows for min_samples_leaf={cfg.min_samples_leaf}")
    order = np.argsort(X, axis=0, kind="stable")
    base = Y.mean(axis=0)
    trees = []
    for j in range(Y.shape[1]):
        pred = np.full(len(X), base[j])
        ensemble = []
        for _ in range(cfg.n_trees):
            tree = fit_tree(X, Y[:, j] - pred, order, cfg.max_depth, cfg.min_samples_leaf)
            pred = pred + cfg.learning_rate * tree.predict(X)
            ensemble.append(tree)
        trees.append(ensemble)
    return GbtModel(base, trees, cfg.learning_rate)


class GbtForecaster(SupervisedForecaster):
    kind = "gbt"

    def __init__(self, window: LagWindowConfig | None = None, cfg: GbtConfig | None = None, use_exog: bool = True,
                 log_target: bool = False):
        super().__init__(window, use_exog, log_target)
        self.cfg = cfg or GbtConfig()

    def _fit_regressor(self, design, targets):
        return fit_gbt(design, targets, self.cfg)

    def to_dict(self):
        d = super().to_dict()
        d["config"] = vars(self.cfg).copy()
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(LagWindowConfig(d["window"]["K"]), GbtConfig(**d["config"]), d["use_exog"], d.get("log_target", False))._restore(d, GbtModel)
