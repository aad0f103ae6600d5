from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leachgrid.forecasters.supervised import LagWindowConfig, SupervisedForecaster

RIDGE_LAMBDA = 1e-8
MAX_CONDITION = 1e12


@dataclass
class LinearModel:
    """Multi-output affine map; ``weights[0]`` is the intercept row."""

    weights: np.ndarray
    ridge: bool = False

    def predict(self, design) -> np.ndarray:
        design = np.atleast_2d(np.asarray(design, dtype=float))
        return self.weights[0] + design @ self.weights[1:]

    def to_dict(self):
        return {"weights": self.weights.tolist(), "ridge": self.ridge}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["weights"], dtype=float), d["ridge"])


def fit_linear(design, targets) -> LinearModel:
    """Per-output least squares by the normal equations.

    Falls back to a tiny ridge term when the Gram matrix is singular or
    badly conditioned.
    """
    X = np.atleast_2d(np.asarray(design, dtype=float))
    Y = np.asarray(targets, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if len(X) != len(Y):
        raise ValueError("design and targets differ in row count")
    A = np.hstack([np.ones((len(X), 1)), X])
    if A.shape[0] < A.shape[1]:
        raise ValueError(f"need at least {A.shape[1]} rows for {X.shape[1]} features, got {A.shape[0]}")
    gram = A.T @ A
    rhs = A.T @ Y
    cond = np.linalg.cond(gram)
    ridge = bool(not np.isfinite(cond) or cond > MAX_CONDITION)
    if not ridge:
        try:
            w = np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError:
            ridge = True
    if ridge:
        w = np.linalg.solve(gram + RIDGE_LAMBDA * np.eye(len(gram)), rhs)
    return LinearModel(w, ridge)


class LinearForecaster(SupervisedForecaster):
    kind = "ols"

    def _fit_regressor(self, design, targets):
        return fit_linear(design, targets)

    @classmethod
    def from_dict(cls, d):
        return cls(LagWindowConfig(d["window"]["K"]), d["use_exog"], d.get("log_target", False))._restore(d, LinearModel)
