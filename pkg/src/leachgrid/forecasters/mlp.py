"""Feedforward network trained by mini-batch gradient descent on squared loss.

Inputs and targets are standardised internally; parameters live in that
scaled space. Updates use Adam step sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from leachgrid.forecasters.supervised import LagWindowConfig, SupervisedForecaster

ACTIVATIONS = ("linear", "relu")


@dataclass(frozen=True)
class MlpConfig:
    layer_sizes: tuple[int, ...] = (16,)
    activation: str = "linear"
    epochs: int = 200
    learning_rate: float = 0.01
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(s) for s in self.layer_sizes))
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if any(s < 1 for s in self.layer_sizes):
            raise ValueError("hidden layer sizes must be positive")
        if self.epochs < 0 or self.batch_size < 1 or not self.learning_rate > 0:
            raise ValueError("epochs >= 0, batch_size >= 1 and learning_rate > 0 required")
        if self.seed is None:
            raise ValueError("seed is mandatory")


def init_params(sizes, activation, rng) -> list[tuple[np.ndarray, np.ndarray]]:
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        scale = np.sqrt((2.0 if activation == "relu" else 1.0) / fan_in)
        params.append((rng.normal(0.0, scale, (fan_in, fan_out)), np.zeros(fan_out)))
    return params


def forward(params, X, activation):
    """Return the output and the per-layer inputs/pre-activations needed by backprop."""
    cache = []
    h = X
    last = len(params) - 1
    for i, (W, b) in enumerate(params):
        z = h @ W + b
        cache.append((h, z))
        h = z if (i == last or activation == "linear") else np.maximum(z, 0.0)
    return h, cache


def loss_and_grad(params, X, Y, activation):
    """Mean squared error over all entries and its gradient w.r.t. every parameter."""
    out, cache = forward(params, X, activation)
    diff = out - Y
    loss = float(np.mean(diff * diff))
    delta = 2.0 * diff / diff.size
    grads = [None] * len(params)
    for i in range(len(params) - 1, -1, -1):
        h, z = cache[i]
        W, _ = params[i]
        grads[i] = (h.T @ delta, delta.sum(axis=0))
        if i > 0:
            delta = delta @ W.T
            if activation == "relu":
                delta = delta * (cache[i - 1][1] > 0)
    return loss, grads


@dataclass
class MlpModel:
    params: list[tuple[np.ndarray, np.ndarray]]
    activation: str
    x_mean: np.ndarray
    x_scale: np.ndarray
    y_mean: np.ndarray
    y_scale: np.ndarray
    loss_history: list[float] = field(default_factory=list)

    def predict(self, design) -> np.ndarray:
        X = (np.atleast_2d(np.asarray(design, dtype=float)) - self.x_mean) / self.x_scale
        out, _ = forward(self.params, X, self.activation)
        return out * self.y_scale + self.y_mean

    def to_dict(self):
        return {
            "activation": self.activation,
            "params": [[W.tolist(), b.tolist()] for W, b in self.params],
            "x_mean": self.x_mean.tolist(),
            "x_scale": self.x_scale.tolist(),
            "y_mean": self.y_mean.tolist(),
            "y_scale": self.y_scale.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            [(np.array(W, dtype=float).reshape(len(W), -1), np.array(b, dtype=float)) for W, b in d["params"]],
            d["activation"],
            *(np.array(d[k], dtype=float) for k in ("x_mean", "x_scale", "y_mean", "y_scale")),
        )


def _scale(a):
    mean = a.mean(axis=0)
    sd = a.std(axis=0)
    return mean, np.where(sd > 1e-12, sd, 1.0)


def fit_mlp(design, targets, cfg: MlpConfig | None = None) -> MlpModel:
    cfg = cfg or MlpConfig()
    X = np.atleast_2d(np.asarray(design, dtype=float))
    Y = np.asarray(targets, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if len(X) == 0 or len(X) != len(Y):
        raise ValueError("design and targets must be non-empty with matching rows")
    xm, xs = _scale(X)
    ym, ys = _scale(Y)
    Xs, Ys = (X - xm) / xs, (Y - ym) / ys

    rng = np.random.default_rng(cfg.seed)
    sizes = [X.shape[1], *cfg.layer_sizes, Y.shape[1]]
    params = init_params(sizes, cfg.activation, rng)
    flat = [p for layer in params for p in layer]
    m = [np.zeros_like(p) for p in flat]
    v = [np.zeros_like(p) for p in flat]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0
    history = []
    n = len(Xs)
    for epoch in range(cfg.epochs):
        perm = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = perm[start:start + cfg.batch_size]
            loss, grads = loss_and_grad(params, Xs[batch], Ys[batch], cfg.activation)
            if not np.isfinite(loss):
                raise FloatingPointError(
                    f"MLP loss became {loss} at epoch {epoch}, step {step}; "
                    f"try a smaller learning_rate than {cfg.learning_rate}"
                )
            step += 1
            flat_g = [g for layer in grads for g in layer]
            for p, g, mi, vi in zip(flat, flat_g, m, v):
                mi *= beta1
                mi += (1 - beta1) * g
                vi *= beta2
                vi += (1 - beta2) * g * g
                mhat = mi / (1 - beta1**step)
                vhat = vi / (1 - beta2**step)
                p -= cfg.learning_rate * mhat / (np.sqrt(vhat) + eps)
        out, _ = forward(params, Xs, cfg.activation)
        history.append(float(np.mean((out - Ys) ** 2)))
    return MlpModel(params, cfg.activation, xm, xs, ym, ys, history)


class MlpForecaster(SupervisedForecaster):
    kind = "mlp"

    def __init__(self, window: LagWindowConfig | None = None, cfg: MlpConfig | None = None, use_exog: bool = True,
                 log_target: bool = False):
        super().__init__(window, use_exog, log_target)
        self.cfg = cfg or MlpConfig()

    def _fit_regressor(self, design, targets):
        return fit_mlp(design, targets, self.cfg)

    def to_dict(self):
        d = super().to_dict()
        c = vars(self.cfg).copy()
        c["layer_sizes"] = list(c["layer_sizes"])
        d["config"] = c
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(LagWindowConfig(d["window"]["K"]), MlpConfig(**d["config"]), d["use_exog"], d.get("log_target", False))._restore(d, MlpModel)
