"""Three-layer feedforward classifier with connection masks.

Hidden layer uses tanh, output layer sigmoid; error is summed squared error
over outputs. Training is per-pattern gradient descent with a weight penalty
that drives small weights toward zero so they can be pruned later. Biases are
ordinary weights attached to a fixed input of 1 (last column of each matrix).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np


class TrainingDivergenceError(RuntimeError):
    """Loss became non-finite; learning rate is too large for the data."""


@dataclass
class TrainConfig:
    learning_rate: float = 0.3
    tau: int = 10                   # plateau window in epochs
    plateau_rel_tol: float = 1e-3
    max_epochs: int = 500
    eps1: float = 0.1               # bounded-penalty coefficient
    eps2: float = 1e-4              # quadratic-penalty coefficient
    beta: float = 10.0
    seed: int = 0
    init_range: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.tau < 1:
            raise ValueError("tau must be at least 1")
        if self.eps1 < 0 or self.eps2 < 0:
            raise ValueError("penalty coefficients must be non-negative")


@dataclass
class EpochStats:
    epoch: int
    sse: float
    penalty: float
    train_misclass: float
    validation_sse: float | None = None


@dataclass
class Network:
    w: np.ndarray       # (h, n+1) input->hidden, last column is the bias weight
    v: np.ndarray       # (c, h+1) hidden->output, last column is the bias weight
    mask_w: np.ndarray  # bool, same shape as w
    mask_v: np.ndarray  # bool, same shape as v

    @property
    def n(self) -> int:
        return self.w.shape[1] - 1

    @property
    def h(self) -> int:
        return self.w.shape[0]

    @property
    def c(self) -> int:
        return self.v.shape[0]

    def copy(self) -> "Network":
        return Network(self.w.copy(), self.v.copy(), self.mask_w.copy(), self.mask_v.copy())

    def apply_masks(self) -> None:
        self.w[~self.mask_w] = 0.0
        self.v[~self.mask_v] = 0.0

    def live_connections(self) -> int:
        """Live non-bias connections (the architecture size reported in runs)."""
        return int(self.mask_w[:, : self.n].sum() + self.mask_v[:, : self.h].sum())

    def live_inputs(self) -> list[int]:
        return [l for l in range(self.n) if self.mask_w[:, l].any()]

    def live_hidden(self) -> list[int]:
        return [m for m in range(self.h) if self.mask_v[:, m].any()]


def init_network(n: int, h: int, c: int, rng: np.random.Generator,
                 init_range: tuple[float, float] = (-1.0, 1.0)) -> Network:
    lo, hi = init_range
    w = rng.uniform(lo, hi, size=(h, n + 1))
    v = rng.uniform(lo, hi, size=(c, h + 1))
    return Network(w, v, np.ones_like(w, dtype=bool), np.ones_like(v, dtype=bool))


def add_hidden_node(net: Network, rng: np.random.Generator,
                    init_range: tuple[float, float] = (-1.0, 1.0)) -> Network:
    """Append one hidden node with fresh random weights; keep everything else."""
    lo, hi = init_range
    h = net.h
    w = np.vstack([net.w, rng.uniform(lo, hi, size=(1, net.n + 1))])
    new_col = rng.uniform(lo, hi, size=(net.c, 1))
    v = np.hstack([net.v[:, :h], new_col, net.v[:, h:]])
    mask_w = np.vstack([net.mask_w, np.ones((1, net.n + 1), dtype=bool)])
    mask_v = np.hstack([net.mask_v[:, :h], np.ones((net.c, 1), dtype=bool), net.mask_v[:, h:]])
    return Network(w, v, mask_w, mask_v)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(net: Network, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hidden activations and output activations for one input vector."""
    if x.shape[0] != net.n:
        raise ValueError(f"input has {x.shape[0]} features, network expects {net.n}")
    hidden = np.tanh(net.w[:, :-1] @ x + net.w[:, -1])
    outputs = _sigmoid(net.v[:, :-1] @ hidden + net.v[:, -1])
    return hidden, outputs


def forward_batch(net: Network, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = np.tanh(X @ net.w[:, :-1].T + net.w[:, -1])
    outputs = _sigmoid(hidden @ net.v[:, :-1].T + net.v[:, -1])
    return hidden, outputs


def outputs_from_hidden(net: Network, hidden: np.ndarray) -> np.ndarray:
    """Output activations given (possibly replaced) hidden activations."""
    return _sigmoid(hidden @ net.v[:, :-1].T + net.v[:, -1])


def sse(net: Network, X: np.ndarray, T: np.ndarray) -> float:
    _, outputs = forward_batch(net, X)
    return 0.5 * float(((outputs - T) ** 2).sum())


def penalty(net: Network, eps1: float, eps2: float, beta: float) -> float:
    """Bounded + quadratic penalty over all live weights (biases included)."""
    total = 0.0
    for u, mask in ((net.w, net.mask_w), (net.v, net.mask_v)):
        live = u[mask]
        u2 = live * live
        total += eps1 * float((beta * u2 / (1.0 + beta * u2)).sum()) + eps2 * float(u2.sum())
    return total


def _penalty_grad(u: np.ndarray, eps1: float, eps2: float, beta: float) -> np.ndarray:
    u2 = u * u
    return eps1 * 2.0 * beta * u / (1.0 + beta * u2) ** 2 + 2.0 * eps2 * u


def gradient(net: Network, x: np.ndarray, t: np.ndarray, cfg: TrainConfig,
             penalty_scale: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of (pattern squared error)/2 + penalty_scale * penalty.

    Masked connections get exactly zero gradient.
    """
    hidden, outputs = forward(net, x)
    d_out = (outputs - t) * outputs * (1.0 - outputs)
    ab = np.append(hidden, 1.0)
    gv = np.outer(d_out, ab)
    d_hid = (net.v[:, :-1].T @ d_out) * (1.0 - hidden * hidden)
    gw = np.outer(d_hid, np.append(x, 1.0))
    if penalty_scale != 0.0:
        gw += penalty_scale * _penalty_grad(net.w, cfg.eps1, cfg.eps2, cfg.beta)
        gv += penalty_scale * _penalty_grad(net.v, cfg.eps1, cfg.eps2, cfg.beta)
    gw[~net.mask_w] = 0.0
    gv[~net.mask_v] = 0.0
    return gw, gv


def predict(net: Network, x: np.ndarray) -> int:
    """Class with the largest output; ties go to the lowest index."""
    _, outputs = forward(net, x)
    return int(np.argmax(outputs))


def predict_batch(net: Network, X: np.ndarray) -> np.ndarray:
    _, outputs = forward_batch(net, X)
    return np.argmax(outputs, axis=1)


def misclass_rate(net: Network, X: np.ndarray, y: np.ndarray) -> float:
    return float((predict_batch(net, X) != y).mean())


def accuracy(net: Network, X: np.ndarray, y: np.ndarray) -> float:
    return 1.0 - misclass_rate(net, X, y)


def train_to_plateau(net: Network, X: np.ndarray, T: np.ndarray,
                     cfg: TrainConfig) -> tuple[Network, list[EpochStats]]:
    """Per-pattern gradient descent in fixed order until the error plateaus.

    Stops when the relative improvement of the epoch error over the last
    cfg.tau epochs falls below cfg.plateau_rel_tol, or at cfg.max_epochs.
    """
    if len(X) == 0:
        raise ValueError("training set is empty")
    net = net.copy()
    w, v = net.w, net.v
    mask_w = net.mask_w.astype(float)
    mask_v = net.mask_v.astype(float)
    k, n = X.shape
    h, c = net.h, net.c
    Xb = np.hstack([X, np.ones((k, 1))])
    lr = cfg.learning_rate
    pscale = 1.0 / k
    eps1, eps2, beta = cfg.eps1, cfg.eps2, cfg.beta
    y = np.argmax(T, axis=1)

    stats: list[EpochStats] = []
    with np.errstate(over="ignore"):
        for epoch in range(1, cfg.max_epochs + 1):
            for i in range(k):
                xb = Xb[i]
                a = np.tanh(w @ xb)
                s = v[:, :h] @ a + v[:, h]
                out = 1.0 / (1.0 + np.exp(-s))
                d_out = (out - T[i]) * out * (1.0 - out)
                d_hid = (v[:, :h].T @ d_out) * (1.0 - a * a)
                gv = np.outer(d_out, np.append(a, 1.0))
                gv += pscale * _penalty_grad(v, eps1, eps2, beta)
                gw = np.outer(d_hid, xb)
                gw += pscale * _penalty_grad(w, eps1, eps2, beta)
                w -= lr * gw * mask_w
                v -= lr * gv * mask_v
            _, out_b = forward_batch(net, X)
            epoch_sse = 0.5 * float(((out_b - T) ** 2).sum())
            if not np.isfinite(epoch_sse):
                raise TrainingDivergenceError(
                    f"error became non-finite at epoch {epoch}; reduce the learning rate"
                )
            stats.append(EpochStats(
                epoch=epoch,
                sse=epoch_sse,
                penalty=penalty(net, eps1, eps2, beta),
                train_misclass=float((np.argmax(out_b, axis=1) != y).mean()),
            ))
        if len(stats) > cfg.tau:
            prev = stats[-cfg.tau - 1].sse
            improvement = (prev - epoch_sse) / max(prev, 1e-12)
            if improvement < cfg.plateau_rel_tol:
                break
    net.apply_masks()  # counteract any float drift on masked entries
    return net, stats


# --- snapshot serialization ------------------------------------------------

FORMAT_TAG = "netrules-network/1"


def network_to_dict(net: Network, cfg: TrainConfig | None = None) -> dict:
    doc = {
        "format": FORMAT_TAG,
        "n": net.n, "h": net.h, "c": net.c,
        "w": net.w.tolist(),
        "v": net.v.tolist(),
        "mask_w": net.mask_w.astype(int).tolist(),
        "mask_v": net.mask_v.astype(int).tolist(),
    }
    if cfg is not None:
        doc["train_config"] = asdict(cfg)
    return doc


def network_from_dict(doc: dict) -> tuple[Network, TrainConfig | None]:
    if doc.get("format") != FORMAT_TAG:
        raise ValueError(f"unexpected snapshot format {doc.get('format')!r}")
    net = Network(
        np.array(doc["w"], dtype=float),
        np.array(doc["v"], dtype=float),
        np.array(doc["mask_w"], dtype=bool),
        np.array(doc["mask_v"], dtype=bool),
    )
    cfg = None
    if "train_config" in doc:
        d = dict(doc["train_config"])
        d["init_range"] = tuple(d["init_range"])
        cfg = TrainConfig(**d)
    return net, cfg


def save_network(path: str, net: Network, cfg: TrainConfig | None = None) -> None:
    with open(path, "w") as f:
        json.dump(network_to_dict(net, cfg), f, indent=1)


def load_network(path: str) -> tuple[Network, TrainConfig | None]:
    with open(path) as f:
        return network_from_dict(json.load(f))
