"""Fully-connected rectifier Q-network with manual backpropagation."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DivergenceError


class QNetwork:
    """Maps a state vector to one Q-value per action.

    Hidden layers use a rectifier, the output layer is affine. ``weights[k]``
    has shape ``(layer_sizes[k], layer_sizes[k + 1])``.
    """

    def __init__(self, weights, biases):
        if len(weights) != len(biases) or not weights:
            raise ValueError("need one bias vector per weight matrix")
        self.weights = [np.array(w, dtype=np.float64) for w in weights]
        self.biases = [np.array(b, dtype=np.float64) for b in biases]
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ValueError(f"layer {k}: bias shape {b.shape} does not match weights {w.shape}")
            if k and w.shape[0] != self.weights[k - 1].shape[1]:
                raise ValueError(f"layer {k}: input size does not chain")

    @property
    def layer_sizes(self):
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def n_actions(self):
        return self.weights[-1].shape[1]

    def copy(self) -> "QNetwork":
        return QNetwork(self.weights, self.biases)

    def params(self):
        return self.weights + self.biases

    def __call__(self, states):
        return forward(self, states)


def net_init(layer_sizes, seed) -> QNetwork:
    """Weights ~ N(0, 1/fan_in), zero biases; deterministic in ``seed``.

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.
    """
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 2 or min(sizes) < 1:
        raise ValueError(f"invalid layer sizes {layer_sizes!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights = [rng.standard_normal((a, b)) / math.sqrt(a) for a, b in zip(sizes[:-1], sizes[1:])]
    biases = [np.zeros(b) for b in sizes[1:]]
    return QNetwork(weights, biases)


def _activations(net, x):
    acts = [x]
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = acts[-1] @ w + b
        acts.append(z if k == last else np.maximum(z, 0.0))
    return acts


def forward(net: QNetwork, state) -> np.ndarray:
    """Q-values for one state (1-D) or a batch of states (2-D)."""
    x = np.asarray(state, dtype=np.float64)
    if x.shape[-1] != net.layer_sizes[0]:
        raise ValueError(f"state length {x.shape[-1]} != network input {net.layer_sizes[0]}")
    return _activations(net, x)[-1]


def loss_and_grads(net: QNetwork, states, actions, targets):
    """Mean squared TD error on the taken actions and its parameter gradients.

    Returns ``(loss, grad_w, grad_b)``.
    """
    x = np.atleast_2d(np.asarray(states, dtype=np.float64))
    actions = np.asarray(actions, dtype=np.intp)
    targets = np.asarray(targets, dtype=np.float64)
    n = len(x)
    acts = _activations(net, x)
    q = acts[-1]
    rows = np.arange(n)
    err = q[rows, actions] - targets
    loss = float(np.mean(err * err))

    delta = np.zeros_like(q)
    delta[rows, actions] = 2.0 * err / n
    grad_w = [None] * len(net.weights)
    grad_b = [None] * len(net.weights)
    for k in range(len(net.weights) - 1, -1, -1):
        grad_w[k] = acts[k].T @ delta
        grad_b[k] = delta.sum(axis=0)
        if k:
            delta = (delta @ net.weights[k].T) * (acts[k] > 0.0)
    return loss, grad_w, grad_b


class SGD:
    """Plain gradient descent, optionally with heavy-ball momentum."""

    def __init__(self, momentum=0.0):
        self.momentum = momentum
        self.velocity = None

    def step(self, net, grad_w, grad_b, lr):
        grads = grad_w + grad_b
        if self.momentum:
            if self.velocity is None:
                self.velocity = [np.zeros_like(g) for g in grads]
            for v, g in zip(self.velocity, grads):
                v *= self.momentum
                v += g
            grads = self.velocity
        for p, g in zip(net.params(), grads):
            p -= lr * g


def train_batch(net: QNetwork, batch, targets, learning_rate, optimizer=None):
    """One gradient step toward ``targets`` on the taken actions.

    Updates ``net`` in place and returns ``(net, loss)`` with the pre-update
    loss. Raises :class:`DivergenceError` on a non-finite loss or gradient.
    """
    if len(batch) == 0:
        raise ValueError("empty batch")
    states = np.stack([tr.state for tr in batch])
    actions = [tr.action for tr in batch]
    loss, gw, gb = loss_and_grads(net, states, actions, targets)
    if not math.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in gw + gb):
        raise DivergenceError(f"non-finite training loss ({loss}); reduce the learning rate")
    (optimizer or SGD()).step(net, gw, gb, learning_rate)
    return net, loss
