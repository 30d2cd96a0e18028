"""Network assembly, forward evaluation, and loss gradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericalError, ShapeError, ValidationError
from ..rng import substream
from .layers import Conv2D, Dense, Dropout, Flatten, ReLU

PROB_FLOOR = 1e-12


@dataclass
class ConvNet:
    """An ordered stack of layers ending in a softmax over pattern classes."""

    layers: list = field(default_factory=list)
    l1_lambda: float = 1e-5
    n_classes: int = 5

    def parameters(self) -> list[np.ndarray]:
        return [p for layer in self.layers for p in layer.params()]

    def parameter_kinds(self) -> list[str]:
        return [k for layer in self.layers for k in layer.param_kinds()]

    def set_parameters(self, values: list[np.ndarray]) -> None:
        own = self.parameters()
        if len(own) != len(values):
            raise ShapeError("parameter count mismatch")
        for dst, src in zip(own, values):
            if dst.shape != src.shape:
                raise ShapeError(f"parameter shape mismatch: {dst.shape} vs {src.shape}")
            dst[...] = src


def default_convnet(
    rows: int,
    cols: int,
    n_classes: int = 5,
    l1_lambda: float = 1e-5,
    seed: int = 0,
) -> ConvNet:
    """The stock architecture: two 5x5/32 convolutions, dropout 0.25, two
    3x3/64 convolutions, a 256-unit dense layer, dropout 0.5, and the
    class logits. ReLU follows every convolution and the hidden dense
    layer."""
    rng = substream(seed, "net-init")
    layers = [
        Conv2D(1, 32, 5, 5, rng),
        ReLU(),
        Conv2D(32, 32, 5, 5, rng),
        ReLU(),
        Dropout(0.25),
        Conv2D(32, 64, 3, 3, rng),
        ReLU(),
        Conv2D(64, 64, 3, 3, rng),
        ReLU(),
        Flatten(),
        Dense(rows * cols * 64, 256, rng),
        ReLU(),
        Dropout(0.5),
        Dense(256, n_classes, rng),
    ]
    return ConvNet(layers=layers, l1_lambda=l1_lambda, n_classes=n_classes)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise stable softmax."""
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def forward_batch(
    net: ConvNet,
    x: np.ndarray,
    training: bool = False,
    dropout_seed: int | None = None,
) -> tuple[np.ndarray, list]:
    """Run a (B, R, C, 1) batch through the network.

    Returns class probabilities (B, n_classes) and the per-layer caches
    needed for the backward pass. Dropout fires only when ``training`` is
    true; its masks derive from ``dropout_seed`` so a repeated call is
    bit-identical.
    """
    if x.ndim != 4:
        raise ShapeError(f"expected a (B, R, C, 1) batch, got shape {x.shape}")
    if training and dropout_seed is None and any(
        isinstance(l, Dropout) and l.rate > 0 for l in net.layers
    ):
        raise ValidationError("training forward pass through dropout needs a dropout_seed")

    caches = []
    out = x
    for i, layer in enumerate(net.layers):
        rng = (
            substream(dropout_seed, "drop", i)
            if training and isinstance(layer, Dropout) and dropout_seed is not None
            else None
        )
        out, cache = layer.forward(out, training, rng)
        if not np.all(np.isfinite(out)):
            raise NumericalError(f"non-finite activations at layer {i} ({type(layer).__name__})")
        caches.append(cache)
    return softmax(out), caches


def forward(
    net: ConvNet,
    image: np.ndarray,
    training: bool = False,
    dropout_seed: int | None = None,
) -> np.ndarray:
    """Probabilities for a single R x C image (adds batch/channel axes)."""
    x = np.asarray(image, dtype=float)
    if x.ndim == 2:
        x = x[None, :, :, None]
    elif x.ndim == 3:
        x = x[None]
    probs, _ = forward_batch(net, x, training=training, dropout_seed=dropout_seed)
    return probs[0]


def predict_batch(net: ConvNet, x: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Inference-mode probabilities, evaluated in memory-bounded chunks."""
    outs = [forward_batch(net, x[i : i + chunk])[0] for i in range(0, len(x), chunk)]
    return np.vstack(outs)


def loss_and_grads(
    net: ConvNet,
    inputs: np.ndarray,
    targets: np.ndarray,
    dropout_seed: int | None = None,
    return_probs: bool = False,
):
    """Mean cross-entropy plus l1 weight penalty, with parameter gradients.

    ``targets`` is a (B, n_classes) one-hot matrix. Probabilities are
    clamped to [1e-12, 1 - 1e-12] inside the log. Dropout participates
    exactly when ``dropout_seed`` is given, with identical masks in the
    forward and backward passes. The l1 subgradient at 0 is taken as 0
    and biases are not penalised.
    """
    if len(inputs) == 0:
        raise ValidationError("loss_and_grads requires a non-empty batch")
    if targets.ndim != 2 or targets.shape != (len(inputs), net.n_classes):
        raise ShapeError(f"targets must be ({len(inputs)}, {net.n_classes}), got {targets.shape}")

    training = dropout_seed is not None
    probs, caches = forward_batch(net, inputs, training=training, dropout_seed=dropout_seed)
    clamped = np.clip(probs, PROB_FLOOR, 1.0 - PROB_FLOOR)
    loss = float(-(targets * np.log(clamped)).sum(axis=1).mean())

    for p, kind in zip(net.parameters(), net.parameter_kinds()):
        if kind == "weight" and net.l1_lambda:
            loss += net.l1_lambda * float(np.abs(p).sum())

    b = len(inputs)
    grad = (probs - targets) / b
    grads_rev: list[np.ndarray] = []
    for layer, cache in zip(reversed(net.layers), reversed(caches)):
        grad, layer_grads = layer.backward(grad, cache)
        grads_rev.extend(reversed(layer_grads))
    grads = list(reversed(grads_rev))

    if net.l1_lambda:
        for g, p, kind in zip(grads, net.parameters(), net.parameter_kinds()):
            if kind == "weight":
                g += net.l1_lambda * np.sign(p)
    if return_probs:
        return loss, grads, probs
    return loss, grads
