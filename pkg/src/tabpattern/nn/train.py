"""Seeded minibatch training loop."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..rng import derive_seed, substream
from .adam import init_adam, adam_step
from .network import ConvNet, loss_and_grads


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 64
    epochs: int = 10
    seed: int = 0
    alpha: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-7


def one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((len(labels), n_classes))
    out[np.arange(len(labels)), labels] = 1.0
    return out


def train(
    net: ConvNet,
    images: np.ndarray,
    class_idx: np.ndarray,
    config: TrainConfig,
) -> list[dict[str, float]]:
    """Train ``net`` in place on (N, R, C, 1) images with integer labels.

    Batch shuffling and dropout masks derive from ``config.seed``, so a
    rerun reproduces the same parameters bit for bit. Returns one record
    per epoch with the mean minibatch loss and training accuracy.
    """
    n = len(images)
    if n == 0:
        raise ValidationError("training corpus is empty")
    if not (1 <= config.batch_size <= n):
        raise ValidationError(f"batch_size must lie in [1, {n}], got {config.batch_size}")

    targets = one_hot(class_idx, net.n_classes)
    opt = init_adam(
        net.parameters(),
        alpha=config.alpha,
        beta1=config.beta1,
        beta2=config.beta2,
        eps=config.eps,
    )

    history: list[dict[str, float]] = []
    for epoch in range(config.epochs):
        perm = substream(config.seed, "shuffle", epoch).permutation(n)
        losses, correct = [], 0
        for step, start in enumerate(range(0, n, config.batch_size)):
            idx = perm[start : start + config.batch_size]
            drop_seed = derive_seed(config.seed, "dropout", epoch, step)
            loss, grads = loss_and_grads(net, images[idx], targets[idx], dropout_seed=drop_seed)
            adam_step(net.parameters(), grads, opt)
            losses.append(loss * len(idx))
            # training accuracy from the dropout-mode forward pass
            probs, _ = _last_probs(net, images[idx], drop_seed)
            correct += int((probs.argmax(axis=1) == class_idx[idx]).sum())
        history.append(
            {
                "epoch": float(epoch),
                "loss": float(np.sum(losses) / n),
                "accuracy": float(correct / n),
            }
        )
    return history


def _last_probs(net, batch, drop_seed):
    from .network import forward_batch

    return forward_batch(net, batch, training=True, dropout_seed=drop_seed)
