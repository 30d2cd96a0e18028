from .adam import AdamState, adam_step, init_adam
from .layers import Conv2D, Dense, Dropout, Flatten, ReLU
from .network import (
    ConvNet,
    default_convnet,
    forward,
    forward_batch,
    loss_and_grads,
    predict_batch,
    softmax,
)
from .train import TrainConfig, train

__all__ = [
    "AdamState",
    "adam_step",
    "init_adam",
    "Conv2D",
    "Dense",
    "Dropout",
    "Flatten",
    "ReLU",
    "ConvNet",
    "default_convnet",
    "forward",
    "forward_batch",
    "loss_and_grads",
    "predict_batch",
    "softmax",
    "TrainConfig",
    "train",
]
