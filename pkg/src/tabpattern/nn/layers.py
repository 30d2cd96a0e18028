"""Network layers with explicit forward/backward passes.

Convolutions are stride-1 with symmetric "same" zero padding and are
evaluated as a single matrix product over im2col patch matrices, which
keeps both directions inside BLAS. Patch matrices are rebuilt during the
backward pass instead of cached; the rebuild is bandwidth-bound and far
cheaper than holding hundreds of megabytes alive per layer.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ShapeError


def _he_uniform(rng: np.random.Generator, fan_in: int, shape: tuple[int, ...]) -> np.ndarray:
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)


def _im2col(x_padded: np.ndarray, kh: int, kw: int) -> np.ndarray:
    """(B, H+kh-1, W+kw-1, C) -> (B*H*W, kh*kw*C) patch matrix."""
    win = sliding_window_view(x_padded, (kh, kw), axis=(1, 2))
    # (B, H, W, C, kh, kw) -> (B, H, W, kh, kw, C)
    win = win.transpose(0, 1, 2, 4, 5, 3)
    b, h, w = win.shape[:3]
    return np.ascontiguousarray(win).reshape(b * h * w, kh * kw * x_padded.shape[3])


class Conv2D:
    """Stride-1 same-padded 2-D convolution over NHWC tensors."""

    def __init__(self, cin: int, cout: int, kh: int, kw: int, rng: np.random.Generator):
        if kh % 2 == 0 or kw % 2 == 0:
            raise ShapeError("same-padded convolution requires odd kernel sizes")
        self.cin, self.cout, self.kh, self.kw = cin, cout, kh, kw
        self.W = _he_uniform(rng, kh * kw * cin, (kh, kw, cin, cout))
        self.b = np.zeros(cout)

    def params(self) -> list[np.ndarray]:
        return [self.W, self.b]

    def param_kinds(self) -> list[str]:
        return ["weight", "bias"]

    def _pad(self, x: np.ndarray) -> np.ndarray:
        ph, pw = (self.kh - 1) // 2, (self.kw - 1) // 2
        return np.pad(x, ((0, 0), (ph, ph), (pw, pw), (0, 0)))

    def forward(self, x: np.ndarray, training: bool, rng) -> tuple[np.ndarray, object]:
        if x.ndim != 4 or x.shape[3] != self.cin:
            raise ShapeError(
                f"conv expected (B, H, W, {self.cin}) input, got {x.shape}"
            )
        b, h, w, _ = x.shape
        cols = _im2col(self._pad(x), self.kh, self.kw)
        y = cols @ self.W.reshape(-1, self.cout) + self.b
        return y.reshape(b, h, w, self.cout), x

    def backward(self, dy: np.ndarray, cache) -> tuple[np.ndarray, list[np.ndarray]]:
        x = cache
        b, h, w, _ = x.shape
        dy_mat = dy.reshape(b * h * w, self.cout)

        cols = _im2col(self._pad(x), self.kh, self.kw)
        dW = (cols.T @ dy_mat).reshape(self.W.shape)
        db = dy_mat.sum(axis=0)

        # dx is the same-padded correlation of dy with the flipped kernel
        w_flip = self.W[::-1, ::-1].transpose(0, 1, 3, 2)
        dy_cols = _im2col(self._pad(dy), self.kh, self.kw)
        dx = (dy_cols @ w_flip.reshape(-1, self.cin)).reshape(x.shape)
        return dx, [dW, db]


class Dense:
    """Fully connected layer over (B, features) inputs."""

    def __init__(self, fan_in: int, fan_out: int, rng: np.random.Generator):
        self.fan_in, self.fan_out = fan_in, fan_out
        self.W = _he_uniform(rng, fan_in, (fan_in, fan_out))
        self.b = np.zeros(fan_out)

    def params(self) -> list[np.ndarray]:
        return [self.W, self.b]

    def param_kinds(self) -> list[str]:
        return ["weight", "bias"]

    def forward(self, x: np.ndarray, training: bool, rng) -> tuple[np.ndarray, object]:
        if x.ndim != 2 or x.shape[1] != self.fan_in:
            raise ShapeError(f"dense expected (B, {self.fan_in}) input, got {x.shape}")
        return x @ self.W + self.b, x

    def backward(self, dy: np.ndarray, cache) -> tuple[np.ndarray, list[np.ndarray]]:
        x = cache
        return dy @ self.W.T, [x.T @ dy, dy.sum(axis=0)]


class ReLU:
    def params(self) -> list[np.ndarray]:
        return []

    def param_kinds(self) -> list[str]:
        return []

    def forward(self, x, training, rng):
        return np.maximum(x, 0.0), x

    def backward(self, dy, cache):
        return dy * (cache > 0), []


class Dropout:
    """Inverted dropout: activations are scaled by 1/(1-rate) at training
    time so inference is a plain identity."""

    def __init__(self, rate: float):
        if not (0.0 <= rate < 1.0):
            raise ShapeError(f"dropout rate must lie in [0, 1), got {rate}")
        self.rate = rate

    def params(self) -> list[np.ndarray]:
        return []

    def param_kinds(self) -> list[str]:
        return []

    def forward(self, x, training, rng):
        if not training or self.rate == 0.0:
            return x, None
        mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * mask, mask

    def backward(self, dy, cache):
        if cache is None:
            return dy, []
        return dy * cache, []


class Flatten:
    def params(self) -> list[np.ndarray]:
        return []

    def param_kinds(self) -> list[str]:
        return []

    def forward(self, x, training, rng):
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, dy, cache):
        return dy.reshape(cache), []
