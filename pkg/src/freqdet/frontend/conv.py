"""Convolution primitives: the 8x8/stride-8 block convolution and the
pixel-to-frequency weight transform that makes it domain-agnostic."""

from dataclasses import dataclass

import numpy as np

from ..dct import fdct_block


@dataclass
class Kernel:
    """Conv layer weights: (out_channels, in_channels, kh, kw) + bias."""

    weights: np.ndarray
    bias: np.ndarray
    stride: int = 1
    padding: int = 0

    def __post_init__(self):
        if self.weights.ndim != 4:
            raise ValueError("kernel weights must be 4-D")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError("bias length must equal output channel count")


def block_conv8(planes: np.ndarray, kernel: Kernel) -> np.ndarray:
    """8x8 convolution with stride 8 over (H, W, C) planes.

    Each non-overlapping 8x8 block maps to exactly one output location:
    out(i, j, o) = bias_o + sum_c <block(i,j,c), weights(o,c)>.
    Returns (H/8, W/8, out_channels).
    """
    x = np.asarray(planes, dtype=np.float64)
    if x.ndim != 3:
        raise ValueError("expected (H, W, C) input")
    h, w, cin = x.shape
    if h % 8 or w % 8:
        raise ValueError("input dims must be multiples of 8")
    kw = kernel.weights
    if kw.shape[1] != cin or kw.shape[2:] != (8, 8):
        raise ValueError(f"kernel shape {kw.shape} incompatible with input {x.shape}")
    blocks = x.reshape(h // 8, 8, w // 8, 8, cin)
    # i,a=y, j,b=x, c in; o out
    return np.einsum("iajbc,ocab->ijo", blocks, kw, optimize=True) + kernel.bias


def block_conv8_tensor(tensor: np.ndarray, kernel: Kernel) -> np.ndarray:
    """Pointwise-equivalent of block_conv8 on a flattened (h/8, w/8, C*64)
    tensor whose channel layout is component*64 + (row*8 + col)."""
    kw = kernel.weights
    cout, cin = kw.shape[:2]
    flat = kw.reshape(cout, cin * 64).T  # (cin*64, cout), c*64 + a*8 + b
    return tensor @ flat + kernel.bias


def pixel_to_freq_weights(kernel: Kernel) -> Kernel:
    """Transform an 8x8 pixel-domain kernel into the frequency domain.

    Each (out, in) slice is replaced by its forward DCT; since the
    transform is orthonormal, <x, w> = <DCT(x), DCT(w)>, so the block
    convolution produces identical outputs on DCT-coefficient planes.
    """
    kw = kernel.weights
    if kw.shape[2:] != (8, 8):
        raise ValueError("only 8x8 kernels can be moved to the frequency domain")
    return Kernel(weights=fdct_block(kw), bias=kernel.bias.copy(),
                  stride=kernel.stride, padding=kernel.padding)


def conv2d(x: np.ndarray, kernel: Kernel) -> np.ndarray:
    """Plain 2-D convolution (cross-correlation) via window views.

    x: (H, W, Cin) -> (H_out, W_out, Cout) with the kernel's stride and
    zero padding.
    """
    w = kernel.weights
    cout, cin, kh, kw_ = w.shape
    if x.shape[-1] != cin:
        raise ValueError(f"input has {x.shape[-1]} channels, kernel wants {cin}")
    p = kernel.padding
    if p:
        x = np.pad(x, ((p, p), (p, p), (0, 0)))
    windows = np.lib.stride_tricks.sliding_window_view(x, (kh, kw_), axis=(0, 1))
    s = kernel.stride
    windows = windows[::s, ::s]  # (Ho, Wo, Cin, kh, kw)
    return np.einsum("ijcab,ocab->ijo", windows, w, optimize=True) + kernel.bias


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    e = np.exp(x - np.max(x, axis=axis, keepdims=True))
    return e / e.sum(axis=axis, keepdims=True)
