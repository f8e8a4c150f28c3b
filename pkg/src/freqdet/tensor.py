"""Detection-input assembly and normalization.

Two equivalent layouts are supported: spatial coefficient planes, where
each 8x8 tile of a (h_pad, w_pad) plane holds one block's coefficients at
its image footprint, and the flattened (h/8, w/8, 64*ncomp) tensor the
detector consumes.  Channel c = component*64 + (v*8 + u), components
ordered Y, Cb, Cr.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCorpus
from .jpeg import decode_scan, parse_stream
from .planes import ComponentPlane, dequantized_planes, upsample_chroma_to_444

STD_EPSILON = 1e-6

DCTT_MAGIC = b"DCTT"
DCTT_VERSION = 1


def assemble_dct_tensor(planes) -> np.ndarray:
    """Stack full-resolution component planes into the detection tensor.

    All planes must be at sampling (1, 1) with identical grids; the
    result has shape (rows, cols, 64 * len(planes)).
    """
    grids = []
    shape = None
    for p in planes:
        blocks = p.blocks if isinstance(p, ComponentPlane) else np.asarray(p)
        if shape is None:
            shape = blocks.shape[:2]
        elif blocks.shape[:2] != shape:
            raise ValueError(
                f"component grids differ: {blocks.shape[:2]} vs {shape}")
        grids.append(blocks.reshape(shape + (64,)))
    return np.concatenate(grids, axis=-1)


def split_dct_tensor(tensor: np.ndarray) -> list:
    """Inverse of assemble_dct_tensor: per-component (rows, cols, 8, 8)."""
    rows, cols, channels = tensor.shape
    if channels % 64:
        raise ValueError("channel count must be a multiple of 64")
    return [tensor[..., i * 64:(i + 1) * 64].reshape(rows, cols, 8, 8)
            for i in range(channels // 64)]


def flatten_blocks(coefficient_planes) -> np.ndarray:
    """Spatial coefficient planes -> flattened tensor (bijective reshape).

    Input: sequence of (h_pad, w_pad) planes, dims multiples of 8.
    Output: (h_pad/8, w_pad/8, 64 * nplanes).
    """
    out = []
    for plane in coefficient_planes:
        h, w = plane.shape
        if h % 8 or w % 8:
            raise ValueError("plane dimensions must be multiples of 8")
        out.append(plane.reshape(h // 8, 8, w // 8, 8)
                   .transpose(0, 2, 1, 3).reshape(h // 8, w // 8, 64))
    return np.concatenate(out, axis=-1)


def unflatten_blocks(tensor: np.ndarray) -> list:
    """Inverse of flatten_blocks."""
    rows, cols, channels = tensor.shape
    if channels % 64:
        raise ValueError("channel count must be a multiple of 64")
    planes = []
    for i in range(channels // 64):
        t = tensor[..., i * 64:(i + 1) * 64].reshape(rows, cols, 8, 8)
        planes.append(t.transpose(0, 2, 1, 3).reshape(rows * 8, cols * 8))
    return planes


@dataclass
class NormStats:
    """Per-channel standardization statistics."""

    mean: np.ndarray
    std: np.ndarray
    count: int

    @property
    def channels(self) -> int:
        return len(self.mean)


def compute_stats(corpus) -> NormStats:
    """Streaming per-channel mean/std over an iterable of tensors.

    Accumulates sums and squared sums in float64; population std,
    floored at STD_EPSILON so constant channels stay finite.
    """
    total = None
    total_sq = None
    count = 0
    channels = None
    for tensor in corpus:
        t = np.asarray(tensor, dtype=np.float64)
        flat = t.reshape(-1, t.shape[-1])
        if total is None:
            channels = flat.shape[-1]
            total = np.zeros(channels)
            total_sq = np.zeros(channels)
        elif flat.shape[-1] != channels:
            raise ValueError("tensors disagree on channel count")
        total += flat.sum(axis=0)
        total_sq += (flat * flat).sum(axis=0)
        count += flat.shape[0]
    if count == 0:
        raise EmptyCorpus("no tensors to compute statistics over")
    mean = total / count
    var = np.maximum(total_sq / count - mean * mean, 0.0)
    std = np.maximum(np.sqrt(var), STD_EPSILON)
    return NormStats(mean=mean, std=std, count=count)


def normalize(tensor: np.ndarray, stats: NormStats) -> np.ndarray:
    """(value - mean_c) / std_c per channel."""
    t = np.asarray(tensor, dtype=np.float64)
    if t.shape[-1] != stats.channels:
        raise ValueError(
            f"tensor has {t.shape[-1]} channels, stats have {stats.channels}")
    return (t - stats.mean) / stats.std


def extract_tensor(data: bytes, resample_mode: str = "replicate",
                   stats: NormStats = None) -> np.ndarray:
    """JPEG bytes -> detection input tensor.

    Partial decode: parse, entropy decode, dequantize, upsample chroma to
    4:4:4 in the coefficient domain, assemble.  No inverse DCT of the
    image itself is performed.
    """
    structure = parse_stream(data)
    blocks = decode_scan(structure, data)
    planes = dequantized_planes(structure, blocks)
    rows = -(-structure.height // 8)
    cols = -(-structure.width // 8)
    full = [upsample_chroma_to_444(p, structure.height, structure.width,
                                   resample_mode) for p in planes]
    tensor = assemble_dct_tensor(full)
    assert tensor.shape[:2] == (rows, cols)
    if stats is not None:
        tensor = normalize(tensor, stats)
    return tensor


def extract_tensor_file(path, resample_mode: str = "replicate",
                        stats: NormStats = None) -> np.ndarray:
    with open(path, "rb") as f:
        return extract_tensor(f.read(), resample_mode, stats)


# --- DCTT tensor file format -------------------------------------------

def write_dctt(path, tensor: np.ndarray) -> None:
    """Write a tensor as magic 'DCTT', u32 version/rows/cols/channels
    (little-endian), then float32 values in (row, col, channel) order."""
    t = np.ascontiguousarray(tensor, dtype="<f4")
    rows, cols, channels = t.shape
    with open(path, "wb") as f:
        f.write(DCTT_MAGIC)
        f.write(struct.pack("<4I", DCTT_VERSION, rows, cols, channels))
        f.write(t.tobytes())


def read_dctt(path) -> np.ndarray:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != DCTT_MAGIC:
            raise ValueError(f"not a DCTT file: magic {magic!r}")
        version, rows, cols, channels = struct.unpack("<4I", f.read(16))
        if version != DCTT_VERSION:
            raise ValueError(f"unsupported DCTT version {version}")
        payload = f.read(rows * cols * channels * 4)
        if len(payload) != rows * cols * channels * 4:
            raise ValueError("DCTT payload truncated")
        return np.frombuffer(payload, dtype="<f4").reshape(
            rows, cols, channels).astype(np.float64)


def write_stats(path, stats: NormStats) -> None:
    with open(path, "w") as f:
        json.dump({
            "channels": stats.channels,
            "mean": stats.mean.tolist(),
            "std": stats.std.tolist(),
            "count": stats.count,
        }, f)


def read_stats(path) -> NormStats:
    with open(path) as f:
        d = json.load(f)
    if len(d["mean"]) != d["channels"] or len(d["std"]) != d["channels"]:
        raise ValueError("stats file channel count mismatch")
    return NormStats(mean=np.asarray(d["mean"], dtype=np.float64),
                     std=np.asarray(d["std"], dtype=np.float64),
                     count=int(d["count"]))
