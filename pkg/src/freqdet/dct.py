"""Blockwise 8x8 DCT, dequantization, zigzag mapping and level shift.

Convention note: the orthonormal T.81 scaling is used, i.e. the DC basis
factor is 1/sqrt(2).  Some texts state 1/2 instead; that variant is not an
orthogonal transform and does not round-trip against standard JPEG codecs,
so it is deliberately not implemented.
"""

import numpy as np

LEVEL_SHIFT = 128

# Zigzag scan: ZIGZAG_ORDER[i] = natural index (v*8 + u) of the i-th
# coefficient in scan order.
ZIGZAG_ORDER = np.array([
    0,  1,  8,  16, 9,  2,  3,  10,
    17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63], dtype=np.int64)

# NATURAL_TO_ZIGZAG[natural index] = zigzag position
NATURAL_TO_ZIGZAG = np.argsort(ZIGZAG_ORDER)


def _dct_matrix() -> np.ndarray:
    # M[u, x] = (1/2) c_u cos((2x+1) u pi / 16), c_0 = 1/sqrt(2), else 1.
    # Orthogonal: M @ M.T = I.
    u = np.arange(8).reshape(8, 1)
    x = np.arange(8).reshape(1, 8)
    m = 0.5 * np.cos((2 * x + 1) * u * np.pi / 16)
    m[0, :] *= 1 / np.sqrt(2)
    return m


DCT_MATRIX = _dct_matrix()


def fdct_block(pixels: np.ndarray) -> np.ndarray:
    """Forward blockwise DCT.

    ``pixels`` is an array whose last two axes are (y, x) of size 8x8;
    any leading axes are treated as a stack of blocks.  Returns
    coefficients indexed (v, u) on the last two axes.
    """
    p = np.asarray(pixels, dtype=np.float64)
    if p.shape[-2:] != (8, 8):
        raise ValueError(f"expected trailing 8x8 block axes, got {p.shape}")
    # S[v, u] = sum_y sum_x M[v, y] s[y, x] M[u, x]
    return DCT_MATRIX @ p @ DCT_MATRIX.T


def idct_block(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`fdct_block` (exact up to float rounding)."""
    d = np.asarray(coeffs, dtype=np.float64)
    if d.shape[-2:] != (8, 8):
        raise ValueError(f"expected trailing 8x8 block axes, got {d.shape}")
    return DCT_MATRIX.T @ d @ DCT_MATRIX


def dequantize(quantized: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Coefficient-wise product of quantized values and table entries.

    Both arguments must be in natural order; ``table`` is either 64 flat
    entries or an 8x8 grid and broadcasts over any stack of blocks.
    """
    q = np.asarray(quantized, dtype=np.float64)
    t = np.asarray(table, dtype=np.float64)
    if q.shape[-1] == 64 and t.shape == (8, 8):
        t = t.reshape(64)
    elif q.shape[-2:] == (8, 8) and t.shape == (64,):
        t = t.reshape(8, 8)
    return q * t


def zigzag_map(index: int) -> tuple[int, int]:
    """Map a zigzag position to its (u, v) frequency pair."""
    if not 0 <= index <= 63:
        raise ValueError(f"zigzag index out of range: {index}")
    nat = int(ZIGZAG_ORDER[index])
    return nat % 8, nat // 8


def zigzag_index(u: int, v: int) -> int:
    """Inverse of :func:`zigzag_map`."""
    if not (0 <= u <= 7 and 0 <= v <= 7):
        raise ValueError(f"frequency index out of range: ({u}, {v})")
    return int(NATURAL_TO_ZIGZAG[v * 8 + u])


def dezigzag(blocks: np.ndarray) -> np.ndarray:
    """Reorder flat zigzag-order blocks (..., 64) into natural order."""
    out = np.empty_like(blocks)
    out[..., ZIGZAG_ORDER] = blocks
    return out


def to_zigzag(blocks: np.ndarray) -> np.ndarray:
    """Reorder flat natural-order blocks (..., 64) into zigzag order."""
    return blocks[..., ZIGZAG_ORDER]
