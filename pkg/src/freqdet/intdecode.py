"""Integer decode path bit-compatible with mainstream JPEG decoders.

The float pipeline in :mod:`freqdet.planes` is mathematically exact, but
binary decoders ship a 13-bit fixed-point IDCT, integer triangle-filter
upsampling and 16-bit fixed-point color conversion.  Their rounding
differs from exact arithmetic by one code value on a percent or so of
samples, which the color transform can amplify to two.  For conformance
comparisons against such decoders this module reproduces their integer
arithmetic bit for bit; it is not a performance feature and is never used
by the coefficient-extraction path.
"""

import numpy as np

from .jpeg.structure import JpegStructure

# 13-bit fixed-point constants of the Loeffler-Ligtenberg-Moshovitz IDCT
_CONST_BITS = 13
_PASS1_BITS = 2
_F_0_298631336 = 2446
_F_0_390180644 = 3196
_F_0_541196100 = 4433
_F_0_765366865 = 6270
_F_0_899976223 = 7373
_F_1_175875602 = 9633
_F_1_501321110 = 12299
_F_1_847759065 = 15137
_F_1_961570560 = 16069
_F_2_053119869 = 16819
_F_2_562915447 = 20995
_F_3_072711026 = 25172


def _descale(x, n):
    return (x + (1 << (n - 1))) >> n


def _idct_pass(col, shift_in, shift_out):
    """One 1-D pass over axis -2 of an int64 block stack (…, 8, N)."""
    z2 = col[..., 2, :]
    z3 = col[..., 6, :]
    z1 = (z2 + z3) * _F_0_541196100
    tmp2 = z1 + z3 * (-_F_1_847759065)
    tmp3 = z1 + z2 * _F_0_765366865
    z2 = col[..., 0, :]
    z3 = col[..., 4, :]
    tmp0 = (z2 + z3) << _CONST_BITS
    tmp1 = (z2 - z3) << _CONST_BITS
    tmp10 = tmp0 + tmp3
    tmp13 = tmp0 - tmp3
    tmp11 = tmp1 + tmp2
    tmp12 = tmp1 - tmp2

    t0 = col[..., 7, :]
    t1 = col[..., 5, :]
    t2 = col[..., 3, :]
    t3 = col[..., 1, :]
    z1 = t0 + t3
    z2 = t1 + t2
    z3 = t0 + t2
    z4 = t1 + t3
    z5 = (z3 + z4) * _F_1_175875602
    t0 = t0 * _F_0_298631336
    t1 = t1 * _F_2_053119869
    t2 = t2 * _F_3_072711026
    t3 = t3 * _F_1_501321110
    z1 = z1 * (-_F_0_899976223)
    z2 = z2 * (-_F_2_562915447)
    z3 = z3 * (-_F_1_961570560) + z5
    z4 = z4 * (-_F_0_390180644) + z5
    t0 += z1 + z3
    t1 += z2 + z4
    t2 += z2 + z3
    t3 += z1 + z4

    out = np.empty_like(col)
    shift = shift_in - shift_out
    out[..., 0, :] = _descale(tmp10 + t3, shift)
    out[..., 7, :] = _descale(tmp10 - t3, shift)
    out[..., 1, :] = _descale(tmp11 + t2, shift)
    out[..., 6, :] = _descale(tmp11 - t2, shift)
    out[..., 2, :] = _descale(tmp12 + t1, shift)
    out[..., 5, :] = _descale(tmp12 - t1, shift)
    out[..., 3, :] = _descale(tmp13 + t0, shift)
    out[..., 4, :] = _descale(tmp13 - t0, shift)
    return out


def idct_islow(blocks: np.ndarray) -> np.ndarray:
    """Fixed-point inverse DCT on integer coefficient blocks (…, 8, 8).

    Input is dequantized integer coefficients; output is uint8 samples
    (level shift applied), identical to the classic "slow" integer IDCT.
    """
    b = np.asarray(blocks, dtype=np.int64)
    # pass 1 over columns (axis -2 indexes the vertical frequency)
    p1 = _idct_pass(b, _CONST_BITS, _PASS1_BITS)
    # pass 2 over rows: transpose so rows sit on axis -2
    p2 = _idct_pass(p1.swapaxes(-1, -2), _CONST_BITS + _PASS1_BITS + 3, 0)
    samples = p2.swapaxes(-1, -2) + 128
    return np.clip(samples, 0, 255).astype(np.uint8)


def upsample_h2_fancy(plane: np.ndarray) -> np.ndarray:
    """Integer horizontal x2 triangle upsampling (h2v1 fancy)."""
    x = plane.astype(np.int64)
    prev = np.concatenate([x[:, :1], x[:, :-1]], axis=1)
    nxt = np.concatenate([x[:, 1:], x[:, -1:]], axis=1)
    out = np.empty((x.shape[0], 2 * x.shape[1]), dtype=np.int64)
    out[:, 0::2] = (3 * x + prev + 1) >> 2
    out[:, 1::2] = (3 * x + nxt + 2) >> 2
    out[:, 0] = x[:, 0]
    out[:, -1] = (x[:, -1] * 4 + 2) >> 2
    return out


def upsample_h2v2_fancy(plane: np.ndarray) -> np.ndarray:
    """Integer 2x2 triangle upsampling (h2v2 fancy).

    Vertical pass produces 4x-scaled intermediates (3*near + far), the
    horizontal pass folds in the (3, 1) kernel with alternating bias.
    """
    x = plane.astype(np.int64)
    up = np.concatenate([x[:1], x[:-1]], axis=0)
    down = np.concatenate([x[1:], x[-1:]], axis=0)
    rows = np.empty((2 * x.shape[0], x.shape[1]), dtype=np.int64)
    rows[0::2] = 3 * x + up
    rows[1::2] = 3 * x + down
    prev = np.concatenate([rows[:, :1], rows[:, :-1]], axis=1)
    nxt = np.concatenate([rows[:, 1:], rows[:, -1:]], axis=1)
    out = np.empty((rows.shape[0], 2 * rows.shape[1]), dtype=np.int64)
    out[:, 0::2] = (3 * rows + prev + 8) >> 4
    out[:, 1::2] = (3 * rows + nxt + 7) >> 4
    out[:, 0] = (rows[:, 0] * 4 + 8) >> 4
    out[:, -1] = (rows[:, -1] * 4 + 7) >> 4
    return out


def upsample_v2_fancy(plane: np.ndarray) -> np.ndarray:
    """Integer vertical x2 triangle upsampling (h1v2)."""
    x = plane.astype(np.int64)
    up = np.concatenate([x[:1], x[:-1]], axis=0)
    down = np.concatenate([x[1:], x[-1:]], axis=0)
    out = np.empty((2 * x.shape[0], x.shape[1]), dtype=np.int64)
    out[0::2] = (3 * x + up + 1) >> 2
    out[1::2] = (3 * x + down + 2) >> 2
    return out


def _fix16(x: float) -> int:
    return int(round(x * 65536))


def ycc_rgb_fixed(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    """16-bit fixed-point BT.601 YCbCr -> RGB, decoder-identical."""
    y = y.astype(np.int64)
    cb = cb.astype(np.int64) - 128
    cr = cr.astype(np.int64) - 128
    half = 1 << 15
    r = y + ((_fix16(1.40200) * cr + half) >> 16)
    g = y + ((-_fix16(0.34414) * cb - _fix16(0.71414) * cr + half) >> 16)
    b = y + ((_fix16(1.77200) * cb + half) >> 16)
    return np.clip(np.stack([r, g, b], axis=-1), 0, 255).astype(np.uint8)


def full_decode_integer(structure: JpegStructure, blocks: dict) -> np.ndarray:
    """Integer-arithmetic full decode: dequantize -> fixed-point IDCT ->
    fancy chroma upsampling -> fixed-point color conversion.

    Returns uint8 (height, width, 3), matching mainstream binary
    decoders bit for bit on baseline streams.
    """
    spatials = []
    for i, comp in enumerate(structure.components):
        table = structure.quant_tables[comp.quant_table_id].natural()
        grid = blocks[comp.component_id].astype(np.int64).reshape(
            blocks[comp.component_id].shape[:2] + (8, 8)) * table
        samples = idct_islow(grid)
        rows, cols = grid.shape[:2]
        s = samples.transpose(0, 2, 1, 3).reshape(rows * 8, cols * 8)
        height, width = structure.component_size(comp)
        s = s[:height, :width].astype(np.int64)
        sx = 2 if width < structure.width else 1
        sy = 2 if height < structure.height else 1
        if sx == 2 and sy == 2:
            s = upsample_h2v2_fancy(s)
        elif sx == 2:
            s = upsample_h2_fancy(s)
        elif sy == 2:
            s = upsample_v2_fancy(s)
        s = s[:structure.height, :structure.width]
        pad_y = structure.height - s.shape[0]
        pad_x = structure.width - s.shape[1]
        if pad_y or pad_x:
            s = np.pad(s, ((0, pad_y), (0, pad_x)), mode="edge")
        spatials.append(s)
    if len(spatials) == 1:
        gray = spatials[0].astype(np.uint8)
        return np.stack([gray] * 3, axis=-1)
    return ycc_rgb_fixed(*spatials)
