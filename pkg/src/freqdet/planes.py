"""Component planes, chroma upsampling and the reference full-decode path."""

from dataclasses import dataclass

import numpy as np

from .dct import LEVEL_SHIFT, dequantize, fdct_block, idct_block
from .errors import UnsupportedMode
from .jpeg.structure import JpegStructure


@dataclass(frozen=True)
class ComponentPlane:
    """A block grid of DCT coefficients for one YCbCr component.

    blocks: float64 (rows, cols, 8, 8), coefficients indexed (v, u).
    role:   'Y', 'Cb' or 'Cr'.
    h, v:   sampling factors relative to the frame's maxima.
    height, width: sampled pixel dimensions before block padding.
    """

    blocks: np.ndarray
    role: str
    h: int
    v: int
    height: int
    width: int

    def __post_init__(self):
        rows, cols = self.blocks.shape[:2]
        if (rows, cols) != (-(-self.height // 8), -(-self.width // 8)):
            raise ValueError("block grid does not match ceil(dims / 8)")


def blocks_to_spatial(blocks: np.ndarray) -> np.ndarray:
    """(rows, cols, 8, 8) block grid -> (rows*8, cols*8) plane."""
    rows, cols = blocks.shape[:2]
    return blocks.transpose(0, 2, 1, 3).reshape(rows * 8, cols * 8)


def spatial_to_blocks(plane: np.ndarray) -> np.ndarray:
    """(rows*8, cols*8) plane -> (rows, cols, 8, 8) block grid."""
    h, w = plane.shape
    if h % 8 or w % 8:
        raise ValueError("plane dimensions must be multiples of 8")
    return plane.reshape(h // 8, 8, w // 8, 8).transpose(0, 2, 1, 3)


def _upsample_replicate(plane: np.ndarray, sx: int, sy: int) -> np.ndarray:
    return np.repeat(np.repeat(plane, sy, axis=0), sx, axis=1)


def _triangle_1d(plane: np.ndarray, axis: int) -> np.ndarray:
    """Factor-2 triangle-filter upsampling along one axis.

    out[2i]   = (3*in[i] + in[i-1]) / 4
    out[2i+1] = (3*in[i] + in[i+1]) / 4
    with edge replication; matches libjpeg's "fancy" upsampling grid.
    """
    x = np.moveaxis(plane, axis, 0)
    prev = np.concatenate([x[:1], x[:-1]], axis=0)
    nxt = np.concatenate([x[1:], x[-1:]], axis=0)
    out = np.empty((2 * x.shape[0],) + x.shape[1:], dtype=np.float64)
    out[0::2] = (3.0 * x + prev) / 4.0
    out[1::2] = (3.0 * x + nxt) / 4.0
    return np.moveaxis(out, 0, axis)


def upsample_spatial(plane: np.ndarray, sx: int, sy: int, mode: str) -> np.ndarray:
    """Upsample a spatial plane by integer factors (1 or 2 per axis)."""
    if sx not in (1, 2) or sy not in (1, 2):
        raise UnsupportedMode(f"unsupported upsampling factors {sx}x{sy}")
    if mode == "replicate":
        return _upsample_replicate(plane, sx, sy)
    if mode == "bilinear":
        out = np.asarray(plane, dtype=np.float64)
        if sy == 2:
            out = _triangle_1d(out, 0)
        if sx == 2:
            out = _triangle_1d(out, 1)
        return out
    raise ValueError(f"unknown resampling mode: {mode!r}")


def _fit_plane(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    """Crop/edge-pad a spatial plane to exactly (height, width)."""
    plane = plane[:height, :width]
    pad_y = height - plane.shape[0]
    pad_x = width - plane.shape[1]
    if pad_y or pad_x:
        plane = np.pad(plane, ((0, pad_y), (0, pad_x)), mode="edge")
    return plane


def upsample_chroma_to_444(plane: ComponentPlane, target_height: int,
                           target_width: int, mode: str = "replicate") -> ComponentPlane:
    """Bring a subsampled chroma plane to full resolution, in DCT domain.

    Route: inverse DCT -> spatial upsampling (replicate or bilinear) ->
    forward DCT, so the result is a valid coefficient plane.  A plane
    already at (1, 1) is returned unchanged (exact identity).
    """
    sx = -(-target_width // plane.width) if plane.width < target_width else 1
    sy = -(-target_height // plane.height) if plane.height < target_height else 1
    if plane.h == 1 and plane.v == 1 and sx == 1 and sy == 1 \
            and (plane.height, plane.width) == (target_height, target_width):
        return plane
    spatial = blocks_to_spatial(idct_block(plane.blocks))
    spatial = upsample_spatial(spatial[:plane.height, :plane.width], sx, sy, mode)
    rows = -(-target_height // 8)
    cols = -(-target_width // 8)
    spatial = _fit_plane(spatial, rows * 8, cols * 8)
    return ComponentPlane(fdct_block(spatial_to_blocks(spatial)),
                          plane.role, 1, 1, target_height, target_width)


_ROLE_BY_INDEX = ("Y", "Cb", "Cr")


def dequantized_planes(structure: JpegStructure, blocks: dict) -> list:
    """Dequantize decoded block grids into ComponentPlanes (frame order)."""
    planes = []
    for i, comp in enumerate(structure.components):
        table = structure.quant_tables[comp.quant_table_id].natural()
        grid = dequantize(blocks[comp.component_id].reshape(
            blocks[comp.component_id].shape[:2] + (8, 8)), table)
        height, width = structure.component_size(comp)
        role = _ROLE_BY_INDEX[i] if len(structure.components) == 3 else "Y"
        planes.append(ComponentPlane(grid, role, comp.h, comp.v, height, width))
    return planes


def ycbcr_to_rgb(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    """BT.601 full-range YCbCr -> RGB, rounded and clamped to uint8."""
    cb = cb - 128.0
    cr = cr - 128.0
    rgb = np.stack([
        y + 1.402 * cr,
        y - 0.344136 * cb - 0.714136 * cr,
        y + 1.772 * cb,
    ], axis=-1)
    return np.clip(np.round(rgb), 0, 255).astype(np.uint8)


def full_decode_reference(structure: JpegStructure, blocks: dict,
                          upsample_mode: str = "bilinear",
                          arithmetic: str = "integer") -> np.ndarray:
    """Complete decode path: dequantize -> IDCT -> level unshift ->
    chroma upsample -> color convert.  Returns uint8 (height, width, 3).

    arithmetic="integer" (default) uses the fixed-point pipeline of
    mainstream binary decoders and is sample-exact against them;
    "float" is the textbook floating-point pipeline, which can differ
    by the odd rounding unit.  upsample_mode applies to the float
    pipeline only ("bilinear" mirrors fancy/triangle upsampling,
    "replicate" matches nearest-neighbor decoders).
    """
    if arithmetic == "integer":
        from .intdecode import full_decode_integer
        return full_decode_integer(structure, blocks)
    if arithmetic != "float":
        raise ValueError(f"unknown arithmetic mode {arithmetic!r}")
    spatials = []
    for plane in dequantized_planes(structure, blocks):
        s = blocks_to_spatial(idct_block(plane.blocks)) + LEVEL_SHIFT
        # samples are stored as 8-bit integers between IDCT and color
        # conversion, like any conformant decoder
        s = np.clip(np.round(s), 0.0, 255.0)[:plane.height, :plane.width]
        sx = -(-structure.width // plane.width) if plane.width < structure.width else 1
        sy = -(-structure.height // plane.height) if plane.height < structure.height else 1
        if sx > 1 or sy > 1:
            s = upsample_spatial(s, sx, sy, upsample_mode)
        spatials.append(_fit_plane(s, structure.height, structure.width))
    if len(spatials) == 1:
        gray = np.clip(np.round(spatials[0]), 0, 255).astype(np.uint8)
        return np.stack([gray] * 3, axis=-1)
    return ycbcr_to_rgb(*spatials)
