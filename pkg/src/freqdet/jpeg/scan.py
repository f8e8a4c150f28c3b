"""Scan decoding: entropy data -> per-component quantized block grids.

Output blocks are in natural (row-major v, u) order with DC prediction
already resolved to absolute values, so downstream code never sees
zigzag order or differential DC.
"""

import numpy as np

from ..dct import dezigzag
from ..errors import BadRestartMarker, HuffmanOverrun
from . import _entropy
from .huffman import build_huffman_decoder
from .structure import JpegStructure


def _split_restart_segments(entropy: bytes) -> list:
    """Split entropy data at RSTn markers and undo byte stuffing.

    Validates that restart markers cycle RST0..RST7 in order.
    """
    segments = []
    start = 0
    pos = 0
    count = 0
    while True:
        ff = entropy.find(b"\xff", pos)
        if ff < 0 or ff + 1 >= len(entropy):
            break
        tail = entropy[ff + 1]
        if tail == 0x00:
            pos = ff + 2
            continue
        if 0xD0 <= tail <= 0xD7:
            if tail - 0xD0 != count % 8:
                raise BadRestartMarker(
                    f"expected RST{count % 8}, found RST{tail - 0xD0}")
            segments.append(entropy[start:ff])
            count += 1
            start = pos = ff + 2
            continue
        # the parser guarantees no other marker inside the span
        pos = ff + 2
    segments.append(entropy[start:])
    return [s.replace(b"\xff\x00", b"\xff") for s in segments]


def _huffman_arrays(structure, scan_components, table_class):
    """Stack per-scan-component decode tables into kernel-shaped arrays."""
    n = len(scan_components)
    mincode = np.zeros((n, 17), dtype=np.int32)
    maxcode = np.full((n, 17), -1, dtype=np.int32)
    valptr = np.zeros((n, 17), dtype=np.int32)
    values = np.zeros((n, 256), dtype=np.int16)
    for i, sc in enumerate(scan_components):
        tid = sc.dc_table_id if table_class == 0 else sc.ac_table_id
        dec = build_huffman_decoder(structure.huffman_specs[(table_class, tid)])
        mincode[i] = dec.mincode
        maxcode[i] = dec.maxcode
        valptr[i] = dec.valptr
        values[i, :len(dec.values)] = dec.values
    return mincode, maxcode, valptr, values


def decode_scan(structure: JpegStructure, data: bytes) -> dict:
    """Entropy-decode every scan of ``data``.

    Returns {component_id: int32 array (rows, cols, 64)} where rows/cols
    are ceil(sampled dims / 8) and each block holds natural-order
    coefficients with absolute DC.
    """
    by_id = {c.component_id: c for c in structure.components}
    result = {}
    for scan in structure.scans:
        comps = [by_id[sc.component_id] for sc in scan.components]
        interleaved = len(comps) > 1
        if interleaved:
            mcus_x = -(-structure.width // (8 * structure.max_h))
            mcus_y = -(-structure.height // (8 * structure.max_v))
            ch = np.array([c.h for c in comps], dtype=np.int32)
            cv = np.array([c.v for c in comps], dtype=np.int32)
        else:
            rows, cols = structure.component_grid(comps[0])
            mcus_x, mcus_y = cols, rows
            ch = np.ones(1, dtype=np.int32)
            cv = np.ones(1, dtype=np.int32)
        bpr = np.array([mcus_x * ch[i] for i in range(len(comps))], dtype=np.int32)
        pad_rows = [mcus_y * cv[i] for i in range(len(comps))]
        total_mcus = mcus_x * mcus_y
        max_blocks = max(int(bpr[i]) * pad_rows[i] for i in range(len(comps)))
        out = np.zeros((len(comps), max_blocks, 64), dtype=np.int32)

        dc_tabs = _huffman_arrays(structure, scan.components, 0)
        ac_tabs = _huffman_arrays(structure, scan.components, 1)

        entropy = data[scan.data_start:scan.data_end]
        segments = _split_restart_segments(entropy)
        interval = scan.restart_interval or total_mcus
        expected = -(-total_mcus // interval)
        if len(segments) != expected:
            raise BadRestartMarker(
                f"{len(segments)} restart segments, expected {expected}")

        pred = np.zeros(len(comps), dtype=np.int32)
        for i, seg in enumerate(segments):
            mcu_start = i * interval
            n_mcu = min(interval, total_mcus - mcu_start)
            pred[:] = 0
            status = _entropy.decode_segment(
                np.frombuffer(seg, dtype=np.uint8), mcu_start, n_mcu, mcus_x,
                ch, cv, bpr, *dc_tabs, *ac_tabs, out, pred)
            if status == _entropy.ERR_OVERRUN:
                raise HuffmanOverrun(
                    f"entropy data exhausted in restart segment {i}")
            if status == _entropy.ERR_BAD_RUN:
                raise HuffmanOverrun(
                    f"AC run past end of block in restart segment {i}")

        for i, comp in enumerate(comps):
            rows, cols = structure.component_grid(comp)
            grid = out[i, :pad_rows[i] * bpr[i]].reshape(pad_rows[i], bpr[i], 64)
            result[comp.component_id] = dezigzag(grid[:rows, :cols])
    return result
