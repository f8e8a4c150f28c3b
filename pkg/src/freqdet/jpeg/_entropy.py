"""Compiled hot loop for baseline Huffman entropy decoding.

One call decodes one restart segment (already split at RSTn and with byte
stuffing removed), writing zigzag-order coefficients with absolute DC
values into per-component block arrays.  Keeping this in a single njit
kernel is what makes the partial-decode path measurably faster than the
full decode; everything around it is plain numpy.
"""

import numpy as np
from numba import njit

OK = 0
ERR_OVERRUN = 1  # ran out of bits / no symbol within 16 bits
ERR_BAD_RUN = 2  # AC run extends past coefficient 63


@njit(cache=True, nogil=True)
def decode_segment(seg, mcu_start, n_mcu, mcus_x,
                   comp_h, comp_v, blocks_per_row,
                   dc_mincode, dc_maxcode, dc_valptr, dc_values,
                   ac_mincode, ac_maxcode, ac_valptr, ac_values,
                   out, pred):
    """Decode ``n_mcu`` MCUs from one unstuffed restart segment.

    seg             uint8[:], clean entropy bytes
    mcu_start       global index of the first MCU in this segment
    comp_h/comp_v   int32[ncomp] sampling factors (1,1 for non-interleaved)
    blocks_per_row  int32[ncomp] width of each component's padded block grid
    dc_*/ac_*       per-component canonical Huffman arrays, shapes
                    (ncomp, 17) and (ncomp, 256)
    out             int32[ncomp, max_blocks, 64], zigzag coefficient order
    pred            int32[ncomp] running DC predictors (reset by caller)

    Returns an OK/ERR status code.
    """
    pos = 0
    bitbuf = 0
    bitcnt = 0
    nbytes = seg.shape[0]
    ncomp = comp_h.shape[0]
    for m in range(n_mcu):
        mcu = mcu_start + m
        my = mcu // mcus_x
        mx = mcu % mcus_x
        for c in range(ncomp):
            for by in range(comp_v[c]):
                for bx in range(comp_h[c]):
                    bi = (my * comp_v[c] + by) * blocks_per_row[c] \
                        + (mx * comp_h[c] + bx)
                    # --- DC: category symbol, then magnitude bits
                    code = 0
                    sym = -1
                    for length in range(1, 17):
                        if bitcnt == 0:
                            if pos >= nbytes:
                                return ERR_OVERRUN
                            bitbuf = seg[pos]
                            pos += 1
                            bitcnt = 8
                        bitcnt -= 1
                        code = (code << 1) | ((bitbuf >> bitcnt) & 1)
                        if dc_maxcode[c, length] >= 0 and code <= dc_maxcode[c, length]:
                            sym = dc_values[c, dc_valptr[c, length]
                                            + code - dc_mincode[c, length]]
                            break
                    if sym < 0:
                        return ERR_OVERRUN
                    size = sym
                    if size > 0:
                        v = 0
                        for _ in range(size):
                            if bitcnt == 0:
                                if pos >= nbytes:
                                    return ERR_OVERRUN
                                bitbuf = seg[pos]
                                pos += 1
                                bitcnt = 8
                            bitcnt -= 1
                            v = (v << 1) | ((bitbuf >> bitcnt) & 1)
                        if v < (1 << (size - 1)):
                            v -= (1 << size) - 1
                        pred[c] += v
                    out[c, bi, 0] = pred[c]
                    # --- AC: (run, size) symbols with EOB / ZRL
                    k = 1
                    while k < 64:
                        code = 0
                        sym = -1
                        for length in range(1, 17):
                            if bitcnt == 0:
                                if pos >= nbytes:
                                    return ERR_OVERRUN
                                bitbuf = seg[pos]
                                pos += 1
                                bitcnt = 8
                            bitcnt -= 1
                            code = (code << 1) | ((bitbuf >> bitcnt) & 1)
                            if ac_maxcode[c, length] >= 0 and code <= ac_maxcode[c, length]:
                                sym = ac_values[c, ac_valptr[c, length]
                                                + code - ac_mincode[c, length]]
                                break
                        if sym < 0:
                            return ERR_OVERRUN
                        run = sym >> 4
                        size = sym & 0x0F
                        if size == 0:
                            if run == 15:  # ZRL: sixteen zeros
                                k += 16
                                continue
                            break  # EOB
                        k += run
                        if k > 63:
                            return ERR_BAD_RUN
                        v = 0
                        for _ in range(size):
                            if bitcnt == 0:
                                if pos >= nbytes:
                                    return ERR_OVERRUN
                                bitbuf = seg[pos]
                                pos += 1
                                bitcnt = 8
                            bitcnt -= 1
                            v = (v << 1) | ((bitbuf >> bitcnt) & 1)
                        if v < (1 << (size - 1)):
                            v -= (1 << size) - 1
                        out[c, bi, k] = v
                        k += 1
    return OK
