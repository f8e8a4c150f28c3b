"""Canonical Huffman decoder tables (T.81 Annex C/F style)."""

import numpy as np

from ..errors import HuffmanOverrun, InvalidCodeCounts
from .structure import HuffmanTableSpec


class HuffmanDecoder:
    """Canonical decode tables for one DC or AC Huffman table.

    Holds mincode/maxcode/valptr indexed by code length (1..16), the
    classic T.81 F.16 layout.  ``maxcode[l] == -1`` means no codes of
    length l.  The arrays are also consumed directly by the compiled
    entropy-decode kernel.
    """

    def __init__(self, spec: HuffmanTableSpec):
        total = sum(spec.counts)
        if total > 256:
            raise InvalidCodeCounts(f"{total} symbols declared, max is 256")
        mincode = np.zeros(17, dtype=np.int32)
        maxcode = np.full(17, -1, dtype=np.int32)
        valptr = np.zeros(17, dtype=np.int32)
        code = 0
        k = 0
        for length in range(1, 17):
            n = spec.counts[length - 1]
            if n:
                valptr[length] = k
                mincode[length] = code
                code += n
                k += n
                maxcode[length] = code - 1
            if code > (1 << length):
                raise InvalidCodeCounts(
                    f"code tree over-subscribed at length {length}")
            code <<= 1
        self.spec = spec
        self.mincode = mincode
        self.maxcode = maxcode
        self.valptr = valptr
        self.values = np.asarray(spec.symbols, dtype=np.int16)

    def decode(self, read_bit) -> int:
        """Decode one symbol, pulling bits from ``read_bit()``.

        Reference-path implementation used by tests; the scan decoder
        uses the compiled kernel instead.
        """
        code = 0
        for length in range(1, 17):
            code = (code << 1) | read_bit()
            if self.maxcode[length] >= 0 and code <= self.maxcode[length]:
                return int(self.values[self.valptr[length] + code - self.mincode[length]])
        raise HuffmanOverrun("no symbol within 16 bits")


def build_huffman_decoder(spec: HuffmanTableSpec) -> HuffmanDecoder:
    """Build decode tables; raises InvalidCodeCounts on a bad spec."""
    return HuffmanDecoder(spec)
