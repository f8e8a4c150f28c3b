from .structure import (
    FrameComponent,
    HuffmanTableSpec,
    JpegStructure,
    QuantTable,
    ScanComponent,
    ScanHeader,
)
from .huffman import HuffmanDecoder, build_huffman_decoder
from .parser import parse_stream
from .scan import decode_scan

__all__ = [
    "FrameComponent",
    "HuffmanDecoder",
    "HuffmanTableSpec",
    "JpegStructure",
    "QuantTable",
    "ScanComponent",
    "ScanHeader",
    "build_huffman_decoder",
    "decode_scan",
    "parse_stream",
]
