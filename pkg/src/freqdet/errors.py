"""Exception types shared across the package."""


class FreqdetError(Exception):
    """Base class for all errors raised by this package."""


class JpegError(FreqdetError):
    """Base class for JPEG bitstream errors."""


class MissingSOI(JpegError):
    """Stream does not begin with the SOI marker."""


class UnsupportedMode(JpegError):
    """The file uses a coding mode outside baseline 8-bit Huffman
    (progressive, arithmetic, 12-bit, hierarchical...)."""


class TruncatedSegment(JpegError):
    """A segment's declared length exceeds the remaining bytes, or the
    stream ends before a frame/scan was found."""


class MissingTable(JpegError):
    """A scan references a quantization or Huffman table that was never
    defined."""


class InvalidCodeCounts(JpegError):
    """Huffman code-length counts over-subscribe the code tree."""


class HuffmanOverrun(JpegError):
    """Entropy data exhausted or corrupted mid-symbol."""


class BadRestartMarker(JpegError):
    """RSTn marker out of sequence, or restart segmentation inconsistent
    with the declared restart interval."""


class EmptyCorpus(FreqdetError):
    """An operation that folds over a corpus received no items."""
