"""Parsed JPEG stream structure: frame header, tables, scan headers."""

from dataclasses import dataclass, field

import numpy as np

from ..dct import dezigzag


@dataclass(frozen=True)
class QuantTable:
    """64 quantization divisors as stored in the DQT segment (zigzag order)."""

    table_id: int
    values: tuple  # 64 ints, zigzag order, all >= 1

    def __post_init__(self):
        if len(self.values) != 64:
            raise ValueError("quantization table must have 64 entries")
        if any(v < 1 for v in self.values):
            raise ValueError("quantization table entries must be >= 1")

    def natural(self) -> np.ndarray:
        """Table entries de-zigzagged into natural (v, u) order, shape (8, 8)."""
        flat = dezigzag(np.asarray(self.values, dtype=np.int64))
        return flat.reshape(8, 8)


@dataclass(frozen=True)
class HuffmanTableSpec:
    """DHT payload: 16 code-length counts plus the symbol list."""

    table_class: int  # 0 = DC, 1 = AC
    table_id: int
    counts: tuple  # 16 ints, counts[i] codes of length i+1
    symbols: tuple

    def __post_init__(self):
        if len(self.counts) != 16:
            raise ValueError("expected 16 code-length counts")
        if sum(self.counts) != len(self.symbols):
            raise ValueError("symbol count does not match code-length counts")


@dataclass(frozen=True)
class FrameComponent:
    component_id: int
    h: int  # horizontal sampling factor
    v: int  # vertical sampling factor
    quant_table_id: int


@dataclass(frozen=True)
class ScanComponent:
    component_id: int
    dc_table_id: int
    ac_table_id: int


@dataclass(frozen=True)
class ScanHeader:
    """One SOS header plus the byte span of its entropy-coded data."""

    components: tuple  # of ScanComponent, in scan order
    restart_interval: int  # MCUs per restart segment, 0 = no restarts
    data_start: int  # offset of first entropy byte in the source stream
    data_end: int  # offset one past the last entropy byte


@dataclass
class JpegStructure:
    """Everything parse_stream learns about a baseline JPEG stream."""

    precision: int = 8
    height: int = 0
    width: int = 0
    components: list = field(default_factory=list)  # of FrameComponent
    quant_tables: dict = field(default_factory=dict)  # id -> QuantTable
    huffman_specs: dict = field(default_factory=dict)  # (class, id) -> spec
    scans: list = field(default_factory=list)  # of ScanHeader
    markers: list = field(default_factory=list)  # (name, offset) in order

    @property
    def max_h(self) -> int:
        return max(c.h for c in self.components)

    @property
    def max_v(self) -> int:
        return max(c.v for c in self.components)

    def component_size(self, comp: FrameComponent) -> tuple:
        """Sampled (height, width) in pixels of one component."""
        h = -(-self.height * comp.v // self.max_v)
        w = -(-self.width * comp.h // self.max_h)
        return h, w

    def component_grid(self, comp: FrameComponent) -> tuple:
        """Block grid (rows, cols) = ceil(sampled dims / 8)."""
        h, w = self.component_size(comp)
        return -(-h // 8), -(-w // 8)
