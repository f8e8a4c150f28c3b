"""Baseline JPEG marker-level parser.

Walks the segment structure of an SOF0/SOF1 stream, collecting tables and
scan headers, and records the byte span of each scan's entropy-coded data
without touching it.  Progressive, arithmetic, hierarchical and 12-bit
streams are rejected with UnsupportedMode.
"""

from ..errors import (
    MissingSOI,
    MissingTable,
    TruncatedSegment,
    UnsupportedMode,
)
from .structure import (
    FrameComponent,
    HuffmanTableSpec,
    JpegStructure,
    QuantTable,
    ScanComponent,
    ScanHeader,
)

SOI = 0xD8
EOI = 0xD9
SOS = 0xDA
DQT = 0xDB
DNL = 0xDC
DRI = 0xDD
DHT = 0xC4
DAC = 0xCC
COM = 0xFE
TEM = 0x01

SOF_MARKERS = {0xC0 + i for i in range(16)} - {DHT, 0xC8, DAC}
SUPPORTED_SOF = {0xC0, 0xC1}  # baseline + extended sequential Huffman
RST_RANGE = range(0xD0, 0xD8)


def _marker_name(marker: int) -> str:
    if marker in SOF_MARKERS:
        return f"SOF{marker - 0xC0}"
    if marker in RST_RANGE:
        return f"RST{marker - 0xD0}"
    if 0xE0 <= marker <= 0xEF:
        return f"APP{marker - 0xE0}"
    return {
        SOI: "SOI", EOI: "EOI", SOS: "SOS", DQT: "DQT", DNL: "DNL",
        DRI: "DRI", DHT: "DHT", DAC: "DAC", COM: "COM", TEM: "TEM",
    }.get(marker, f"0x{marker:02X}")


def _be16(data: bytes, pos: int) -> int:
    if pos + 2 > len(data):
        raise TruncatedSegment(f"stream ends inside a length field at {pos}")
    return (data[pos] << 8) | data[pos + 1]


def _segment(data: bytes, pos: int) -> tuple:
    """Read a segment length and return (payload_start, payload_end)."""
    length = _be16(data, pos)
    if length < 2:
        raise TruncatedSegment(f"segment length {length} < 2 at offset {pos}")
    end = pos + length
    if end > len(data):
        raise TruncatedSegment(
            f"segment at offset {pos} declares {length} bytes, "
            f"only {len(data) - pos} remain")
    return pos + 2, end


def _parse_sof(data: bytes, start: int, end: int, structure: JpegStructure):
    if structure.components:
        raise UnsupportedMode("multiple frame headers")
    if end - start < 6:
        raise TruncatedSegment("frame header too short")
    precision = data[start]
    if precision != 8:
        raise UnsupportedMode(f"{precision}-bit precision (baseline is 8)")
    height = _be16(data, start + 1)
    width = _be16(data, start + 3)
    ncomp = data[start + 5]
    if not 1 <= ncomp <= 3:
        raise UnsupportedMode(f"{ncomp} components (expected 1..3)")
    if end - start < 6 + 3 * ncomp:
        raise TruncatedSegment("frame header component list truncated")
    comps = []
    for i in range(ncomp):
        cid, hv, tq = data[start + 6 + 3 * i: start + 9 + 3 * i]
        h, v = hv >> 4, hv & 0x0F
        if h not in (1, 2) or v not in (1, 2):
            raise UnsupportedMode(f"sampling factors {h}x{v} (supported: 1, 2)")
        comps.append(FrameComponent(cid, h, v, tq))
    structure.precision = precision
    structure.height = height
    structure.width = width
    structure.components = comps


def _parse_dqt(data: bytes, start: int, end: int, structure: JpegStructure):
    pos = start
    while pos < end:
        pq, tq = data[pos] >> 4, data[pos] & 0x0F
        pos += 1
        if pq != 0:
            raise UnsupportedMode("16-bit quantization tables are not baseline")
        if pos + 64 > end:
            raise TruncatedSegment("DQT payload truncated")
        structure.quant_tables[tq] = QuantTable(tq, tuple(data[pos:pos + 64]))
        pos += 64


def _parse_dht(data: bytes, start: int, end: int, structure: JpegStructure):
    pos = start
    while pos < end:
        tc, th = data[pos] >> 4, data[pos] & 0x0F
        pos += 1
        if tc > 1:
            raise UnsupportedMode(f"Huffman table class {tc}")
        if pos + 16 > end:
            raise TruncatedSegment("DHT counts truncated")
        counts = tuple(data[pos:pos + 16])
        pos += 16
        n = sum(counts)
        if pos + n > end:
            raise TruncatedSegment("DHT symbols truncated")
        symbols = tuple(data[pos:pos + n])
        pos += n
        structure.huffman_specs[(tc, th)] = HuffmanTableSpec(tc, th, counts, symbols)


def _parse_sos(data: bytes, start: int, end: int,
               structure: JpegStructure, restart_interval: int) -> ScanHeader:
    if not structure.components:
        raise TruncatedSegment("SOS before SOF")
    ns = data[start]
    if not 1 <= ns <= len(structure.components):
        raise UnsupportedMode(f"scan with {ns} components")
    if end - start < 1 + 2 * ns + 3:
        raise TruncatedSegment("scan header truncated")
    known = {c.component_id for c in structure.components}
    scomps = []
    for i in range(ns):
        cs = data[start + 1 + 2 * i]
        tables = data[start + 2 + 2 * i]
        if cs not in known:
            raise MissingTable(f"scan references unknown component {cs}")
        td, ta = tables >> 4, tables & 0x0F
        if (0, td) not in structure.huffman_specs:
            raise MissingTable(f"DC Huffman table {td} not defined before scan")
        if (1, ta) not in structure.huffman_specs:
            raise MissingTable(f"AC Huffman table {ta} not defined before scan")
        scomps.append(ScanComponent(cs, td, ta))
    for comp in structure.components:
        if comp.component_id in {c.component_id for c in scomps}:
            if comp.quant_table_id not in structure.quant_tables:
                raise MissingTable(
                    f"quantization table {comp.quant_table_id} not defined")
    # entropy data: ends at the first 0xFF followed by a real marker
    # (byte stuffing FF00 and RSTn stay inside the span)
    pos = end
    while True:
        nxt = data.find(b"\xff", pos)
        if nxt < 0 or nxt + 1 >= len(data):
            raise TruncatedSegment("entropy data ends without a terminating marker")
        tail = data[nxt + 1]
        if tail == 0x00 or tail in RST_RANGE:
            pos = nxt + 2
            continue
        return ScanHeader(tuple(scomps), restart_interval, end, nxt), nxt


def parse_stream(data: bytes) -> JpegStructure:
    """Parse a baseline JPEG byte stream into a JpegStructure.

    Raises MissingSOI, UnsupportedMode, TruncatedSegment or MissingTable.
    Entropy-coded data is located but not decoded; see decode_scan.
    """
    if len(data) < 2 or data[0] != 0xFF or data[1] != SOI:
        raise MissingSOI("stream does not start with SOI")
    structure = JpegStructure()
    structure.markers.append(("SOI", 0))
    pos = 2
    restart_interval = 0
    saw_eoi = False
    while pos < len(data):
        if data[pos] != 0xFF:
            raise TruncatedSegment(f"expected a marker at offset {pos}")
        # fill bytes: any number of 0xFF may precede the marker code
        while pos < len(data) and data[pos] == 0xFF:
            pos += 1
        if pos >= len(data):
            break
        marker = data[pos]
        offset = pos - 1
        pos += 1
        structure.markers.append((_marker_name(marker), offset))
        if marker == EOI:
            saw_eoi = True
            break
        if marker == TEM or marker in RST_RANGE:
            continue  # standalone, no payload
        if marker in SOF_MARKERS and marker not in SUPPORTED_SOF:
            raise UnsupportedMode(
                f"{_marker_name(marker)} coding is not baseline sequential")
        if marker == DAC:
            raise UnsupportedMode("arithmetic coding is not baseline")
        start, end = _segment(data, pos)
        if marker in SUPPORTED_SOF:
            _parse_sof(data, start, end, structure)
        elif marker == DQT:
            _parse_dqt(data, start, end, structure)
        elif marker == DHT:
            _parse_dht(data, start, end, structure)
        elif marker == DRI:
            restart_interval = _be16(data, start)
        elif marker == SOS:
            scan, end = _parse_sos(data, start, end, structure, restart_interval)
            structure.scans.append(scan)
        # APPn / COM / DNL and anything unrecognized: skip by length
        pos = end
    if not structure.components or not structure.scans:
        raise TruncatedSegment("stream contains no frame/scan")
    if not saw_eoi:
        raise TruncatedSegment("stream ends without EOI")
    return structure
