"""Bitstream parser and entropy decoder tests.

The main oracle is tests/jpeg_encoder.py: an independent coefficient-level
encoder, so decode_scan must recover the exact quantized values that went
in.  Error paths are exercised with purpose-built corrupt streams.
"""

import io

import numpy as np
import pytest
from PIL import Image

from freqdet.errors import (
    BadRestartMarker,
    HuffmanOverrun,
    InvalidCodeCounts,
    MissingSOI,
    MissingTable,
    TruncatedSegment,
    UnsupportedMode,
)
from freqdet.jpeg import (
    HuffmanTableSpec,
    build_huffman_decoder,
    decode_scan,
    parse_stream,
)

from jpeg_encoder import ZIGZAG, encode_jpeg, random_components

FLAT_Q = [1] * 64


def _roundtrip(width, height, sampling, restart_interval=0, seed=0):
    rng = np.random.default_rng(seed)
    comps = random_components(rng, width, height, sampling)
    qtables = [FLAT_Q] * (1 if len(comps) == 1 else 2)
    data = encode_jpeg(width, height, comps, sampling, qtables,
                       restart_interval)
    structure = parse_stream(data)
    decoded = decode_scan(structure, data)
    for ci, comp in enumerate(structure.components):
        rows, cols = structure.component_grid(comp)
        want = comps[ci][:rows, :cols]
        got = decoded[comp.component_id]
        assert got.shape == (rows, cols, 64)
        assert np.array_equal(got, want), \
            f"component {ci} mismatch at {width}x{height} {sampling}"


class TestParser:
    def test_pil_fixture_structure(self, corpus):
        name, data = next((n, d) for n, d in corpus if "_420_q" in n)
        s = parse_stream(data)
        assert s.precision == 8
        assert len(s.components) == 3
        assert (s.components[0].h, s.components[0].v) == (2, 2)
        assert (s.components[1].h, s.components[1].v) == (1, 1)
        assert len(s.quant_tables) == 2
        assert len(s.huffman_specs) == 4
        names = [m for m, _ in s.markers]
        assert names[0] == "SOI"
        assert "SOF0" in names and "SOS" in names and "EOI" in names

    def test_444_sampling(self, corpus):
        name, data = next((n, d) for n, d in corpus if "_444_" in n)
        s = parse_stream(data)
        assert all((c.h, c.v) == (1, 1) for c in s.components)

    def test_restart_interval_recorded(self, corpus):
        name, data = next((n, d) for n, d in corpus if "_rst_" in n)
        s = parse_stream(data)
        assert s.scans[0].restart_interval > 0

    def test_missing_soi(self):
        with pytest.raises(MissingSOI):
            parse_stream(b"\x00\x01not a jpeg")

    def test_progressive_rejected(self):
        buf = io.BytesIO()
        Image.new("RGB", (32, 32), (80, 120, 200)).save(
            buf, "JPEG", progressive=True)
        with pytest.raises(UnsupportedMode):
            parse_stream(buf.getvalue())

    def test_truncation_every_marker(self, sample_jpeg):
        s = parse_stream(sample_jpeg)
        scan_start = s.scans[0].data_start
        # cut inside each header segment before the scan begins
        for cut in range(4, scan_start, 7):
            with pytest.raises((TruncatedSegment, MissingTable,
                                UnsupportedMode, MissingSOI)):
                parse_stream(sample_jpeg[:cut])

    def test_missing_huffman_table(self):
        rng = np.random.default_rng(3)
        sampling = [(1, 1)] * 3
        comps = random_components(rng, 16, 16, sampling)
        data = encode_jpeg(16, 16, comps, sampling, [FLAT_Q, FLAT_Q])
        # drop every DHT segment
        stripped = bytearray()
        i = 0
        out_of_header = False
        while i < len(data):
            if not out_of_header and data[i] == 0xFF and data[i + 1] == 0xC4:
                length = int.from_bytes(data[i + 2:i + 4], "big")
                i += 2 + length
                continue
            if data[i:i + 2] == b"\xff\xda":
                out_of_header = True
            stripped.append(data[i])
            i += 1
        with pytest.raises(MissingTable):
            parse_stream(bytes(stripped))

    def test_byte_offsets_in_markers(self, sample_jpeg):
        s = parse_stream(sample_jpeg)
        for name, offset in s.markers:
            assert sample_jpeg[offset] == 0xFF


class TestHuffmanDecoder:
    def _spec(self, counts, symbols):
        return HuffmanTableSpec(table_class=0, table_id=0,
                                counts=tuple(counts), symbols=tuple(symbols))

    def test_canonical_assignment(self):
        # counts: one 1-bit code, two 2-bit codes -> 0, 10, 11
        spec = self._spec([1, 2] + [0] * 14, [5, 7, 9])
        dec = build_huffman_decoder(spec)
        bits = iter([0, 1, 0, 1, 1])
        read = lambda: next(bits)
        assert dec.decode(read) == 5
        assert dec.decode(read) == 7
        assert dec.decode(read) == 9

    def test_oversubscribed_rejected(self):
        with pytest.raises(InvalidCodeCounts):
            build_huffman_decoder(self._spec([3] + [0] * 15, [1, 2, 3]))

    def test_too_many_symbols_rejected(self):
        counts = [0] * 15 + [16]
        with pytest.raises(ValueError):
            # 16 codes of length 16 with no symbols: spec-level mismatch
            self._spec(counts, [])

    def test_overrun_raises(self):
        spec = self._spec([0, 1] + [0] * 14, [5])  # only code "00"
        dec = build_huffman_decoder(spec)
        bits = iter([1] * 16)
        with pytest.raises(HuffmanOverrun):
            dec.decode(lambda: next(bits))

    def test_roundtrip_random_tables_1000(self):
        # random valid canonical tables: decoding each code's own bits
        # must return its symbol
        rng = np.random.default_rng(4)
        for _ in range(1000):
            n = int(rng.integers(1, 17))
            lengths = sorted(int(rng.integers(1, 17)) for _ in range(n))
            # make the Kraft sum feasible by stretching overfull levels
            counts = [0] * 16
            code_space = 1.0
            ok = True
            for L in lengths:
                if code_space < 2.0 ** -L:
                    ok = False
                    break
                counts[L - 1] += 1
                code_space -= 2.0 ** -L
            if not ok:
                continue
            symbols = list(range(sum(counts)))
            dec = build_huffman_decoder(self._spec(counts, symbols))
            # reconstruct each canonical code and decode it
            code = 0
            k = 0
            for length in range(1, 17):
                for _ in range(counts[length - 1]):
                    bits = [(code >> (length - 1 - b)) & 1
                            for b in range(length)]
                    it = iter(bits)
                    assert dec.decode(lambda: next(it)) == symbols[k]
                    code += 1
                    k += 1
                code <<= 1


class TestScanDecode:
    @pytest.mark.parametrize("sampling", [
        [(1, 1), (1, 1), (1, 1)],
        [(2, 2), (1, 1), (1, 1)],
        [(2, 1), (1, 1), (1, 1)],
        [(1, 2), (1, 1), (1, 1)],
        [(1, 1)],
    ])
    @pytest.mark.parametrize("size", [(16, 16), (40, 24), (17, 9), (64, 48)])
    def test_exact_coefficient_recovery(self, sampling, size):
        _roundtrip(size[0], size[1], sampling, seed=hash((tuple(size),
                                                          len(sampling))) % 997)

    @pytest.mark.parametrize("interval", [1, 2, 3, 7])
    def test_restart_markers(self, interval):
        _roundtrip(48, 32, [(2, 2), (1, 1), (1, 1)],
                   restart_interval=interval, seed=interval)

    def test_restart_dc_predictor_reset(self):
        # one MCU per restart segment: every DC must decode standalone
        rng = np.random.default_rng(9)
        sampling = [(1, 1)]
        comps = random_components(rng, 32, 32, sampling)
        comps[0][..., 0] = 500  # large constant DC: diffs would be 0
        data = encode_jpeg(32, 32, comps, sampling, [FLAT_Q], 1)
        s = parse_stream(data)
        out = decode_scan(s, data)
        assert np.all(out[1][..., 0] == 500)

    def test_out_of_order_restart_rejected(self):
        rng = np.random.default_rng(10)
        sampling = [(1, 1)]
        comps = random_components(rng, 32, 32, sampling)
        data = bytearray(encode_jpeg(32, 32, comps, sampling, [FLAT_Q], 1))
        idx = bytes(data).find(b"\xff\xd0")
        assert idx > 0
        data[idx + 1] = 0xD5  # wrong restart index
        s = parse_stream(bytes(data))
        with pytest.raises(BadRestartMarker):
            decode_scan(s, bytes(data))

    def test_corrupt_entropy_surfaces_overrun(self):
        rng = np.random.default_rng(11)
        sampling = [(1, 1)]
        comps = random_components(rng, 24, 24, sampling)
        data = bytearray(encode_jpeg(24, 24, comps, sampling, [FLAT_Q]))
        s = parse_stream(bytes(data))
        start = s.scans[0].data_start
        # truncate the entropy span hard: decoder must not read past it
        corrupt = bytes(data[:start + 2]) + b"\xff\xd9"
        s2 = parse_stream(corrupt)
        with pytest.raises(HuffmanOverrun):
            decode_scan(s2, corrupt)

    def test_byte_stuffing_handled(self):
        # DC values chosen to force 0xFF bytes in the entropy stream
        rng = np.random.default_rng(12)
        sampling = [(1, 1)]
        comps = random_components(rng, 64, 64, sampling, max_abs=1000)
        data = encode_jpeg(64, 64, comps, sampling, [FLAT_Q])
        s = parse_stream(data)
        entropy = data[s.scans[0].data_start:s.scans[0].data_end]
        assert b"\xff\x00" in entropy  # the case is actually exercised
        out = decode_scan(s, data)
        assert np.array_equal(out[1], comps[0][:8, :8])

    def test_pil_coefficients_sane(self, corpus):
        # structural check on real libjpeg output: grids sized per spec
        for name, data in corpus[:6]:
            s = parse_stream(data)
            out = decode_scan(s, data)
            for comp in s.components:
                rows, cols = s.component_grid(comp)
                assert out[comp.component_id].shape == (rows, cols, 64)
