"""FLOPs estimator and benchmark harness tests."""

import numpy as np
import pytest

from freqdet.errors import EmptyCorpus
from freqdet.frontend import build_desk_network
from freqdet.perf import (
    ArchSpec,
    BenchReport,
    LayerSpec,
    bench_decode,
    bench_forward,
    estimate_flops,
    flops_report,
    ssd300_arch,
    ssd_freq_arch,
)


def conv(k, cout, stride=1, padding=None):
    if padding is None:
        padding = k // 2
    return LayerSpec(kind="conv", kernel=k, stride=stride, padding=padding,
                     out_channels=cout)


class TestEstimator:
    def test_trivial_conv_under_2flop_convention(self):
        # 3x3 conv, 1 -> 1 channels, 10x10 output
        arch = ArchSpec(name="t", input_dims=(10, 10, 1), layers=[conv(3, 1)])
        assert estimate_flops(arch, flops_per_mac=2) == 1800
        assert estimate_flops(arch, flops_per_mac=1) == 900

    def test_dense_layer(self):
        arch = ArchSpec(name="d", input_dims=(1, 1, 64),
                        layers=[LayerSpec(kind="dense", out_channels=10)])
        assert estimate_flops(arch, flops_per_mac=2) == 2 * 64 * 10

    def test_pooling_free(self):
        arch = ArchSpec(name="p", input_dims=(8, 8, 4),
                        layers=[LayerSpec(kind="pool", kernel=2, stride=2)])
        assert estimate_flops(arch) == 0

    def test_ssd300_in_paper_range(self):
        g = estimate_flops(ssd300_arch()) / 1e9
        assert 26 <= g <= 36

    def test_ssd_freq_in_paper_range(self):
        g = estimate_flops(ssd_freq_arch()) / 1e9
        assert 11 <= g <= 17

    def test_ratio_in_paper_range(self):
        ratio = estimate_flops(ssd300_arch()) / estimate_flops(ssd_freq_arch())
        assert 1.9 <= ratio <= 2.5

    def test_additive_over_concatenation_1000(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            c0 = int(rng.integers(1, 16))
            layers = []
            cin = c0
            for _ in range(int(rng.integers(1, 6))):
                cout = int(rng.integers(1, 16))
                layers.append(conv(3, cout))
                cin = cout
            cut = int(rng.integers(0, len(layers) + 1))
            full = ArchSpec("f", (32, 32, c0), layers)
            head = ArchSpec("h", (32, 32, c0), layers[:cut])
            mid_dims = head.shapes()[-1]
            tail = ArchSpec("t", mid_dims, layers[cut:])
            assert estimate_flops(full) == \
                estimate_flops(head) + estimate_flops(tail)

    def test_doubling_spatial_dims_quadruples_1000(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            cin = int(rng.integers(1, 8))
            cout = int(rng.integers(1, 8))
            k = int(rng.choice([1, 3, 5]))
            h = int(rng.integers(4, 40))
            w = int(rng.integers(4, 40))
            small = ArchSpec("s", (h, w, cin), [conv(k, cout)])
            big = ArchSpec("b", (2 * h, 2 * w, cin), [conv(k, cout)])
            assert estimate_flops(big) == 4 * estimate_flops(small)

    def test_inconsistent_spec_rejected(self):
        arch = ArchSpec("bad", (4, 4, 3), [conv(7, 8, padding=0)])
        with pytest.raises(ValueError):
            arch.shapes()

    def test_report_names_convention(self):
        report = flops_report(ssd300_arch())
        assert "multiply-accumulate" in report["flops_convention"]
        assert report["total_gflops"] == report["total_flops"] / 1e9


class TestBenchReport:
    def test_validation(self):
        with pytest.raises(ValueError):
            BenchReport(mode="x", items_per_sec_mean=0.0,
                        items_per_sec_std=0.0, repetitions=1, batch_size=1,
                        batch_count=1, wall_clock_total=1.0, env="e")
        with pytest.raises(ValueError):
            BenchReport(mode="x", items_per_sec_mean=1.0,
                        items_per_sec_std=0.0, repetitions=0, batch_size=1,
                        batch_count=1, wall_clock_total=1.0, env="e")

    def test_to_dict_fields(self):
        r = BenchReport(mode="x", items_per_sec_mean=5.0,
                        items_per_sec_std=0.5, repetitions=3, batch_size=2,
                        batch_count=4, wall_clock_total=1.0, env="e")
        d = r.to_dict()
        assert d["mode"] == "x" and d["repetitions"] == 3


class TestBenchDecode:
    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            bench_decode([], mode="partial")

    def test_partial_and_full_run(self, corpus_dir):
        paths = sorted(corpus_dir.iterdir())[:4]
        for mode in ("partial", "full"):
            report = bench_decode(paths, mode=mode, repetitions=2)
            assert report.items_per_sec_mean > 0
            assert report.repetitions == 2
            assert report.mode == f"decode:{mode}"

    def test_bad_mode(self, corpus_dir):
        paths = sorted(corpus_dir.iterdir())[:1]
        with pytest.raises(ValueError):
            bench_decode(paths, mode="half")

    def test_bad_file_named(self, tmp_path):
        bad = tmp_path / "broken.jpg"
        bad.write_bytes(b"\xff\xd8garbage")
        with pytest.raises(Exception) as exc:
            bench_decode([bad], mode="partial", repetitions=1)
        assert "broken.jpg" in str(exc.value)

    def test_single_repetition_std_zero(self, corpus_dir):
        paths = sorted(corpus_dir.iterdir())[:2]
        report = bench_decode(paths, mode="partial", repetitions=1)
        assert report.items_per_sec_std == 0.0

    def test_mean_within_rate_range(self, corpus_dir):
        # BenchReport mean lies within [min, max] of per-repetition rates:
        # with std >= 0 this reduces to mean > 0 and std < spread; checked
        # indirectly via repeated runs staying positive and finite
        paths = sorted(corpus_dir.iterdir())[:2]
        report = bench_decode(paths, mode="partial", repetitions=3)
        assert np.isfinite(report.items_per_sec_mean)
        assert report.items_per_sec_std >= 0


class TestBenchForward:
    def test_protocol_shape(self):
        net = build_desk_network()
        report = bench_forward(net, batch_size=2, batch_count=3,
                               repetitions=2)
        assert report.batch_size == 2
        assert report.batch_count == 3
        assert report.mode == "forward:frequency"

    def test_zero_batches_rejected(self):
        net = build_desk_network()
        with pytest.raises(ValueError):
            bench_forward(net, batch_size=8, batch_count=0)
