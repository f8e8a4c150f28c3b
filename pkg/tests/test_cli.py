"""CLI surface tests: every subcommand plus exit-code contract."""

import io
import json

import numpy as np
import pytest
from PIL import Image

from freqdet.cli import main
from freqdet.tensor import read_dctt


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def jpeg_444(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, (48, 64, 3)).astype(np.uint8)
    path = tmp_path / "in.jpg"
    buf = io.BytesIO()
    Image.fromarray(img).save(buf, "JPEG", quality=90, subsampling=0)
    path.write_bytes(buf.getvalue())
    return path


class TestInfo:
    def test_summary(self, capsys, jpeg_444):
        code, out, _ = run(capsys, "info", str(jpeg_444))
        assert code == 0
        assert "sampling 1x1,1x1,1x1" in out
        doc = json.loads(out[out.index("{"):])
        assert doc["width"] == 64 and doc["height"] == 48

    def test_truncated_file(self, capsys, jpeg_444, tmp_path):
        bad = tmp_path / "trunc.jpg"
        bad.write_bytes(jpeg_444.read_bytes()[:40])
        code, _, err = run(capsys, "info", str(bad))
        assert code == 2
        assert "offset" in err or "decode error" in err

    def test_progressive_exit_code(self, capsys, tmp_path):
        path = tmp_path / "prog.jpg"
        buf = io.BytesIO()
        Image.new("RGB", (32, 32), (10, 60, 90)).save(
            buf, "JPEG", progressive=True)
        path.write_bytes(buf.getvalue())
        code, _, err = run(capsys, "info", str(path))
        assert code == 3

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "info", "/nonexistent/x.jpg")
        assert code == 1


class TestExtract:
    def test_writes_dctt(self, capsys, jpeg_444, tmp_path):
        out = tmp_path / "out.dctt"
        code, stdout, _ = run(capsys, "extract", str(jpeg_444), str(out))
        assert code == 0
        assert "rows=6 cols=8 channels=192" in stdout
        tensor = read_dctt(out)
        assert tensor.shape == (6, 8, 192)

    def test_304_shape(self, capsys, tmp_path):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 256, (304, 304, 3)).astype(np.uint8)
        src = tmp_path / "big.jpg"
        buf = io.BytesIO()
        Image.fromarray(img).save(buf, "JPEG", subsampling=0)
        src.write_bytes(buf.getvalue())
        out = tmp_path / "big.dctt"
        code, stdout, _ = run(capsys, "extract", str(src), str(out))
        assert code == 0
        assert read_dctt(out).shape == (38, 38, 192)


class TestRoundtrip:
    def test_report(self, capsys, jpeg_444):
        code, out, _ = run(capsys, "roundtrip", str(jpeg_444))
        assert code == 0
        doc = json.loads(out)
        assert doc["max_abs_error"] <= 4
        assert doc["within_1"] >= 0.85


class TestEval:
    def test_perfect_and_hand_case(self, capsys, tmp_path):
        gt_path = tmp_path / "gt.json"
        det_path = tmp_path / "det.json"
        gt_path.write_text(json.dumps([
            {"image_id": "a", "class": "c", "bbox": [0, 0, 10, 10]},
            {"image_id": "a", "class": "c", "bbox": [20, 20, 30, 30]},
        ]))
        # confidence order: TP, FP, TP -> the hand-derived AP 28/33
        det_path.write_text(json.dumps([
            {"image_id": "a", "class": "c", "bbox": [0, 0, 10, 10],
             "score": 0.9},
            {"image_id": "a", "class": "c", "bbox": [50, 50, 60, 60],
             "score": 0.8},
            {"image_id": "a", "class": "c", "bbox": [20, 20, 30, 30],
             "score": 0.7},
        ]))
        code, out, _ = run(capsys, "eval", str(gt_path), str(det_path))
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["per_class_ap"]["c"] - 28 / 33) <= 1e-12
        assert len(doc["buckets"]) == 5

    def test_unseen_class_counted_as_zero(self, capsys, tmp_path):
        gt_path = tmp_path / "gt.json"
        det_path = tmp_path / "det.json"
        gt_path.write_text(json.dumps([
            {"image_id": "a", "class": "c", "bbox": [0, 0, 10, 10]},
            {"image_id": "a", "class": "d", "bbox": [0, 0, 10, 10]},
        ]))
        det_path.write_text(json.dumps([
            {"image_id": "a", "class": "c", "bbox": [0, 0, 10, 10],
             "score": 1.0},
        ]))
        code, out, _ = run(capsys, "eval", str(gt_path), str(det_path))
        doc = json.loads(out)
        assert doc["per_class_ap"]["d"] == 0.0
        assert abs(doc["map"] - 0.5) <= 1e-12


class TestFlops:
    def test_ssd300(self, capsys):
        code, out, _ = run(capsys, "flops", "ssd300")
        doc = json.loads(out)
        assert code == 0
        assert 26e9 <= doc["total_flops"] <= 36e9
        assert abs(doc["ratio_to_ssd300"] - 1.0) <= 1e-12

    def test_ssd_freq_ratio(self, capsys):
        code, out, _ = run(capsys, "flops", "ssd_freq")
        doc = json.loads(out)
        assert 11e9 <= doc["total_flops"] <= 17e9
        assert 1.9 <= doc["ratio_to_ssd300"] <= 2.5
        assert "multiply-accumulate" in doc["flops_convention"]

    def test_bad_arch_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "flops", "vgg19")
        assert code == 1


class TestBench:
    def test_decode_both_modes_with_ratio(self, capsys, corpus_dir):
        paths = [str(p) for p in sorted(corpus_dir.iterdir())[:3]]
        code, out, _ = run(capsys, "bench", "decode", "--corpus", *paths,
                           "--repetitions", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc[0]["mode"] == "decode:partial"
        assert doc[1]["mode"] == "decode:full"
        assert doc[2]["partial_over_full_ratio"] > 0

    def test_single_repetition_std_zero(self, capsys, corpus_dir):
        paths = [str(p) for p in sorted(corpus_dir.iterdir())[:2]]
        code, out, _ = run(capsys, "bench", "decode", "--corpus", *paths,
                           "--mode", "partial", "--repetitions", "1")
        doc = json.loads(out)
        assert doc[0]["items_per_sec_std"] == 0.0

    def test_forward(self, capsys):
        code, out, _ = run(capsys, "bench", "forward", "--batch-size", "1",
                           "--batch-count", "2", "--repetitions", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["mode"] == "forward:frequency"
        assert doc["batch_count"] == 2

    def test_usage_error_without_corpus(self, capsys):
        code, _, _ = run(capsys, "bench", "decode", "--repetitions", "1")
        assert code == 1


class TestUsage:
    def test_no_args(self, capsys):
        assert run(capsys, )[0] == 1

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1
