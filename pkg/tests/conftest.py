"""Shared fixtures: a generated JPEG corpus with known provenance."""

import io

import numpy as np
import pytest
from PIL import Image

# stashed for the acceptance gate, which prints one line per criterion
# outside pytest's output capture
PYTEST_CONFIG = None


def pytest_configure(config):
    global PYTEST_CONFIG
    PYTEST_CONFIG = config


def _photo_like(rng, width, height):
    """Smooth low-frequency content plus texture, like a real photo."""
    yy, xx = np.mgrid[0:height, 0:width]
    base = (
        128
        + 80 * np.sin(xx / 37.0) * np.cos(yy / 23.0)
        + 40 * np.sin((xx + yy) / 11.0)
    )
    channels = []
    for _ in range(3):
        noise = rng.normal(0, 12, size=(height, width))
        shift = rng.uniform(-30, 30)
        channels.append(np.clip(base + shift + noise, 0, 255))
    return np.stack(channels, axis=-1).astype(np.uint8)


def _save_jpeg(array, subsampling, quality, **kwargs) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(array).save(buf, "JPEG", quality=quality,
                                subsampling=subsampling, **kwargs)
    return buf.getvalue()


def _build_corpus():
    """>= 20 baseline JPEGs: 4:4:4 and 4:2:0, with and without restart
    markers, varied sizes (including non-multiples of 8) and qualities."""
    rng = np.random.default_rng(20240817)
    corpus = []
    sizes = [(64, 64), (96, 64), (80, 56), (120, 88), (61, 45),
             (128, 96), (72, 96), (100, 76), (48, 48), (200, 152)]
    for i, (w, h) in enumerate(sizes):
        img = _photo_like(rng, w, h)
        quality = (55, 75, 90)[i % 3]
        corpus.append((f"img{i:02d}_444_q{quality}.jpg",
                       _save_jpeg(img, 0, quality)))
        corpus.append((f"img{i:02d}_420_q{quality}.jpg",
                       _save_jpeg(img, 2, quality)))
        if i % 2 == 0:
            corpus.append((f"img{i:02d}_420_rst_q{quality}.jpg",
                           _save_jpeg(img, 2, quality,
                                      restart_marker_blocks=3)))
    assert len(corpus) >= 20
    return corpus


@pytest.fixture(scope="session")
def corpus():
    """List of (name, jpeg bytes)."""
    return _build_corpus()


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory, corpus):
    """The same corpus written to disk for path-based APIs."""
    d = tmp_path_factory.mktemp("corpus")
    for name, data in corpus:
        (d / name).write_bytes(data)
    return d


@pytest.fixture(scope="session")
def sample_jpeg(corpus):
    """One representative 4:2:0 file from the corpus."""
    for name, data in corpus:
        if "_420_q" in name:
            return data
    raise AssertionError("corpus has no 4:2:0 file")
