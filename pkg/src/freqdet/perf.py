"""Performance accounting: analytic FLOPs estimates for the pixel and
frequency detector variants, plus wall-clock decode and forward-pass
benchmarks.

FLOPs convention: a multiply-accumulate counts as `flops_per_mac`
operations (default 1, i.e. MAC counting; pass 2 to count multiply and
add separately).  Activations and pooling are free under either
convention.  Every report names the convention in force so that ratios,
which are convention-independent, remain the primary comparison.
"""

import json
import platform
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCorpus
from .frontend import NetworkWeights, forward
from .jpeg import decode_scan, parse_stream
from .planes import dequantized_planes, full_decode_reference
from .tensor import assemble_dct_tensor, upsample_chroma_to_444

DEFAULT_FLOPS_PER_MAC = 1


@dataclass(frozen=True)
class LayerSpec:
    """One layer of an ArchSpec.

    kind: "conv" (kernel, stride, padding, out_channels), "pool"
    (kernel, stride) or "dense" (out_features).
    """

    kind: str
    name: str = ""
    kernel: int = 1
    stride: int = 1
    padding: int = 0
    out_channels: int = 0

    def output_dims(self, h: int, w: int, c: int):
        if self.kind == "conv":
            ho = (h + 2 * self.padding - self.kernel) // self.stride + 1
            wo = (w + 2 * self.padding - self.kernel) // self.stride + 1
            return ho, wo, self.out_channels
        if self.kind == "pool":
            # ceil-mode pooling, as used by the reference backbone
            ho = -(-(h - self.kernel + 2 * self.padding) // self.stride) + 1
            wo = -(-(w - self.kernel + 2 * self.padding) // self.stride) + 1
            return ho, wo, c
        if self.kind == "dense":
            return 1, 1, self.out_channels
        raise ValueError(f"unknown layer kind {self.kind!r}")

    def macs(self, h: int, w: int, c: int) -> int:
        ho, wo, co = self.output_dims(h, w, c)
        if self.kind == "conv":
            return self.kernel * self.kernel * c * co * ho * wo
        if self.kind == "pool":
            return 0
        return h * w * c * co  # dense: in_features x out_features


@dataclass
class ArchSpec:
    name: str
    input_dims: tuple  # (H, W, C)
    layers: list = field(default_factory=list)

    def shapes(self) -> list:
        """Propagate dims through every layer; validates consistency."""
        h, w, c = self.input_dims
        out = [(h, w, c)]
        for layer in self.layers:
            h, w, c = layer.output_dims(h, w, c)
            if h <= 0 or w <= 0 or c <= 0:
                raise ValueError(
                    f"layer {layer.name or layer.kind} collapses to {h}x{w}x{c}")
            out.append((h, w, c))
        return out


def estimate_flops(arch: ArchSpec,
                   flops_per_mac: int = DEFAULT_FLOPS_PER_MAC) -> int:
    """Total FLOPs for an ArchSpec under the given convention.

    Conv: k*k*Cin*Cout*Hout*Wout MACs; dense: in*out MACs; pooling and
    activations are free.  Side-effect free and additive over layers;
    parallel head specs attached to a composite arch are included.
    """
    h, w, c = arch.input_dims
    total = 0
    for layer in arch.layers:
        total += layer.macs(h, w, c)
        h, w, c = layer.output_dims(h, w, c)
    for head in getattr(arch, "heads", []):
        total += estimate_flops(head, 1)
    return total * flops_per_mac


def flops_report(arch: ArchSpec,
                 flops_per_mac: int = DEFAULT_FLOPS_PER_MAC) -> dict:
    total = estimate_flops(arch, flops_per_mac)
    return {
        "arch": arch.name,
        "total_flops": total,
        "total_gflops": total / 1e9,
        "flops_convention": _convention_note(flops_per_mac),
    }


def _convention_note(flops_per_mac: int) -> str:
    return (f"{flops_per_mac} FLOP(s) per multiply-accumulate; "
            "activations and pooling free")


# --- reference architectures ---------------------------------------------

def _conv(name, k, cout, stride=1, padding=None):
    if padding is None:
        padding = k // 2
    return LayerSpec(kind="conv", name=name, kernel=k, stride=stride,
                     padding=padding, out_channels=cout)


def _pool(name, k=2, stride=2, padding=0):
    return LayerSpec(kind="pool", name=name, kernel=k, stride=stride,
                     padding=padding)


def _vgg_block(prefix, n, cout):
    return [_conv(f"{prefix}_{i + 1}", 3, cout) for i in range(n)] + \
        [_pool(f"pool{prefix[-1]}")]


def _ssd_tail():
    """Shared SSD300 layers from block 4 onward, plus extras and heads.

    Heads cover the six standard source maps (conv4_3, fc7, conv8_2 ..
    conv11_2) with (4, 6, 6, 6, 4, 4) boxes per cell and 21 classes.
    """
    layers = []
    layers += _vgg_block("conv4", 3, 512)  # 38 -> 19
    layers += [_conv(f"conv5_{i}", 3, 512) for i in (1, 2, 3)]
    layers += [_pool("pool5", k=3, stride=1, padding=1)]  # 19 -> 19
    layers += [_conv("fc6", 3, 1024)]  # dilated in the reference; same MACs
    layers += [_conv("fc7", 1, 1024)]
    layers += [_conv("conv8_1", 1, 256), _conv("conv8_2", 3, 512, stride=2)]
    layers += [_conv("conv9_1", 1, 128), _conv("conv9_2", 3, 256, stride=2)]
    layers += [_conv("conv10_1", 1, 128),
               _conv("conv10_2", 3, 256, stride=1, padding=0)]
    layers += [_conv("conv11_1", 1, 128),
               _conv("conv11_2", 3, 256, stride=1, padding=0)]
    heads = []
    num_classes = 21
    for src, ch, boxes, side in (
            ("conv4_3", 512, 4, 38), ("fc7", 1024, 6, 19),
            ("conv8_2", 512, 6, 10), ("conv9_2", 256, 6, 5),
            ("conv10_2", 256, 4, 3), ("conv11_2", 256, 4, 1)):
        per_cell = boxes * (num_classes + 4)
        heads.append(ArchSpec(
            name=f"head_{src}", input_dims=(side, side, ch),
            layers=[_conv(f"head_{src}", 3, per_cell)]))
    return layers, heads


def ssd300_arch() -> ArchSpec:
    """Pixel-domain SSD300: full VGG16 backbone plus extras and heads.

    The six per-map detection heads are folded in as extra layers on a
    parallel spec and summed into this one via merged layer list, so the
    total reflects backbone + extras + heads.
    """
    layers = []
    layers += _vgg_block("conv1", 2, 64)  # 300 -> 150
    layers += _vgg_block("conv2", 2, 128)  # 150 -> 75
    layers += _vgg_block("conv3", 3, 256)  # 75 -> 38 (ceil pool)
    tail, heads = _ssd_tail()
    layers += tail
    arch = ArchSpec(name="ssd300", input_dims=(300, 300, 3), layers=layers)
    return _with_heads(arch, heads)


def ssd_freq_arch() -> ArchSpec:
    """Frequency-domain variant: the full-resolution VGG blocks are
    replaced by a single 8x8/stride-8 convolution over the 3 coefficient
    planes, producing the 38x38 map block 4 consumes."""
    layers = [LayerSpec(kind="conv", name="freq_frontend", kernel=8,
                        stride=8, padding=2, out_channels=256)]
    tail, heads = _ssd_tail()
    layers += tail
    arch = ArchSpec(name="ssd_freq", input_dims=(300, 300, 3), layers=layers)
    return _with_heads(arch, heads)


@dataclass
class _CompositeArch(ArchSpec):
    heads: list = field(default_factory=list)


def _with_heads(arch: ArchSpec, heads) -> ArchSpec:
    return _CompositeArch(name=arch.name, input_dims=arch.input_dims,
                          layers=arch.layers, heads=list(heads))


# --- wall-clock benchmarks -----------------------------------------------

@dataclass
class BenchReport:
    mode: str
    items_per_sec_mean: float
    items_per_sec_std: float
    repetitions: int
    batch_size: int
    batch_count: int
    wall_clock_total: float
    env: str

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.items_per_sec_mean <= 0 or self.items_per_sec_std < 0:
            raise ValueError("throughput must be positive")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "items_per_sec_mean": self.items_per_sec_mean,
            "items_per_sec_std": self.items_per_sec_std,
            "repetitions": self.repetitions,
            "batch_size": self.batch_size,
            "batch_count": self.batch_count,
            "wall_clock_total": self.wall_clock_total,
            "env": self.env,
        }


def _env_note() -> str:
    return f"{platform.platform()} / {platform.processor() or 'cpu'}"


def _decode_partial(data: bytes):
    structure = parse_stream(data)
    blocks = decode_scan(structure, data)
    planes = dequantized_planes(structure, blocks)
    full = [upsample_chroma_to_444(p, structure.height, structure.width,
                                   "replicate") for p in planes]
    return assemble_dct_tensor(full)


def _decode_full(data: bytes):
    structure = parse_stream(data)
    blocks = decode_scan(structure, data)
    return full_decode_reference(structure, blocks)


def _measure(work, items: int, repetitions: int, mode: str,
             batch_size: int, batch_count: int) -> BenchReport:
    work()  # discarded warm-up repetition (JIT, caches)
    rates = []
    total = 0.0
    for _ in range(repetitions):
        t0 = time.perf_counter()
        work()
        dt = time.perf_counter() - t0
        total += dt
        rates.append(items / dt)
    rates = np.asarray(rates)
    return BenchReport(
        mode=mode, items_per_sec_mean=float(rates.mean()),
        items_per_sec_std=float(rates.std()), repetitions=repetitions,
        batch_size=batch_size, batch_count=batch_count,
        wall_clock_total=total, env=_env_note())


def bench_decode(paths, mode: str = "partial",
                 repetitions: int = 10) -> BenchReport:
    """Decode throughput over a JPEG corpus, files preloaded in memory.

    partial: parse + entropy decode + dequantize + assemble tensor.
    full: partial work plus inverse DCT, chroma upsampling and color
    conversion.  Disk reads are excluded from the timed section.
    """
    paths = list(paths)
    if not paths:
        raise EmptyCorpus("decode benchmark needs at least one file")
    blobs = []
    for p in paths:
        with open(p, "rb") as f:
            blobs.append(f.read())
    decode = {"partial": _decode_partial, "full": _decode_full}.get(mode)
    if decode is None:
        raise ValueError(f"unknown decode mode {mode!r}")
    for p, b in zip(paths, blobs):  # fail fast, naming the offender
        try:
            decode(b)
        except Exception as exc:
            raise type(exc)(f"{p}: {exc}") from exc

    def work():
        for b in blobs:
            decode(b)

    return _measure(work, items=len(blobs), repetitions=repetitions,
                    mode=f"decode:{mode}", batch_size=1,
                    batch_count=len(blobs))


def bench_forward(net: NetworkWeights, batch_size: int = 8,
                  batch_count: int = 619,
                  repetitions: int = 10) -> BenchReport:
    """Forward-pass throughput on synthesized inputs.

    Batches are generated once before timing; only forward passes are
    timed, and the rate is items (images) per second.
    """
    if batch_size < 1 or batch_count < 1:
        raise ValueError("batch_size and batch_count must be >= 1")
    rng = np.random.default_rng(0)
    size = net.input_size
    if net.variant == "frequency":
        shape = (batch_size, size // 8, size // 8, 192)
    else:
        shape = (batch_size, size, size, 3)
    batches = [rng.standard_normal(shape) for _ in range(batch_count)]

    def work():
        for batch in batches:
            for item in batch:
                forward(item, net, conf_threshold=1.1)

    return _measure(work, items=batch_size * batch_count,
                    repetitions=repetitions, mode=f"forward:{net.variant}",
                    batch_size=batch_size, batch_count=batch_count)
