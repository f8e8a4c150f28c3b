"""Desk-scale single-shot detection head over the frequency front-end.

The network is deliberately small (untrained, seeded weights) but keeps
every architectural mechanism of the full-size detector: the 8x8/stride-8
first convolution, a progressively downsampling trunk, multi-scale heads,
softmax classification, box regression against anchors and per-class NMS.
"""

import json
from dataclasses import dataclass

import numpy as np

from .boxes import AnchorSet, LevelConfig, decode_boxes, generate_anchors, nms
from .conv import Kernel, block_conv8, block_conv8_tensor, conv2d, relu, softmax


@dataclass(frozen=True)
class Detection:
    """One detected object: class id (1-based, 0 = background), score,
    and (xmin, ymin, xmax, ymax) in normalized image coordinates."""

    class_id: int
    confidence: float
    box: tuple


@dataclass
class NetworkWeights:
    variant: str  # "frequency" or "pixel"
    input_size: int
    num_classes: int  # foreground classes; heads emit num_classes + 1
    frontend: list  # Kernels; single 8x8/s8 kernel or a pixel-domain stack
    trunk: list  # Kernels, applied with ReLU in order
    head_levels: tuple  # indices into trunk outputs carrying heads
    cls_heads: list
    loc_heads: list
    anchor_levels: tuple  # of LevelConfig, aligned with head_levels
    variances: tuple = (0.1, 0.2)

    def anchors(self) -> AnchorSet:
        return generate_anchors(self.anchor_levels)


def _uniform_kernel(rng, cout, cin, k, stride=1, padding=0) -> Kernel:
    scale = 1.0 / np.sqrt(cin * k * k)
    w = rng.uniform(-scale, scale, size=(cout, cin, k, k))
    return Kernel(weights=w, bias=np.zeros(cout), stride=stride, padding=padding)


def build_desk_network(num_classes: int = 3, input_size: int = 128,
                       variant: str = "frequency", seed: int = 0) -> NetworkWeights:
    """Seeded desk-scale network.

    Trunk: four stride-2 convs with widths 256, 256, 128, 128; heads on
    the last three maps, four anchor shapes per cell.  The frequency
    variant starts with one 8x8/stride-8 conv; the pixel variant with a
    full-resolution conv stack reaching the same /8 geometry, so the two
    are comparable end to end.
    """
    if input_size % 128:
        raise ValueError("input_size must be a multiple of 128")
    rng = np.random.default_rng(seed)
    front_ch = 128
    if variant == "frequency":
        frontend = [_uniform_kernel(rng, front_ch, 3, 8, stride=8)]
    elif variant == "pixel":
        frontend = [
            _uniform_kernel(rng, 32, 3, 3, stride=1, padding=1),
            _uniform_kernel(rng, 64, 32, 3, stride=2, padding=1),
            _uniform_kernel(rng, 64, 64, 3, stride=1, padding=1),
            _uniform_kernel(rng, 128, 64, 3, stride=2, padding=1),
            _uniform_kernel(rng, front_ch, 128, 3, stride=2, padding=1),
        ]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    # trunk and heads are seeded identically for both variants
    trng = np.random.default_rng(seed + 1)
    widths = (256, 256, 128, 128)
    trunk = []
    cin = front_ch
    for w in widths:
        trunk.append(_uniform_kernel(trng, w, cin, 3, stride=2, padding=1))
        cin = w
    head_levels = (1, 2, 3)
    scales = (0.35, 0.55, 0.75)
    next_scales = (0.55, 0.75, 0.95)
    cls_heads, loc_heads, anchor_levels = [], [], []
    base = input_size // 8
    for li, level in enumerate(head_levels):
        c = widths[level]
        cells = base // (2 ** (level + 1))
        n_shapes = 4  # ratios 1, 2, 1/2 plus the extra geometric-mean box
        cls_heads.append(_uniform_kernel(
            trng, n_shapes * (num_classes + 1), c, 3, padding=1))
        loc_heads.append(_uniform_kernel(trng, n_shapes * 4, c, 3, padding=1))
        anchor_levels.append(LevelConfig(
            rows=cells, cols=cells, scale=scales[li],
            aspect_ratios=(1.0, 2.0, 0.5), next_scale=next_scales[li],
            add_extra=True))
    return NetworkWeights(
        variant=variant, input_size=input_size, num_classes=num_classes,
        frontend=frontend, trunk=trunk, head_levels=head_levels,
        cls_heads=cls_heads, loc_heads=loc_heads,
        anchor_levels=tuple(anchor_levels))


def _frontend_features(x: np.ndarray, net: NetworkWeights) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if net.variant == "frequency":
        k = net.frontend[0]
        if x.ndim == 3 and x.shape[-1] == k.weights.shape[1] * 64:
            return relu(block_conv8_tensor(x, k))
        return relu(block_conv8(x, k))
    for k in net.frontend:
        x = relu(conv2d(x, k))
    return x


def forward_raw(x: np.ndarray, net: NetworkWeights):
    """Run the network up to raw head outputs.

    Returns (class_logits (N, classes+1), loc offsets (N, 4)) where N is
    the total anchor count.
    """
    feat = _frontend_features(x, net)
    maps = []
    for i, k in enumerate(net.trunk):
        feat = relu(conv2d(feat, k))
        if i in net.head_levels:
            maps.append(feat)
    logits, locs = [], []
    for m, ck, lk in zip(maps, net.cls_heads, net.loc_heads):
        c = conv2d(m, ck)
        l = conv2d(m, lk)
        nb = ck.weights.shape[0] // (net.num_classes + 1)
        logits.append(c.reshape(-1, nb, net.num_classes + 1).reshape(-1, net.num_classes + 1))
        locs.append(l.reshape(-1, nb, 4).reshape(-1, 4))
    return np.concatenate(logits, axis=0), np.concatenate(locs, axis=0)


def forward(x: np.ndarray, net: NetworkWeights, conf_threshold: float = 0.01,
            nms_iou: float = 0.45, top_k: int = 200) -> list:
    """Full detection pass: front-end, trunk, heads, softmax, box
    decoding and per-class NMS.  Deterministic for fixed weights."""
    logits, locs = forward_raw(x, net)
    anchors = net.anchors()
    if len(anchors) != len(logits):
        raise ValueError(
            f"{len(logits)} head outputs vs {len(anchors)} anchors")
    scores = softmax(logits, axis=-1)
    boxes = decode_boxes(locs, anchors, net.variances)
    detections = []
    for cls in range(1, net.num_classes + 1):
        cs = scores[:, cls]
        sel = np.nonzero(cs >= conf_threshold)[0]
        if conf_threshold >= 1.0 or len(sel) == 0:
            continue
        kept = nms(boxes[sel], cs[sel], iou_threshold=nms_iou, top_k=top_k)
        for i in kept:
            idx = sel[i]
            detections.append(Detection(
                class_id=cls, confidence=float(cs[idx]),
                box=tuple(boxes[idx].tolist())))
    detections.sort(key=lambda d: (-d.confidence, d.class_id, d.box))
    return detections


# --- weights file: JSON manifest + flat float32 blob --------------------

def save_weights(manifest_path, net: NetworkWeights) -> None:
    """Write a JSON manifest plus a little-endian float32 blob
    (manifest path + '.bin') holding all layer weights by offset."""
    blob_path = str(manifest_path) + ".bin"
    chunks = []
    offset = 0

    def emit(kernel: Kernel) -> dict:
        nonlocal offset
        w = np.ascontiguousarray(kernel.weights, dtype="<f4").tobytes()
        b = np.ascontiguousarray(kernel.bias, dtype="<f4").tobytes()
        entry = {
            "shape": list(kernel.weights.shape),
            "stride": kernel.stride,
            "padding": kernel.padding,
            "weights_offset": offset,
            "weights_length": len(w),
            "bias_offset": offset + len(w),
            "bias_length": len(b),
        }
        chunks.append(w)
        chunks.append(b)
        offset += len(w) + len(b)
        return entry

    manifest = {
        "variant": net.variant,
        "input_size": net.input_size,
        "num_classes": net.num_classes,
        "variances": list(net.variances),
        "head_levels": list(net.head_levels),
        "frontend": [emit(k) for k in net.frontend],
        "trunk": [emit(k) for k in net.trunk],
        "cls_heads": [emit(k) for k in net.cls_heads],
        "loc_heads": [emit(k) for k in net.loc_heads],
        "anchor_levels": [{
            "rows": lv.rows, "cols": lv.cols, "scale": lv.scale,
            "aspect_ratios": list(lv.aspect_ratios),
            "next_scale": lv.next_scale, "add_extra": lv.add_extra,
        } for lv in net.anchor_levels],
        "blob": blob_path.rsplit("/", 1)[-1],
    }
    with open(blob_path, "wb") as f:
        for c in chunks:
            f.write(c)
    with open(manifest_path, "w") as f:
        json.dump(manifest, f, indent=1)


def load_weights(manifest_path) -> NetworkWeights:
    with open(manifest_path) as f:
        manifest = json.load(f)
    base = str(manifest_path).rsplit("/", 1)
    blob_path = (base[0] + "/" if len(base) == 2 else "") + manifest["blob"]
    with open(blob_path, "rb") as f:
        blob = f.read()

    def take(entry) -> Kernel:
        w = np.frombuffer(blob, dtype="<f4",
                          count=entry["weights_length"] // 4,
                          offset=entry["weights_offset"])
        b = np.frombuffer(blob, dtype="<f4",
                          count=entry["bias_length"] // 4,
                          offset=entry["bias_offset"])
        return Kernel(weights=w.reshape(entry["shape"]).astype(np.float64),
                      bias=b.astype(np.float64),
                      stride=entry["stride"], padding=entry["padding"])

    return NetworkWeights(
        variant=manifest["variant"],
        input_size=manifest["input_size"],
        num_classes=manifest["num_classes"],
        frontend=[take(e) for e in manifest["frontend"]],
        trunk=[take(e) for e in manifest["trunk"]],
        head_levels=tuple(manifest["head_levels"]),
        cls_heads=[take(e) for e in manifest["cls_heads"]],
        loc_heads=[take(e) for e in manifest["loc_heads"]],
        anchor_levels=tuple(LevelConfig(
            rows=lv["rows"], cols=lv["cols"], scale=lv["scale"],
            aspect_ratios=tuple(lv["aspect_ratios"]),
            next_scale=lv["next_scale"], add_extra=lv["add_extra"],
        ) for lv in manifest["anchor_levels"]),
        variances=tuple(manifest["variances"]))
