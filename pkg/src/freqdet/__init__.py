"""freqdet: DCT-domain JPEG analysis and frequency-domain detection.

Extract blockwise DCT coefficients from baseline JPEG bitstreams without
full decoding, assemble detector input tensors, run a stride-8
frequency-domain detection network, and evaluate/benchmark the result.
"""

__version__ = "0.1.0"

from .errors import (
    BadRestartMarker,
    EmptyCorpus,
    FreqdetError,
    HuffmanOverrun,
    InvalidCodeCounts,
    JpegError,
    MissingSOI,
    MissingTable,
    TruncatedSegment,
    UnsupportedMode,
)
from .jpeg import JpegStructure, decode_scan, parse_stream
from .dct import (
    DCT_MATRIX,
    ZIGZAG_ORDER,
    dequantize,
    dezigzag,
    fdct_block,
    idct_block,
    to_zigzag,
    zigzag_index,
    zigzag_map,
)
from .planes import (
    ComponentPlane,
    dequantized_planes,
    full_decode_reference,
    upsample_chroma_to_444,
    ycbcr_to_rgb,
)
from .tensor import (
    NormStats,
    assemble_dct_tensor,
    compute_stats,
    extract_tensor,
    extract_tensor_file,
    flatten_blocks,
    normalize,
    read_dctt,
    read_stats,
    split_dct_tensor,
    unflatten_blocks,
    write_dctt,
    write_stats,
)
from .frontend import (
    AnchorSet,
    Detection,
    Kernel,
    NetworkWeights,
    block_conv8,
    build_desk_network,
    conv2d,
    decode_boxes,
    forward,
    generate_anchors,
    iou_matrix,
    load_weights,
    nms,
    pixel_to_freq_weights,
    save_weights,
)
from .evaluation import (
    ApResult,
    DetectionRecord,
    GroundTruthRecord,
    PrecisionRecallCurve,
    evaluate,
    interpolated_ap,
    iou,
    match_detections,
    size_bucket_report,
)
from .perf import (
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

__all__ = [
    "AnchorSet", "ApResult", "ArchSpec", "BadRestartMarker", "BenchReport",
    "ComponentPlane", "DCT_MATRIX", "Detection", "DetectionRecord",
    "EmptyCorpus", "FreqdetError", "GroundTruthRecord", "HuffmanOverrun",
    "InvalidCodeCounts", "JpegError", "JpegStructure", "Kernel", "LayerSpec",
    "MissingSOI", "MissingTable", "NetworkWeights", "NormStats",
    "PrecisionRecallCurve", "TruncatedSegment", "UnsupportedMode",
    "ZIGZAG_ORDER", "assemble_dct_tensor", "bench_decode", "bench_forward",
    "block_conv8", "build_desk_network", "compute_stats", "conv2d",
    "decode_boxes", "decode_scan", "dequantize", "dequantized_planes",
    "dezigzag", "estimate_flops", "evaluate", "extract_tensor",
    "extract_tensor_file", "fdct_block", "flatten_blocks", "flops_report",
    "forward", "full_decode_reference", "generate_anchors", "idct_block",
    "interpolated_ap", "iou", "iou_matrix", "load_weights",
    "match_detections", "nms", "normalize", "parse_stream",
    "pixel_to_freq_weights", "read_dctt", "read_stats", "save_weights",
    "size_bucket_report", "split_dct_tensor", "ssd300_arch", "ssd_freq_arch",
    "to_zigzag", "unflatten_blocks", "upsample_chroma_to_444", "write_dctt",
    "write_stats", "ycbcr_to_rgb", "zigzag_index", "zigzag_map",
]
