from .conv import Kernel, block_conv8, conv2d, pixel_to_freq_weights, relu, softmax
from .boxes import AnchorSet, decode_boxes, generate_anchors, iou_matrix, nms
from .conv import block_conv8_tensor
from .network import (
    Detection,
    NetworkWeights,
    build_desk_network,
    forward,
    forward_raw,
    load_weights,
    save_weights,
)

__all__ = [
    "AnchorSet",
    "Detection",
    "Kernel",
    "NetworkWeights",
    "block_conv8",
    "block_conv8_tensor",
    "build_desk_network",
    "conv2d",
    "decode_boxes",
    "forward",
    "forward_raw",
    "generate_anchors",
    "iou_matrix",
    "load_weights",
    "nms",
    "pixel_to_freq_weights",
    "relu",
    "softmax",
]
