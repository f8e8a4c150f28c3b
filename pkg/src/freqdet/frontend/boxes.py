"""Anchor generation, box decoding and non-maximum suppression."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LevelConfig:
    """Anchor layout for one feature-map level.

    scale/next_scale are fractions of the image side; one box per aspect
    ratio plus, when add_extra is set, the sqrt(s_k * s_k+1) ratio-1 box
    of the reference single-shot scheme.
    """

    rows: int
    cols: int
    scale: float
    aspect_ratios: tuple = (1.0,)
    next_scale: float = None
    add_extra: bool = False


@dataclass
class AnchorSet:
    """Anchor boxes as (N, 4) cx, cy, w, h in [0, 1] plus per-level counts."""

    boxes: np.ndarray
    level_counts: tuple

    def __len__(self):
        return len(self.boxes)


def generate_anchors(levels) -> AnchorSet:
    """Tile anchor boxes over each feature-map level.

    At cell (i, j): center ((j+0.5)/cols, (i+0.5)/rows); per aspect ratio
    r a box of width s*sqrt(r), height s/sqrt(r).
    """
    levels = list(levels)
    if not levels:
        raise ValueError("at least one anchor level is required")
    all_boxes = []
    counts = []
    for lv in levels:
        if lv.scale <= 0 or lv.scale > 1:
            raise ValueError(f"scale must be in (0, 1]: {lv.scale}")
        if any(r <= 0 for r in lv.aspect_ratios):
            raise ValueError("aspect ratios must be positive")
        shapes = [(lv.scale * np.sqrt(r), lv.scale / np.sqrt(r))
                  for r in lv.aspect_ratios]
        if lv.add_extra:
            if lv.next_scale is None:
                raise ValueError("add_extra requires next_scale")
            s = np.sqrt(lv.scale * lv.next_scale)
            shapes.append((s, s))
        cy = (np.arange(lv.rows) + 0.5) / lv.rows
        cx = (np.arange(lv.cols) + 0.5) / lv.cols
        grid_cy, grid_cx = np.meshgrid(cy, cx, indexing="ij")
        for w, h in shapes:
            boxes = np.stack([grid_cx.ravel(), grid_cy.ravel(),
                              np.full(lv.rows * lv.cols, w),
                              np.full(lv.rows * lv.cols, h)], axis=1)
            all_boxes.append(boxes.reshape(lv.rows, lv.cols, 4))
        n = len(shapes)
        # interleave so boxes of one cell are adjacent: (rows, cols, n, 4)
        stacked = np.stack(all_boxes[-n:], axis=2).reshape(-1, 4)
        del all_boxes[-n:]
        all_boxes.append(stacked)
        counts.append(lv.rows * lv.cols * n)
    return AnchorSet(boxes=np.concatenate(all_boxes, axis=0),
                     level_counts=tuple(counts))


def decode_boxes(loc: np.ndarray, anchors: AnchorSet,
                 variances=(0.1, 0.2)) -> np.ndarray:
    """Regression offsets (tx, ty, tw, th) -> corner boxes in [0, 1]."""
    loc = np.asarray(loc, dtype=np.float64)
    a = anchors.boxes
    if loc.shape != a.shape:
        raise ValueError(f"offset count {loc.shape} != anchor count {a.shape}")
    cx = a[:, 0] + loc[:, 0] * variances[0] * a[:, 2]
    cy = a[:, 1] + loc[:, 1] * variances[0] * a[:, 3]
    w = a[:, 2] * np.exp(loc[:, 2] * variances[1])
    h = a[:, 3] * np.exp(loc[:, 3] * variances[1])
    corners = np.stack([cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2], axis=1)
    return np.clip(corners, 0.0, 1.0)


def iou_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise IoU of corner boxes, shapes (N, 4) x (M, 4) -> (N, M)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    lt = np.maximum(a[:, None, :2], b[None, :, :2])
    rb = np.minimum(a[:, None, 2:], b[None, :, 2:])
    wh = np.clip(rb - lt, 0.0, None)
    inter = wh[..., 0] * wh[..., 1]
    area_a = (a[:, 2] - a[:, 0]) * (a[:, 3] - a[:, 1])
    area_b = (b[:, 2] - b[:, 0]) * (b[:, 3] - b[:, 1])
    union = area_a[:, None] + area_b[None, :] - inter
    return np.where(union > 0, inter / np.where(union > 0, union, 1.0), 0.0)


def nms(boxes: np.ndarray, scores: np.ndarray, iou_threshold: float = 0.45,
        top_k: int = 200) -> list:
    """Greedy non-maximum suppression; returns kept indices.

    Boxes are visited by descending score, ties broken by lower original
    index; a box is suppressed if its IoU with any kept box exceeds the
    threshold.
    """
    boxes = np.asarray(boxes, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    if len(boxes) != len(scores):
        raise ValueError("boxes and scores must align")
    if len(boxes) == 0:
        return []
    order = np.argsort(-scores, kind="stable")
    kept = []
    for idx in order:
        if len(kept) >= top_k:
            break
        if kept:
            ious = iou_matrix(boxes[idx:idx + 1], boxes[kept])[0]
            if np.any(ious > iou_threshold):
                continue
        kept.append(int(idx))
    return kept
