"""PASCAL VOC detection evaluation.

IoU, greedy confidence-ordered matching, 11-point interpolated average
precision, mAP, and a size-bucketed matched/unmatched analysis of ground
truth by sqrt(area) of the box.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

DEFAULT_BUCKET_EDGES = (45.0, 85.0, 135.0, 250.0)


@dataclass(frozen=True)
class GroundTruthRecord:
    image_id: str
    class_name: str
    bbox: tuple  # (xmin, ymin, xmax, ymax) in pixels
    difficult: bool = False

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate box {self.bbox}")


@dataclass(frozen=True)
class DetectionRecord:
    image_id: str
    class_name: str
    bbox: tuple
    score: float

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate box {self.bbox}")
        if not np.isfinite(self.score):
            raise ValueError(f"non-finite score {self.score}")


@dataclass
class PrecisionRecallCurve:
    """Detection outcomes sorted by descending confidence."""

    tp_flags: np.ndarray  # bool, descending-confidence order
    num_positives: int  # non-difficult ground-truth count

    @property
    def precision(self) -> np.ndarray:
        tp = np.cumsum(self.tp_flags)
        return tp / np.arange(1, len(self.tp_flags) + 1)

    @property
    def recall(self) -> np.ndarray:
        return np.cumsum(self.tp_flags) / self.num_positives


@dataclass
class ApResult:
    per_class_ap: dict
    map_score: float
    buckets: list = field(default_factory=list)


def iou(a, b, legacy_plus_one: bool = False) -> float:
    """Intersection over union of two corner boxes.

    Continuous-coordinate convention by default; legacy_plus_one adds 1
    to widths/heights as in the original VOC devkit's pixel counting.
    """
    extra = 1.0 if legacy_plus_one else 0.0
    iw = min(a[2], b[2]) - max(a[0], b[0]) + extra
    ih = min(a[3], b[3]) - max(a[1], b[1]) + extra
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    area_a = (a[2] - a[0] + extra) * (a[3] - a[1] + extra)
    area_b = (b[2] - b[0] + extra) * (b[3] - b[1] + extra)
    union = area_a + area_b - inter
    return inter / union if union > 0 else 0.0


def match_detections(dets, gts, iou_threshold: float = 0.5,
                     legacy_plus_one: bool = False):
    """Greedy VOC matching for one class.

    Detections are visited in descending confidence (ties broken by input
    order).  A detection is a TP iff its best-IoU not-yet-matched,
    non-difficult GT in the same image reaches the threshold; that GT is
    then consumed.  Otherwise, if a difficult GT reaches the threshold
    the detection is ignored (neither TP nor FP); otherwise it is an FP.

    Returns (outcomes, gt_matched): outcomes is a list aligned with the
    sorted detections of "tp" / "fp" / "ignored", gt_matched a boolean
    list aligned with gts.
    """
    order = sorted(range(len(dets)), key=lambda i: (-dets[i].score, i))
    by_image = {}
    for gi, gt in enumerate(gts):
        by_image.setdefault(gt.image_id, []).append(gi)
    gt_matched = [False] * len(gts)
    outcomes = []
    for di in order:
        det = dets[di]
        best_iou, best_gi = 0.0, -1
        difficult_hit = False
        for gi in by_image.get(det.image_id, ()):
            v = iou(det.bbox, gts[gi].bbox, legacy_plus_one)
            if gts[gi].difficult:
                difficult_hit = difficult_hit or v >= iou_threshold
            elif not gt_matched[gi] and v > best_iou:
                best_iou, best_gi = v, gi
        if best_gi >= 0 and best_iou >= iou_threshold:
            gt_matched[best_gi] = True
            outcomes.append("tp")
        elif difficult_hit:
            outcomes.append("ignored")
        else:
            outcomes.append("fp")
    return outcomes, gt_matched


def interpolated_ap(curve: PrecisionRecallCurve,
                    eleven_point: bool = True) -> float:
    """Average precision with 11-point interpolation (default) or the
    continuous all-points variant.

    11-point: AP = (1/11) * sum over r in {0, 0.1, ..., 1} of
    max precision at recall >= r, taken as 0 when unreachable.
    """
    if curve.num_positives < 1:
        raise ValueError("AP undefined for a class with no positives")
    if len(curve.tp_flags) == 0:
        return 0.0
    prec = curve.precision
    rec = curve.recall
    if eleven_point:
        # precision and recall are integer ratios; exact rational
        # arithmetic keeps hand-derivable APs (e.g. 28/33) exact
        tp = np.cumsum(curve.tp_flags)
        total = Fraction(0)
        for level in range(11):
            r = Fraction(level, 10)
            best = Fraction(0)
            for k in range(len(tp)):
                if Fraction(int(tp[k]), curve.num_positives) >= r:
                    best = max(best, Fraction(int(tp[k]), k + 1))
            total += best
        return float(total / 11)
    # continuous: integrate the monotone precision envelope over recall
    mrec = np.concatenate([[0.0], rec, [1.0]])
    mpre = np.concatenate([[0.0], prec, [0.0]])
    for i in range(len(mpre) - 2, -1, -1):
        mpre[i] = max(mpre[i], mpre[i + 1])
    idx = np.nonzero(mrec[1:] != mrec[:-1])[0]
    return float(np.sum((mrec[idx + 1] - mrec[idx]) * mpre[idx + 1]))


def size_bucket_report(gt_matched, gts, edges=DEFAULT_BUCKET_EDGES) -> list:
    """Bucket ground truth by sqrt(box area).

    Bucket 0 covers sqrt(area) < edges[0]; bucket i covers
    [edges[i-1], edges[i]); the final bucket is unbounded above.
    Difficult GT is excluded.  Returns [{lo, hi, total, matched,
    unmatched}].
    """
    edges = list(edges)
    if any(b <= a for a, b in zip(edges, edges[1:])) or any(e <= 0 for e in edges):
        raise ValueError(f"bucket edges must be positive and increasing: {edges}")
    bounds = [0.0] + edges + [None]
    buckets = [{"lo": bounds[i], "hi": bounds[i + 1], "total": 0,
                "matched": 0, "unmatched": 0}
               for i in range(len(bounds) - 1)]
    for matched, gt in zip(gt_matched, gts):
        if gt.difficult:
            continue
        x0, y0, x1, y1 = gt.bbox
        side = np.sqrt((x1 - x0) * (y1 - y0))
        bi = int(np.searchsorted(edges, side, side="right"))
        buckets[bi]["total"] += 1
        buckets[bi]["matched" if matched else "unmatched"] += 1
    return buckets


def evaluate(dets, gts, iou_threshold: float = 0.5,
             eleven_point: bool = True, bucket_edges=DEFAULT_BUCKET_EDGES,
             legacy_plus_one: bool = False) -> ApResult:
    """Full evaluation: per-class AP, mAP over classes with ground
    truth, and the size-bucket report pooled over all classes."""
    classes = sorted({gt.class_name for gt in gts})
    per_class_ap = {}
    all_matched = []
    all_gts = []
    for cls in classes:
        cls_gts = [g for g in gts if g.class_name == cls]
        cls_dets = [d for d in dets if d.class_name == cls]
        outcomes, gt_matched = match_detections(
            cls_dets, cls_gts, iou_threshold, legacy_plus_one)
        num_pos = sum(1 for g in cls_gts if not g.difficult)
        all_matched.extend(gt_matched)
        all_gts.extend(cls_gts)
        if num_pos == 0:
            continue  # no positives: class excluded from mAP
        flags = np.array([o == "tp" for o in outcomes
                          if o != "ignored"], dtype=bool)
        curve = PrecisionRecallCurve(tp_flags=flags, num_positives=num_pos)
        per_class_ap[cls] = interpolated_ap(curve, eleven_point)
    map_score = (float(np.mean(list(per_class_ap.values())))
                 if per_class_ap else 0.0)
    buckets = size_bucket_report(all_matched, all_gts, bucket_edges)
    return ApResult(per_class_ap=per_class_ap, map_score=map_score,
                    buckets=buckets)


# --- JSON record I/O -----------------------------------------------------

def load_ground_truth(path) -> list:
    with open(path) as f:
        raw = json.load(f)
    return [GroundTruthRecord(image_id=str(r["image_id"]),
                              class_name=str(r["class"]),
                              bbox=tuple(float(v) for v in r["bbox"]),
                              difficult=bool(r.get("difficult", False)))
            for r in raw]


def load_detections(path) -> list:
    with open(path) as f:
        raw = json.load(f)
    return [DetectionRecord(image_id=str(r["image_id"]),
                            class_name=str(r["class"]),
                            bbox=tuple(float(v) for v in r["bbox"]),
                            score=float(r["score"]))
            for r in raw]


def report_to_dict(result: ApResult) -> dict:
    return {
        "per_class_ap": dict(result.per_class_ap),
        "map": result.map_score,
        "buckets": result.buckets,
    }
