"""Detections -> text: box matching by recall, field assembly, caption association."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .detect import Detection
from .geometry import recall_coverage
from .ir import TextBox
from .text import join_fragments

logger = logging.getLogger(__name__)

DEFAULT_TAU = 0.5
DEFAULT_MAX_GAP_PT = 30.0

# candidate caption boxes may start slightly above the detection's bottom edge
CAPTION_TOP_SLACK_PT = 2.0
CAPTION_MIN_H_OVERLAP = 0.3
CAPTION_LINE_FACTOR = 1.5


@dataclass(frozen=True)
class FieldText:
    klass: str  # title | author | abstract
    text: str
    boxes: tuple[TextBox, ...]
    recall_values: tuple[float, ...]


@dataclass(frozen=True)
class Caption:
    text: str
    boxes: tuple[TextBox, ...]
    vertical_gap: float
    owner: Detection


def match_text_boxes(det: Detection, boxes: list[TextBox],
                     tau: float = DEFAULT_TAU) -> list[TextBox]:
    """Text boxes covered by the detection at recall >= tau, in reading order.

    Zero-area boxes cannot have a defined recall and are skipped with a
    warning.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    matched = []
    for box in sorted(boxes, key=lambda b: b.order):
        if box.rect.area <= 0:
            logger.warning("skipping zero-area text box %s", box.key)
            continue
        if recall_coverage(det.rect, box.rect) >= tau:
            matched.append(box)
    return matched


def assemble_field_text(boxes: list[TextBox]) -> str:
    """Join matched box texts (reading order) into one field string."""
    return join_fragments([b.text for b in boxes])


def build_field_text(klass: str, det: Detection, boxes: list[TextBox],
                     tau: float = DEFAULT_TAU) -> FieldText:
    matched = match_text_boxes(det, boxes, tau)
    recalls = tuple(recall_coverage(det.rect, b.rect) for b in matched)
    return FieldText(klass, assemble_field_text(matched), tuple(matched), recalls)


def associate_caption(owner: Detection, boxes: list[TextBox],
                      max_gap: float = DEFAULT_MAX_GAP_PT) -> Caption | None:
    """Find the caption text block directly below a figure/table detection.

    Candidates must start below the owner's bottom edge (2pt slack) and
    overlap it horizontally by at least 30% of the narrower extent, which
    keeps the neighboring column out. The nearest candidate wins when its
    vertical gap is within max_gap; subsequent lines of the same block
    (inter-line gap <= 1.5x line height) are appended.
    """
    if owner.klass not in ("figure", "table"):
        raise ValueError(f"caption owner must be figure/table, got {owner.klass}")

    def h_overlap(box: TextBox) -> float:
        lo = max(owner.rect.x0, box.rect.x0)
        hi = min(owner.rect.x1, box.rect.x1)
        width = min(owner.rect.width, box.rect.width)
        if width <= 0:
            return 0.0
        return max(0.0, hi - lo) / width

    candidates = [
        box for box in boxes
        if box.rect.page_index == owner.rect.page_index
        and box.rect.y0 >= owner.rect.y1 - CAPTION_TOP_SLACK_PT
        and h_overlap(box) >= CAPTION_MIN_H_OVERLAP
    ]
    if not candidates:
        return None
    candidates.sort(key=lambda b: (b.rect.y0 - owner.rect.y1, b.rect.x0))
    first = candidates[0]
    gap = first.rect.y0 - owner.rect.y1
    if gap > max_gap:
        return None

    block = [first]
    line_height = max(first.rect.height, 1.0)
    for box in candidates[1:]:
        if box.rect.y0 - block[-1].rect.y1 <= CAPTION_LINE_FACTOR * line_height:
            block.append(box)
        else:
            break
    block.sort(key=lambda b: b.order)
    return Caption(
        text=join_fragments([b.text for b in block]),
        boxes=tuple(block),
        vertical_gap=max(gap, 0.0),
        owner=owner,
    )


def load_field_ground_truth(data) -> dict[tuple[str, str], list[tuple[int, int]]]:
    """Parse field-level ground truth: which IR boxes make up each field.

    Format: a JSON list of {doc_id, field, box_refs: [[page, order], ...]}.
    """
    import json

    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    if not isinstance(data, list):
        raise ValueError("field ground truth: expected a JSON list")
    out: dict[tuple[str, str], list[tuple[int, int]]] = {}
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise ValueError(f"entry [{i}]: expected object")
        try:
            key = (entry["doc_id"], entry["field"])
            refs = [(int(p), int(o)) for p, o in entry["box_refs"]]
        except (KeyError, TypeError, ValueError):
            raise ValueError(
                f"entry [{i}]: requires doc_id, field, box_refs [[page, order]]"
            ) from None
        out[key] = refs
    return out


def classify_extraction_refs(extracted: list[TextBox],
                             gt_refs: list[tuple[int, int]]) -> str:
    """classify_extraction against (page, order) references instead of boxes."""
    if not gt_refs:
        raise ValueError("classify_extraction: ground truth must be non-empty")
    got = {b.key for b in extracted}
    want = {tuple(ref) for ref in gt_refs}
    if got == want:
        return "complete"
    if len(got & want) / len(want) >= 0.5 or want <= got:
        return "partial"
    return "fail"


def classify_extraction(extracted: list[TextBox],
                        ground_truth: list[TextBox]) -> str:
    """Three-level outcome against ground-truth boxes (by box identity).

    complete: extracted set equals ground truth exactly.
    partial:  at least half the ground-truth boxes were recovered, or all
              were recovered but extras crept in.
    fail:     everything else.
    """
    return classify_extraction_refs(extracted, [b.key for b in ground_truth])
