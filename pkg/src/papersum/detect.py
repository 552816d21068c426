"""Component detections: external detector output loading plus a rule-based fallback.

The pipeline is detector-agnostic: any model that can emit per-page class /
bbox / confidence triples is wired in through the detections JSON format.
The built-in heuristic detector covers title, author, abstract, and figure
on plain layouts so the pipeline runs standalone; it deliberately skips
tables (no visual features to work with).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .geometry import Rect
from .ir import DocumentIR, TextBox

CLASSES = ("abstract", "author", "figure", "table", "title")

DETECTIONS_VERSION = 1

# fixed confidences for heuristic rules; they only encode reliability order
CONF_TITLE = 0.9
CONF_ABSTRACT = 0.8
CONF_FIGURE = 0.7
CONF_AUTHOR = 0.6

TITLE_BAND_FRACTION = 0.4

_ABSTRACT_RE = re.compile(r"^abstract\b", re.IGNORECASE)
_HEADING_RE = re.compile(r"^(\d+\.?\s+\S|[IVXL]+\.\s+\S|(references|acknowledg)\b)",
                         re.IGNORECASE)


class DetectionError(ValueError):
    """Malformed detections file."""


@dataclass(frozen=True)
class Detection:
    klass: str
    rect: Rect
    confidence: float
    source: str = "external"  # external | heuristic

    def __post_init__(self) -> None:
        if self.klass not in CLASSES:
            raise DetectionError(f"unknown class {self.klass!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise DetectionError(f"confidence out of [0,1]: {self.confidence}")


@dataclass(frozen=True)
class FirstPageFields:
    title: Detection | None = None
    author: Detection | None = None
    abstract: Detection | None = None


# ---------------------------------------------------------------------------
# External detections
# ---------------------------------------------------------------------------

def load_detections(data: bytes | str | dict, ir: DocumentIR) -> list[Detection]:
    """Parse a detections JSON document against the IR's page geometry.

    Coordinates come in either normalized [0,1] page fractions or pixel
    coordinates with a declared render size; both are converted to PDF
    points and clamped to the page.
    """
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DetectionError(f"invalid JSON: {exc}") from None
    else:
        doc = data
    if not isinstance(doc, dict) or not isinstance(doc.get("pages"), list):
        raise DetectionError("detections: expected object with a 'pages' list")

    out: list[Detection] = []
    for p_entry, raw_page in enumerate(doc["pages"]):
        where = f"pages[{p_entry}]"
        if not isinstance(raw_page, dict):
            raise DetectionError(f"{where}: expected object")
        page_index = raw_page.get("page_index", p_entry)
        if not isinstance(page_index, int) or not 0 <= page_index < len(ir.pages):
            raise DetectionError(f"{where}.page_index: out of range: {page_index!r}")
        page = ir.pages[page_index]
        coord_space = raw_page.get("coord_space", "normalized")
        if coord_space not in ("normalized", "pixel"):
            raise DetectionError(
                f"{where}.coord_space: expected 'normalized' or 'pixel'"
            )
        if coord_space == "pixel":
            render = raw_page.get("render_size")
            if (not isinstance(render, (list, tuple))) or len(render) != 2:
                raise DetectionError(
                    f"{where}.render_size: required for pixel coordinates"
                )
            sx = page.width / float(render[0])
            sy = page.height / float(render[1])
        else:
            sx, sy = page.width, page.height

        for i_item, item in enumerate(raw_page.get("items", [])):
            iw = f"{where}.items[{i_item}]"
            klass = item.get("class")
            if klass not in CLASSES:
                raise DetectionError(f"{iw}.class: unknown class {klass!r}")
            bbox = item.get("bbox")
            if (not isinstance(bbox, (list, tuple))) or len(bbox) != 4:
                raise DetectionError(f"{iw}.bbox: expected [x0, y0, x1, y1]")
            x0, y0, x1, y1 = (float(v) for v in bbox)
            x0, x1 = sorted((x0 * sx, x1 * sx))
            y0, y1 = sorted((y0 * sy, y1 * sy))
            x0 = min(max(x0, 0.0), page.width)
            x1 = min(max(x1, 0.0), page.width)
            y0 = min(max(y0, 0.0), page.height)
            y1 = min(max(y1, 0.0), page.height)
            conf = float(item.get("confidence", 1.0))
            out.append(Detection(klass, Rect(x0, y0, x1, y1, page_index), conf,
                                 "external"))
    return out


def detections_to_dict(dets: list[Detection], ir: DocumentIR) -> dict:
    """Serialize detections back to normalized coordinates."""
    pages: dict[int, list] = {}
    for det in dets:
        page = ir.pages[det.rect.page_index]
        pages.setdefault(det.rect.page_index, []).append({
            "class": det.klass,
            "bbox": [det.rect.x0 / page.width, det.rect.y0 / page.height,
                     det.rect.x1 / page.width, det.rect.y1 / page.height],
            "confidence": det.confidence,
        })
    return {
        "detections_version": DETECTIONS_VERSION,
        "pages": [
            {"page_index": idx, "coord_space": "normalized", "items": items}
            for idx, items in sorted(pages.items())
        ],
    }


# ---------------------------------------------------------------------------
# Heuristic detector
# ---------------------------------------------------------------------------

def _merge_rects(boxes: list[TextBox]) -> Rect:
    rect = boxes[0].rect
    for box in boxes[1:]:
        rect = rect.union_bounds(box.rect)
    return rect


def detect_heuristic(ir: DocumentIR) -> list[Detection]:
    """Rule-based layout detection on the IR.

    title    = merged run of maximum-font-size boxes in the top 40% of page 0
    author   = boxes between the title bottom and the abstract heading top
    abstract = body block after a box matching /^abstract/i, up to the next
               section-like heading
    figure   = every image region, any page
    """
    out: list[Detection] = []
    if not ir.pages:
        return out
    page0 = ir.pages[0]
    boxes = list(page0.text_boxes)

    title_boxes: list[TextBox] = []
    band = page0.height * TITLE_BAND_FRACTION
    candidates = [b for b in boxes if b.rect.y1 <= band and b.font_size > 0]
    if candidates:
        max_font = max(b.font_size for b in candidates)
        title_boxes = [b for b in candidates if b.font_size == max_font]
        out.append(Detection("title", _merge_rects(title_boxes), CONF_TITLE,
                             "heuristic"))

    abstract_heading: TextBox | None = None
    abstract_boxes: list[TextBox] = []
    for i, box in enumerate(boxes):
        if _ABSTRACT_RE.match(box.text):
            abstract_heading = box
            for later in boxes[i + 1:]:
                if _HEADING_RE.match(later.text):
                    break
                abstract_boxes.append(later)
            break
    if abstract_boxes:
        out.append(Detection("abstract", _merge_rects(abstract_boxes),
                             CONF_ABSTRACT, "heuristic"))

    if title_boxes:
        title_bottom = max(b.rect.y1 for b in title_boxes)
        if abstract_heading is not None:
            abstract_top = abstract_heading.rect.y0
        elif abstract_boxes:
            abstract_top = min(b.rect.y0 for b in abstract_boxes)
        else:
            abstract_top = band
        author_boxes = [
            b for b in boxes
            if b not in title_boxes
            and b.rect.y0 >= title_bottom and b.rect.y1 <= abstract_top
        ]
        if author_boxes:
            out.append(Detection("author", _merge_rects(author_boxes),
                                 CONF_AUTHOR, "heuristic"))

    for page in ir.pages:
        for region in page.image_regions:
            out.append(Detection("figure", region.rect, CONF_FIGURE, "heuristic"))
    return out


# ---------------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------------

def select_first_page_fields(dets: list[Detection]) -> FirstPageFields:
    """Highest-confidence page-0 detection per field; ties go top-left."""
    chosen: dict[str, Detection] = {}
    for det in dets:
        if det.klass not in ("title", "author", "abstract"):
            continue
        if det.rect.page_index != 0:
            continue
        cur = chosen.get(det.klass)
        if cur is None:
            chosen[det.klass] = det
            continue
        if (-det.confidence, det.rect.y0, det.rect.x0) < \
           (-cur.confidence, cur.rect.y0, cur.rect.x0):
            chosen[det.klass] = det
    return FirstPageFields(
        title=chosen.get("title"),
        author=chosen.get("author"),
        abstract=chosen.get("abstract"),
    )


def select_figures_tables(dets: list[Detection],
                          conf_threshold: float = 0.5) -> list[Detection]:
    """All figure/table detections at or above the confidence threshold."""
    if not 0.0 <= conf_threshold <= 1.0:
        raise ValueError(f"conf_threshold out of [0,1]: {conf_threshold}")
    return [d for d in dets
            if d.klass in ("figure", "table") and d.confidence >= conf_threshold]
